#include "sasakigeo/sphere.hpp"

#include <algorithm>
#include <cmath>

#include "sasakigeo/util.hpp"

namespace sasakigeo {

SphereBundleConfig::SphereBundleConfig(WeightedSasakiMetric G, double r)
    : G_(std::move(G)), constant_(true), r_const_(r) {
  if (r <= 0.0) throw ConfigError("radius must be positive");
}

SphereBundleConfig::SphereBundleConfig(WeightedSasakiMetric G, RadiusField field)
    : G_(std::move(G)), constant_(false), field_(std::move(field)) {
  if (!field_.r || !field_.grad || !field_.hess)
    throw ConfigError("radius field needs value, gradient and hessian");
}

double SphereBundleConfig::radius(const VectorXd& x) const {
  if (constant_) return r_const_;
  double r = field_.r(x);
  if (r <= 0.0) throw GeometryError("radius must stay positive");
  return r;
}

VectorXd SphereBundleConfig::grad_radius(const VectorXd& x) const {
  if (constant_) return VectorXd::Zero(base_dim());
  return field_.grad(x);
}

MatrixXd SphereBundleConfig::hess_radius(const VectorXd& x) const {
  if (constant_) return MatrixXd::Zero(base_dim(), base_dim());
  return field_.hess(x);
}

double SphereBundleConfig::tau(const VectorXd& x) const {
  if (constant_) return 0.0;
  VectorXd gr = grad_radius(x);
  MatrixXd g = G_.base->metric(x);
  return std::sqrt(gr.dot(g * gr));
}

void SphereBundleConfig::check_on_bundle(const SasakiPointData& d) const {
  double r = radius(d.x());
  double nu = std::sqrt(d.inner(d.u(), d.u()));
  if (std::abs(nu - r) > 1e-8)
    throw PreconditionError("point not on the radius-r sphere bundle");
}

double tangency_defect(const SphereBundleConfig& C, const SasakiPointData& d,
                       const SplitTangentVector& X) {
  C.check_on_bundle(d);
  double r = C.radius(d.x());
  return d.inner(X.v, d.u()) - r * d.inner(C.grad_radius(d.x()), X.h);
}

NormalField unit_normal(const SphereBundleConfig& C, const SasakiPointData& d) {
  C.check_on_bundle(d);
  double r = C.radius(d.x());
  double t = C.tau(d.x());
  double delta = d.delta();
  double b = 1.0 / (r * std::sqrt(d.f2() + delta * d.f2() * t * t));
  double a = -delta * b * r;
  return {a, b};
}

SplitTangentVector normal_vector(const SphereBundleConfig& C,
                                 const SasakiPointData& d) {
  NormalField nf = unit_normal(C, d);
  return {nf.a * C.grad_radius(d.x()), nf.b * d.u()};
}

namespace {

void require_tangent(const SphereBundleConfig& C, const SasakiPointData& d,
                     const SplitTangentVector& X) {
  double defect = std::abs(tangency_defect(C, d, X));
  double scale = std::max(1.0, X.max_abs());
  if (defect > 1e-8 * scale)
    throw PreconditionError("argument not tangent to S_rM");
}

} // namespace

double second_fundamental(const SphereBundleConfig& C, const SasakiPointData& d,
                          const SplitTangentVector& X, const SplitTangentVector& Y) {
  require_tangent(C, d, X);
  require_tangent(C, d, Y);
  double r = C.radius(d.x());
  if (C.constant_mode())
    return -(std::sqrt(d.f2()) / r) * d.inner(X.v, Y.v);

  NormalField nf = unit_normal(C, d);
  VectorXd gr = C.grad_radius(d.x());
  MatrixXd hr = C.hess_radius(d.x());
  double Ar = d.inner(tensor_A(d, X, Y).h, gr);
  double hessXY = X.h.dot(d.g() * (hr * Y.h));  // <Y, nabla_X grad r> pairing
  double Xr = d.inner(gr, X.h);
  double Yr = d.inner(gr, Y.h);
  return nf.a * d.f1() * (Ar - hessXY) +
         nf.b * d.f2() * (Xr * Yr - d.inner(X.v, Y.v));
}

double mean_curvature(const SphereBundleConfig& C, const SasakiPointData& d) {
  C.check_on_bundle(d);
  if (!C.constant_mode() && C.hess_radius(d.x()).cwiseAbs().maxCoeff() > 1e-8)
    throw PreconditionError("mean curvature closed form needs nabla dr = 0");
  double n = static_cast<double>(C.fiber_dim());
  double t = C.tau(d.x());
  double r = C.radius(d.x());
  return -n / (r * std::sqrt(d.f2() + d.delta() * d.f2() * t * t));
}

std::vector<SplitTangentVector> tangent_frame(const SphereBundleConfig& C,
                                              const SasakiPointData& d) {
  C.check_on_bundle(d);
  const int m = d.dim();
  const double s1 = 1.0 / std::sqrt(d.f1());
  const double s2 = 1.0 / std::sqrt(d.f2());

  if (C.constant_mode()) {
    // Adapted frame has e_m = u/r; its vertical lift is the normal direction.
    std::vector<SplitTangentVector> frame;
    for (const VectorXd& e : d.frame())
      frame.push_back(SplitTangentVector::horizontal(s1 * e));
    for (int j = 0; j + 1 < m; ++j)
      frame.push_back(SplitTangentVector::vertical(s2 * d.frame()[j]));
    return frame;
  }

  // General mode: project the split basis G-orthogonally to the unit normal
  // and Gram-Schmidt in G.
  SplitTangentVector N = normal_vector(C, d);
  std::vector<SplitTangentVector> candidates;
  for (const VectorXd& e : d.frame())
    candidates.push_back(SplitTangentVector::horizontal(e));
  for (const VectorXd& e : d.frame())
    candidates.push_back(SplitTangentVector::vertical(e));

  std::vector<SplitTangentVector> frame;
  for (const SplitTangentVector& c : candidates) {
    if (static_cast<int>(frame.size()) == 2 * m - 1) break;
    SplitTangentVector v = c - N * d.pair(c, N);
    for (const SplitTangentVector& f : frame) v = v - f * d.pair(v, f);
    for (const SplitTangentVector& f : frame) v = v - f * d.pair(v, f);
    double n2 = d.pair(v, v);
    if (n2 < 1e-18) continue;
    frame.push_back(v * (1.0 / std::sqrt(n2)));
  }
  if (static_cast<int>(frame.size()) != 2 * m - 1)
    throw RankError("failed to build tangent frame of S_rM");
  return frame;
}

double mean_curvature_trace(const SphereBundleConfig& C, const SasakiPointData& d) {
  double h = 0.0;
  for (const SplitTangentVector& f : tangent_frame(C, d))
    h += second_fundamental(C, d, f, f);
  return h;
}

double curvature_SrM(const SphereBundleConfig& C, const SasakiPointData& d,
                     const SplitTangentVector& X, const SplitTangentVector& Y,
                     const SplitTangentVector& Z, const SplitTangentVector& W) {
  if (!C.constant_mode())
    throw PreconditionError("curvature of S_rM implemented for constant radius");
  require_tangent(C, d, X);
  require_tangent(C, d, Y);
  require_tangent(C, d, Z);
  require_tangent(C, d, W);
  double ambient = curvature_RG4(d, X, Y, Z, W);
  double axz = second_fundamental(C, d, X, Z);
  double ayw = second_fundamental(C, d, Y, W);
  double ayz = second_fundamental(C, d, Y, Z);
  double axw = second_fundamental(C, d, X, W);
  return ambient - axz * ayw + ayz * axw;
}

double ricci_SrM(const SphereBundleConfig& C, const SasakiPointData& d,
                 const SplitTangentVector& X, const SplitTangentVector& Y) {
  if (!C.constant_mode())
    throw PreconditionError("Ricci of S_rM implemented for constant radius");
  require_tangent(C, d, X);
  require_tangent(C, d, Y);
  double r = C.radius(d.x());
  double n = static_cast<double>(C.fiber_dim());
  return ricci_G(d, X, Y) + (n - 1.0) / (r * r) * d.inner(X.v, Y.v);
}

double ricci_SrM_trace(const SphereBundleConfig& C, const SasakiPointData& d,
                       const SplitTangentVector& X, const SplitTangentVector& Y) {
  double s = 0.0;
  for (const SplitTangentVector& f : tangent_frame(C, d))
    s += curvature_SrM(C, d, X, f, f, Y);
  return s;
}

double scalar_SrM(const SphereBundleConfig& C, const SasakiPointData& d) {
  if (!C.constant_mode())
    throw PreconditionError("scalar of S_rM implemented for constant radius");
  C.check_on_bundle(d);
  double r = C.radius(d.x());
  double n = static_cast<double>(C.fiber_dim());
  return scalar_G(d) + (n - 1.0) * n / (d.f2() * r * r);
}

double scalar_SrM_trace(const SphereBundleConfig& C, const SasakiPointData& d) {
  double s = 0.0;
  for (const SplitTangentVector& f : tangent_frame(C, d))
    s += ricci_SrM_trace(C, d, f, f);
  return s;
}

double scalar_SrM(const SphereBundleConfig& C, const TangentBundlePoint& P) {
  SasakiPointData d(C.metric(), P);
  return scalar_SrM(C, d);
}

double mean_curvature(const SphereBundleConfig& C, const TangentBundlePoint& P) {
  SasakiPointData d(C.metric(), P);
  return mean_curvature(C, d);
}

// ---------------------------------------------------------------------------
// Scan
// ---------------------------------------------------------------------------

namespace {

struct SamplePrecompute {
  VectorXd x;
  VectorXd u_dir;     // g-unit fiber direction
  double base_scalar; // S(x)
  double q_unit;      // sum_{ijk} <R(e_i,e_j) u_dir, e_k>^2
};

} // namespace

ScanResult scan_positive_scalar(const std::shared_ptr<const ChartedManifold>& M,
                                const std::vector<double>& f1_grid,
                                const std::vector<double>& f2_grid,
                                const std::vector<double>& r_grid,
                                int sample_points, std::uint64_t seed) {
  if (!M) throw ConfigError("scan needs a manifold");
  if (M->dim() < 2) throw ConfigError("scan requires dim >= 2");
  if (f1_grid.empty() || f2_grid.empty() || r_grid.empty())
    throw ConfigError("scan grids must be non-empty");
  if (sample_points < 1) throw ConfigError("scan needs at least one sample");
  for (double v : f1_grid)
    if (v <= 0.0) throw ConfigError("f1 grid values must be positive");
  for (double v : f2_grid)
    if (v <= 0.0) throw ConfigError("f2 grid values must be positive");
  for (double v : r_grid)
    if (v <= 0.0) throw ConfigError("r grid values must be positive");

  const int m = M->dim();
  const double n = static_cast<double>(m - 1);

  // Shared sample set: x uniform in the margin-shrunk box, fiber direction a
  // g-normalized Gaussian draw. S and the scriptR quadratic are independent
  // of (f1, f2) and scale as r^2, so each grid cell is a closed-form lookup.
  Rng rng(seed);
  std::vector<SamplePrecompute> samples(static_cast<std::size_t>(sample_points));
  const auto& box = M->domain();
  for (auto& s : samples) {
    VectorXd x(m);
    for (int i = 0; i < m; ++i) {
      double pad = 0.05 * (box.hi[i] - box.lo[i]);
      x(i) = rng.uniform(box.lo[i] + pad, box.hi[i] - pad);
    }
    s.x = x;
    s.u_dir = rng.normal_vector(m);
  }
  parallel_for(samples.size(), [&](std::size_t i) {
    SamplePrecompute& s = samples[i];
    MatrixXd g = M->metric(s.x);
    double nrm = std::sqrt(s.u_dir.dot(g * s.u_dir));
    if (nrm < 1e-12) {
      s.u_dir = VectorXd::Unit(m, 0);
      nrm = std::sqrt(s.u_dir.dot(g * s.u_dir));
    }
    s.u_dir /= nrm;
    WeightedSasakiMetric G(M, 1.0, 1.0);
    SasakiPointData d(G, {s.x, s.u_dir});
    s.base_scalar = d.base_scalar();
    double q = 0.0;
    for (const VectorXd& ei : d.frame())
      for (const VectorXd& ej : d.frame()) {
        VectorXd rvec = d.rr(ei, ej);
        for (const VectorXd& ek : d.frame()) {
          double c = d.inner(rvec, ek);
          q += c * c;
        }
      }
    s.q_unit = q;
  });

  auto cell_min = [&](double f1, double f2, double r, ScanRow& row) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const SamplePrecompute& s = samples[i];
      double sg = s.base_scalar / f1 -
                  f2 / (4.0 * f1 * f1) * s.q_unit * r * r +
                  (n - 1.0) * n / (f2 * r * r);
      if (sg < best) {
        best = sg;
        best_idx = i;
      }
    }
    row.min_scalar = best;
    row.argmin_x = samples[best_idx].x;
    row.argmin_u = (r * samples[best_idx].u_dir).eval();
    row.positive = best > 0.0;
  };

  ScanResult out;
  out.dim = m;
  out.dim2_equal_scalars = (m == 2);
  for (double f1 : f1_grid)
    for (double f2 : f2_grid)
      for (double r : r_grid) {
        ScanRow row;
        row.f1 = f1;
        row.f2 = f2;
        row.r = r;
        cell_min(f1, f2, r, row);
        out.rows.push_back(std::move(row));
      }

  auto lookup = [&](double f1, double f2, double r) -> const ScanRow& {
    for (const ScanRow& row : out.rows)
      if (row.f1 == f1 && row.f2 == f2 && row.r == r) return row;
    throw Error("scan row lookup failed");
  };

  auto axis_threshold = [&](const std::vector<double>& axis,
                            const std::function<const ScanRow&(double)>& at)
      -> ScanThreshold {
    ScanThreshold th;
    bool all_pos = true, all_nonpos = true;
    for (double v : axis) {
      if (at(v).positive)
        all_nonpos = false;
      else
        all_pos = false;
    }
    if (all_pos) {
      th.kind = "all_positive";
      return th;
    }
    if (all_nonpos) {
      th.kind = "all_nonpositive";
      return th;
    }
    th.kind = "bracket";
    for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
      if (at(axis[i]).positive != at(axis[i + 1]).positive) {
        th.lo = axis[i];
        th.hi = axis[i + 1];
        break;
      }
    }
    return th;
  };

  std::vector<double> r_sorted = r_grid;
  std::sort(r_sorted.begin(), r_sorted.end());
  std::vector<double> f1_sorted = f1_grid;
  std::sort(f1_sorted.begin(), f1_sorted.end());

  for (double f1 : f1_grid)
    for (double f2 : f2_grid) {
      ScanThreshold th = axis_threshold(
          r_sorted, [&](double r) -> const ScanRow& { return lookup(f1, f2, r); });
      th.fixed1 = f1;
      th.fixed2 = f2;
      out.r_thresholds.push_back(th);
    }
  for (double f2 : f2_grid)
    for (double r : r_grid) {
      ScanThreshold th = axis_threshold(
          f1_sorted, [&](double f1) -> const ScanRow& { return lookup(f1, f2, r); });
      th.fixed1 = f2;
      th.fixed2 = r;
      out.f1_thresholds.push_back(th);
    }

  // Diagnostics only; the S/f1 part can break monotonicity legitimately.
  for (double f2 : f2_grid)
    for (double r : r_grid)
      for (std::size_t i = 0; i + 1 < f1_sorted.size(); ++i)
        if (lookup(f1_sorted[i + 1], f2, r).min_scalar <
            lookup(f1_sorted[i], f2, r).min_scalar - 1e-12)
          out.monotone_in_f1 = false;
  std::vector<double> f2_sorted = f2_grid;
  std::sort(f2_sorted.begin(), f2_sorted.end());
  for (double f1 : f1_grid)
    for (double r : r_grid)
      for (std::size_t i = 0; i + 1 < f2_sorted.size(); ++i)
        if (lookup(f1, f2_sorted[i], r).min_scalar <
            lookup(f1, f2_sorted[i + 1], r).min_scalar - 1e-12)
          out.monotone_in_f2_decrease = false;

  return out;
}

} // namespace sasakigeo
