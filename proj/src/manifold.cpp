#include "sasakigeo/manifold.hpp"

#include <cmath>
#include <sstream>

namespace sasakigeo {

bool ChartBox::contains(const VectorXd& x, double margin_fraction) const {
  if (static_cast<std::size_t>(x.size()) != lo.size()) return false;
  for (int i = 0; i < x.size(); ++i) {
    double pad = margin_fraction * (hi[i] - lo[i]);
    if (x(i) < lo[i] + pad || x(i) > hi[i] - pad) return false;
  }
  return true;
}

VectorXd ChartBox::clamp_inside(const VectorXd& x, double margin_fraction) const {
  VectorXd y = x;
  for (int i = 0; i < x.size(); ++i) {
    double pad = margin_fraction * (hi[i] - lo[i]);
    y(i) = std::min(std::max(y(i), lo[i] + pad), hi[i] - pad);
  }
  return y;
}

ChartedManifold::ChartedManifold(int dim, MetricFn metric, ChartBox domain,
                                 std::string label)
    : dim_(dim), metric_(std::move(metric)), domain_(std::move(domain)),
      label_(std::move(label)) {
  if (dim_ < 1) throw ConfigError("manifold dimension must be >= 1");
  if (domain_.lo.size() != static_cast<std::size_t>(dim_) ||
      domain_.hi.size() != static_cast<std::size_t>(dim_))
    throw ConfigError("chart box rank does not match dimension");
}

void ChartedManifold::check_domain(const VectorXd& x) const {
  if (x.size() != dim_) throw ShapeError("point dimension mismatch");
  if (!domain_.contains(x))
    throw DomainError("point outside chart domain of " + label_);
}

MatrixXd ChartedManifold::metric(const VectorXd& x) const {
  check_domain(x);
  DenseTensor g = metric_(x);
  if (g.rank() != 2 || g.shape()[0] != dim_ || g.shape()[1] != dim_)
    throw ShapeError("metric must be dim x dim");
  if (!g.all_finite()) throw NumericError("non-finite metric value");
  return g.as_matrix();
}

MatrixXd ChartedManifold::metric_inverse(const VectorXd& x) const {
  MatrixXd g = metric(x);
  Eigen::LDLT<MatrixXd> ldlt(g);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw GeometryError("metric not positive-definite at sample point");
  return ldlt.solve(MatrixXd::Identity(dim_, dim_));
}

DenseTensor ChartedManifold::christoffel_from_metric(const VectorXd& x) const {
  DenseTensor dg = finite_difference_derivative(
      [this](const VectorXd& y) {
        MatrixXd g = metric(y);
        return DenseTensor::from_matrix(g);
      },
      x, fd_);
  MatrixXd ginv = metric_inverse(x);

  const int m = dim_;
  DenseTensor gamma({m, m, m});
  // Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        double s = 0.0;
        for (int l = 0; l < m; ++l)
          s += ginv(k, l) * (dg({i, j, l}) + dg({j, i, l}) - dg({l, i, j}));
        gamma({k, i, j}) = 0.5 * s;
        gamma({k, j, i}) = 0.5 * s;
      }
  return gamma;
}

DenseTensor ChartedManifold::christoffel(const VectorXd& x) const {
  if (analytic_christoffel_) {
    check_domain(x);
    return analytic_christoffel_(x);
  }
  return christoffel_from_metric(x);
}

DenseTensor ChartedManifold::christoffel_fd(const VectorXd& x) const {
  return christoffel_from_metric(x);
}

CurvaturePair ChartedManifold::riemann_from_christoffel(const VectorXd& x) const {
  const int m = dim_;
  DenseTensor dGamma = finite_difference_derivative(
      [this](const VectorXd& y) { return christoffel(y); }, x, fd_);
  DenseTensor gamma = christoffel(x);
  MatrixXd g = metric(x);

  CurvaturePair out{DenseTensor({m, m, m, m}), DenseTensor({m, m, m, m})};
  // R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + G^l_ia G^a_jk - G^l_ja G^a_ik
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double v = dGamma({i, l, j, k}) - dGamma({j, l, i, k});
          for (int a = 0; a < m; ++a)
            v += gamma({l, i, a}) * gamma({a, j, k}) -
                 gamma({l, j, a}) * gamma({a, i, k});
          out.mixed({i, j, k, l}) = v;
        }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double v = 0.0;
          for (int q = 0; q < m; ++q) v += g(l, q) * out.mixed({i, j, k, q});
          out.lowered({i, j, k, l}) = v;
        }
  return out;
}

CurvaturePair ChartedManifold::riemann(const VectorXd& x) const {
  if (analytic_curvature_) {
    check_domain(x);
    const int m = dim_;
    CurvaturePair out{DenseTensor({m, m, m, m}), analytic_curvature_(x)};
    MatrixXd ginv = metric_inverse(x);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) {
            double v = 0.0;
            for (int q = 0; q < m; ++q)
              v += ginv(l, q) * out.lowered({i, j, k, q});
            out.mixed({i, j, k, l}) = v;
          }
    return out;
  }
  return riemann_from_christoffel(x);
}

CurvaturePair ChartedManifold::riemann_fd(const VectorXd& x) const {
  return riemann_from_christoffel(x);
}

DenseTensor ChartedManifold::nabla_riemann(const VectorXd& x) const {
  const int m = dim_;
  DenseTensor dR = finite_difference_derivative(
      [this](const VectorXd& y) { return riemann(y).lowered; }, x, fd_);
  DenseTensor gamma = christoffel(x);
  DenseTensor R = riemann(x).lowered;

  DenseTensor nab({m, m, m, m, m});
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) {
            double v = dR({a, i, j, k, l});
            for (int q = 0; q < m; ++q) {
              v -= gamma({q, a, i}) * R({q, j, k, l});
              v -= gamma({q, a, j}) * R({i, q, k, l});
              v -= gamma({q, a, k}) * R({i, j, q, l});
              v -= gamma({q, a, l}) * R({i, j, k, q});
            }
            nab({a, i, j, k, l}) = v;
          }
  return nab;
}

std::pair<MatrixXd, double> ChartedManifold::ricci_and_scalar(const VectorXd& x) const {
  const int m = dim_;
  DenseTensor R = riemann(x).lowered;
  MatrixXd ginv = metric_inverse(x);
  MatrixXd ric = MatrixXd::Zero(m, m);
  // ric_ab = g^{cd} R_acdb  (equals sum_i R(X, e_i, e_i, Y) over any frame)
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double v = 0.0;
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) v += ginv(c, d) * R({a, c, d, b});
      ric(a, b) = v;
    }
  double S = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) S += ginv(a, b) * ric(a, b);
  return {ric, S};
}

// ---------------------------------------------------------------------------
// Zoo
// ---------------------------------------------------------------------------

ZooSpec ZooSpec::euclidean(int dim) {
  ZooSpec s;
  s.kind = Kind::Euclidean;
  s.dim = dim;
  return s;
}

ZooSpec ZooSpec::constant_curvature(int dim, double c) {
  ZooSpec s;
  s.kind = Kind::ConstantCurvature;
  s.dim = dim;
  s.curvature_constant = c;
  return s;
}

ZooSpec ZooSpec::product(ZooSpec a, ZooSpec b) {
  ZooSpec s;
  s.kind = Kind::Product;
  s.factors.push_back(std::make_shared<ZooSpec>(std::move(a)));
  s.factors.push_back(std::make_shared<ZooSpec>(std::move(b)));
  s.dim = s.factors[0]->dim + s.factors[1]->dim;
  return s;
}

ZooSpec ZooSpec::perturbed(int dim, BumpSpec bump) {
  ZooSpec s;
  s.kind = Kind::Perturbed;
  s.dim = dim;
  s.bump = std::move(bump);
  return s;
}

namespace {

// Diagonal metric with closed-form partial derivatives; enough for the polar
// sphere cap and the hyperbolic half-space.
struct DiagonalModel {
  int m;
  std::function<double(const VectorXd&, int)> g;        // g_ii(x)
  std::function<double(const VectorXd&, int, int)> dg;  // d_j g_ii(x)
};

DenseTensor diagonal_metric(const DiagonalModel& dm, const VectorXd& x) {
  DenseTensor t({dm.m, dm.m});
  for (int i = 0; i < dm.m; ++i) t({i, i}) = dm.g(x, i);
  return t;
}

DenseTensor diagonal_christoffel(const DiagonalModel& dm, const VectorXd& x) {
  const int m = dm.m;
  DenseTensor gamma({m, m, m});
  for (int k = 0; k < m; ++k) {
    double gkk = dm.g(x, k);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double v = 0.0;
        if (i == j && i == k)
          v = 0.5 * dm.dg(x, k, k) / gkk;
        else if (i == j)
          v = -0.5 * dm.dg(x, i, k) / gkk;
        else if (k == i)
          v = 0.5 * dm.dg(x, i, j) / gkk;
        else if (k == j)
          v = 0.5 * dm.dg(x, j, i) / gkk;
        gamma({k, i, j}) = v;
      }
  }
  return gamma;
}

// Space-form curvature R_ijkl = c (g_jk g_il - g_ik g_jl).
ChartedManifold::CurvatureFn space_form_curvature(
    std::function<MatrixXd(const VectorXd&)> metric, int m, double c) {
  return [metric = std::move(metric), m, c](const VectorXd& x) {
    MatrixXd g = metric(x);
    DenseTensor R({m, m, m, m});
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l)
            R({i, j, k, l}) = c * (g(j, k) * g(i, l) - g(i, k) * g(j, l));
    return R;
  };
}

std::shared_ptr<ChartedManifold> build_euclidean(int m) {
  ChartBox box;
  box.lo.assign(m, -10.0);
  box.hi.assign(m, 10.0);
  auto manifold = std::make_shared<ChartedManifold>(
      m,
      [m](const VectorXd&) {
        return DenseTensor::from_matrix(MatrixXd::Identity(m, m));
      },
      box, "euclidean(" + std::to_string(m) + ")");
  manifold->set_analytic_christoffel(
      [m](const VectorXd&) { return DenseTensor({m, m, m}); });
  manifold->set_analytic_curvature(
      [m](const VectorXd&) { return DenseTensor({m, m, m, m}); });
  return manifold;
}

std::shared_ptr<ChartedManifold> build_constant_curvature(int m, double c) {
  if (m < 2) throw ConfigError("constant_curvature requires dim >= 2");
  if (c == 0.0) return build_euclidean(m);

  DiagonalModel dm;
  dm.m = m;
  const double a2 = 1.0 / std::abs(c);
  ChartBox box;
  std::string label;

  if (c > 0.0) {
    // Polar cap of the sphere of radius a: g_ii = a^2 prod_{j<i} sin^2 x_j.
    dm.g = [a2](const VectorXd& x, int i) {
      double v = a2;
      for (int j = 0; j < i; ++j) v *= std::sin(x(j)) * std::sin(x(j));
      return v;
    };
    dm.dg = [a2](const VectorXd& x, int i, int j) {
      if (j >= i) return 0.0;
      double v = 2.0 * a2 * std::sin(x(j)) * std::cos(x(j));
      for (int l = 0; l < i; ++l) {
        if (l == j) continue;
        v *= std::sin(x(l)) * std::sin(x(l));
      }
      return v;
    };
    box.lo.assign(m, 0.1);
    box.hi.assign(m, M_PI - 0.1);
    label = "sphere";
  } else {
    // Poincare half-space: g_ii = a^2 / (x_m)^2.
    dm.g = [a2, m](const VectorXd& x, int) {
      double y = x(m - 1);
      return a2 / (y * y);
    };
    dm.dg = [a2, m](const VectorXd& x, int, int j) {
      if (j != m - 1) return 0.0;
      double y = x(m - 1);
      return -2.0 * a2 / (y * y * y);
    };
    box.lo.assign(m, -2.0);
    box.hi.assign(m, 2.0);
    box.lo[m - 1] = 0.5;
    box.hi[m - 1] = 3.0;
    label = "hyperbolic";
  }

  std::ostringstream name;
  name << label << "(" << m << ", c=" << c << ")";
  auto manifold = std::make_shared<ChartedManifold>(
      m, [dm](const VectorXd& x) { return diagonal_metric(dm, x); }, box,
      name.str());
  manifold->set_analytic_christoffel(
      [dm](const VectorXd& x) { return diagonal_christoffel(dm, x); });
  auto metric_mat = [dm](const VectorXd& x) {
    return diagonal_metric(dm, x).as_matrix();
  };
  manifold->set_analytic_curvature(space_form_curvature(metric_mat, m, c));
  return manifold;
}

std::shared_ptr<ChartedManifold> build_product(
    const std::shared_ptr<const ChartedManifold>& f1,
    const std::shared_ptr<const ChartedManifold>& f2) {
  const int m1 = f1->dim();
  const int m2 = f2->dim();
  const int m = m1 + m2;

  auto split = [m1, m2](const VectorXd& x) {
    return std::pair<VectorXd, VectorXd>(x.head(m1), x.tail(m2));
  };

  ChartBox box;
  box.lo = f1->domain().lo;
  box.hi = f1->domain().hi;
  box.lo.insert(box.lo.end(), f2->domain().lo.begin(), f2->domain().lo.end());
  box.hi.insert(box.hi.end(), f2->domain().hi.begin(), f2->domain().hi.end());

  auto metric = [f1, f2, split, m, m1](const VectorXd& x) {
    auto [x1, x2] = split(x);
    MatrixXd g = MatrixXd::Zero(m, m);
    g.topLeftCorner(m1, m1) = f1->metric(x1);
    g.bottomRightCorner(x.size() - m1, x.size() - m1) = f2->metric(x2);
    return DenseTensor::from_matrix(g);
  };

  auto manifold = std::make_shared<ChartedManifold>(
      m, metric, box, f1->label() + " x " + f2->label());

  if (f1->has_analytic_christoffel() && f2->has_analytic_christoffel()) {
    manifold->set_analytic_christoffel([f1, f2, split, m, m1](const VectorXd& x) {
      auto [x1, x2] = split(x);
      DenseTensor g1 = f1->christoffel(x1);
      DenseTensor g2 = f2->christoffel(x2);
      DenseTensor gamma({m, m, m});
      const int d1 = f1->dim();
      const int d2 = f2->dim();
      for (int k = 0; k < d1; ++k)
        for (int i = 0; i < d1; ++i)
          for (int j = 0; j < d1; ++j) gamma({k, i, j}) = g1({k, i, j});
      for (int k = 0; k < d2; ++k)
        for (int i = 0; i < d2; ++i)
          for (int j = 0; j < d2; ++j)
            gamma({k + m1, i + m1, j + m1}) = g2({k, i, j});
      return gamma;
    });
  }
  if (f1->has_analytic_curvature() && f2->has_analytic_curvature()) {
    manifold->set_analytic_curvature([f1, f2, split, m, m1](const VectorXd& x) {
      auto [x1, x2] = split(x);
      DenseTensor R1 = f1->riemann(x1).lowered;
      DenseTensor R2 = f2->riemann(x2).lowered;
      DenseTensor R({m, m, m, m});
      const int d1 = f1->dim();
      const int d2 = f2->dim();
      for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d1; ++j)
          for (int k = 0; k < d1; ++k)
            for (int l = 0; l < d1; ++l) R({i, j, k, l}) = R1({i, j, k, l});
      for (int i = 0; i < d2; ++i)
        for (int j = 0; j < d2; ++j)
          for (int k = 0; k < d2; ++k)
            for (int l = 0; l < d2; ++l)
              R({i + m1, j + m1, k + m1, l + m1}) = R2({i, j, k, l});
      return R;
    });
  }
  return manifold;
}

std::shared_ptr<ChartedManifold> build_perturbed(int m, const BumpSpec& bump) {
  if (bump.width <= 0.0) throw ConfigError("bump width must be positive");
  VectorXd center = VectorXd::Zero(m);
  if (!bump.center.empty()) {
    if (static_cast<int>(bump.center.size()) != m)
      throw ConfigError("bump center dimension mismatch");
    for (int i = 0; i < m; ++i) center(i) = bump.center[i];
  }
  double A = bump.amplitude;
  double w2 = bump.width * bump.width;

  ChartBox box;
  box.lo.assign(m, -2.0);
  box.hi.assign(m, 2.0);

  // Conformal bump g = e^{2 psi} I with psi a Gaussian; smooth and always
  // positive-definite, but not locally symmetric.
  auto metric = [m, A, w2, center](const VectorXd& x) {
    double r2 = (x - center).squaredNorm();
    double psi = A * std::exp(-r2 / w2);
    return DenseTensor::from_matrix(std::exp(2.0 * psi) *
                                    MatrixXd::Identity(m, m));
  };
  std::ostringstream name;
  name << "perturbed_euclidean(" << m << ", A=" << A << ")";
  return std::make_shared<ChartedManifold>(m, metric, box, name.str());
}

void check_positive_definite_samples(const ChartedManifold& man) {
  const int m = man.dim();
  VectorXd mid(m), lo(m), hi(m);
  for (int i = 0; i < m; ++i) {
    double l = man.domain().lo[i], h = man.domain().hi[i];
    mid(i) = 0.5 * (l + h);
    lo(i) = l + 0.1 * (h - l);
    hi(i) = h - 0.1 * (h - l);
  }
  for (const VectorXd& x : {mid, lo, hi}) {
    MatrixXd g = man.metric(x);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw GeometryError("zoo metric not positive-definite at sample point");
  }
}

} // namespace

std::shared_ptr<const ChartedManifold> construct_zoo(const ZooSpec& spec) {
  std::shared_ptr<ChartedManifold> man;
  switch (spec.kind) {
    case ZooSpec::Kind::Euclidean:
      if (spec.dim < 1) throw ConfigError("euclidean dim must be >= 1");
      man = build_euclidean(spec.dim);
      break;
    case ZooSpec::Kind::ConstantCurvature:
      man = build_constant_curvature(spec.dim, spec.curvature_constant);
      break;
    case ZooSpec::Kind::Product: {
      if (spec.factors.size() != 2 || !spec.factors[0] || !spec.factors[1])
        throw ConfigError("product requires exactly two factors");
      auto a = construct_zoo(*spec.factors[0]);
      auto b = construct_zoo(*spec.factors[1]);
      man = build_product(a, b);
      break;
    }
    case ZooSpec::Kind::Perturbed:
      if (spec.dim < 2) throw ConfigError("perturbed dim must be >= 2");
      man = build_perturbed(spec.dim, spec.bump);
      break;
    default:
      throw ConfigError("unknown zoo kind");
  }
  check_positive_definite_samples(*man);
  return man;
}

} // namespace sasakigeo
