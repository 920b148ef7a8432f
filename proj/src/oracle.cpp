#include "sasakigeo/oracle.hpp"

#include <cmath>

namespace sasakigeo {

namespace {
// First-level step 10^-2.5; the metric is differentiated twice, so the budget
// splits between truncation and roundoff.
constexpr double kOracleStep = 3.1622776601683794e-3;
}

InducedChart::InducedChart(const WeightedSasakiMetric& G)
    : base_(G.base), f1_(G.f1) {
  double f2 = G.f2;
  f2_ = [f2](const VectorXd&) { return f2; };
  scheme_ = {kOracleStep, FDScheme::Order::Central4, false};
}

InducedChart::InducedChart(std::shared_ptr<const ChartedManifold> base, double f1,
                           WeightFn f2)
    : base_(std::move(base)), f1_(f1), f2_(std::move(f2)) {
  if (!base_) throw ConfigError("induced chart needs a base manifold");
  if (f1_ <= 0.0) throw ConfigError("f1 must be positive");
  scheme_ = {kOracleStep, FDScheme::Order::Central4, false};
}

VectorXd InducedChart::pack(const TangentBundlePoint& P) {
  VectorXd p(P.x.size() + P.u.size());
  p << P.x, P.u;
  return p;
}

MatrixXd InducedChart::metric_matrix(const VectorXd& p) const {
  const int m = base_->dim();
  if (p.size() != 2 * m) throw ShapeError("expected a 2m coordinate point");
  VectorXd x = p.head(m);
  VectorXd u = p.tail(m);

  MatrixXd g = base_->metric(x);
  DenseTensor gamma = base_->christoffel(x);
  double f2 = f2_(x);
  if (!(f2 > 0.0) || !std::isfinite(f2))
    throw GeometryError("fiber weight f2 must be positive");

  // K^k_i = Gamma^k_ij u^j
  MatrixXd K = MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += gamma({k, i, j}) * u(j);
      K(k, i) = s;
    }

  MatrixXd G(2 * m, 2 * m);
  G.topLeftCorner(m, m) = f1_ * g + f2 * K.transpose() * g * K;
  G.topRightCorner(m, m) = f2 * K.transpose() * g;
  G.bottomLeftCorner(m, m) = f2 * g * K;
  G.bottomRightCorner(m, m) = f2 * g;
  return G;
}

DenseTensor InducedChart::christoffel(const VectorXd& p) const {
  const int n = static_cast<int>(p.size());
  DenseTensor dG = finite_difference_derivative(
      [this](const VectorXd& q) {
        return DenseTensor::from_matrix(metric_matrix(q));
      },
      p, scheme_);
  MatrixXd G = metric_matrix(p);
  Eigen::LDLT<MatrixXd> ldlt(G);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw GeometryError("TM metric not positive-definite");
  MatrixXd Ginv = ldlt.solve(MatrixXd::Identity(n, n));

  DenseTensor gamma({n, n, n});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += Ginv(k, l) * (dG({i, j, l}) + dG({j, i, l}) - dG({l, i, j}));
        gamma({k, i, j}) = 0.5 * s;
        gamma({k, j, i}) = 0.5 * s;
      }
  if (!gamma.all_finite()) throw NumericError("non-finite TM Christoffel");
  return gamma;
}

DenseTensor InducedChart::curvature(const VectorXd& p) const {
  const int n = static_cast<int>(p.size());
  FDScheme outer = scheme_;
  outer.richardson = true;
  DenseTensor dGamma = finite_difference_derivative(
      [this](const VectorXd& q) { return christoffel(q); }, p, outer);
  DenseTensor gamma = christoffel(p);
  MatrixXd G = metric_matrix(p);

  DenseTensor mixed({n, n, n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = dGamma({i, l, j, k}) - dGamma({j, l, i, k});
          for (int a = 0; a < n; ++a)
            v += gamma({l, i, a}) * gamma({a, j, k}) -
                 gamma({l, j, a}) * gamma({a, i, k});
          mixed({i, j, k, l}) = v;
        }
  DenseTensor lowered({n, n, n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int q = 0; q < n; ++q) v += G(l, q) * mixed({i, j, k, q});
          lowered({i, j, k, l}) = v;
        }
  if (!lowered.all_finite()) throw NumericError("non-finite TM curvature");
  return lowered;
}

std::pair<MatrixXd, double> InducedChart::ricci_scalar(const VectorXd& p) const {
  const int n = static_cast<int>(p.size());
  DenseTensor R = curvature(p);
  MatrixXd G = metric_matrix(p);
  MatrixXd Ginv = G.ldlt().solve(MatrixXd::Identity(n, n));

  MatrixXd ric = MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double v = 0.0;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) v += Ginv(c, d) * R({a, c, d, b});
      ric(a, b) = v;
    }
  double S = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) S += Ginv(a, b) * ric(a, b);
  return {ric, S};
}

FrameChange InducedChart::frame_change(const TangentBundlePoint& P) const {
  const int m = base_->dim();
  DenseTensor gamma = base_->christoffel(P.x);
  MatrixXd K = MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += gamma({k, i, j}) * P.u(j);
      K(k, i) = s;
    }
  // Split (h, v) in coordinates: dx = h, du = v - K h. Columns 0..m-1 are the
  // horizontal lifts delta/delta x^i, columns m..2m-1 the vertical d/du^k.
  MatrixXd T = MatrixXd::Identity(2 * m, 2 * m);
  T.bottomLeftCorner(m, m) = -K;
  return {T};
}

namespace {
VectorXd to_coords(const FrameChange& F, const SplitTangentVector& X) {
  VectorXd s(X.h.size() + X.v.size());
  s << X.h, X.v;
  return F.matrix * s;
}
} // namespace

InducedChart::PointValues InducedChart::evaluate(const TangentBundlePoint& P) const {
  PointValues pv;
  VectorXd p = pack(P);
  pv.R = curvature(p);
  pv.G = metric_matrix(p);
  pv.F = frame_change(P);
  const int n = static_cast<int>(p.size());
  MatrixXd Ginv = pv.G.ldlt().solve(MatrixXd::Identity(n, n));
  pv.ric = MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double v = 0.0;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) v += Ginv(c, d) * pv.R({a, c, d, b});
      pv.ric(a, b) = v;
    }
  pv.S = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) pv.S += Ginv(a, b) * pv.ric(a, b);
  return pv;
}

double InducedChart::curvature4_from(const PointValues& pv,
                                     const SplitTangentVector& X,
                                     const SplitTangentVector& Y,
                                     const SplitTangentVector& Z,
                                     const SplitTangentVector& W) {
  const int n = static_cast<int>(pv.G.rows());
  VectorXd a = to_coords(pv.F, X), b = to_coords(pv.F, Y), c = to_coords(pv.F, Z),
           d = to_coords(pv.F, W);
  double out = 0.0;
  for (int i = 0; i < n; ++i) {
    if (a(i) == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (b(j) == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        if (c(k) == 0.0) continue;
        double w = a(i) * b(j) * c(k);
        for (int l = 0; l < n; ++l) out += w * d(l) * pv.R({i, j, k, l});
      }
    }
  }
  return out;
}

double InducedChart::ricci_from(const PointValues& pv, const SplitTangentVector& X,
                                const SplitTangentVector& Y) {
  return to_coords(pv.F, X).dot(pv.ric * to_coords(pv.F, Y));
}

double InducedChart::curvature4(const TangentBundlePoint& P,
                                const SplitTangentVector& X,
                                const SplitTangentVector& Y,
                                const SplitTangentVector& Z,
                                const SplitTangentVector& W) const {
  return curvature4_from(evaluate(P), X, Y, Z, W);
}

double InducedChart::ricci(const TangentBundlePoint& P, const SplitTangentVector& X,
                           const SplitTangentVector& Y) const {
  return ricci_from(evaluate(P), X, Y);
}

double InducedChart::scalar(const TangentBundlePoint& P) const {
  return ricci_scalar(pack(P)).second;
}

} // namespace sasakigeo
