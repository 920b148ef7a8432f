#include "sasakigeo/conformal.hpp"

#include <cmath>

namespace sasakigeo {

Phi2Field Phi2Field::constant(int dim, double c) {
  return {[c](const VectorXd&) { return c; },
          [dim](const VectorXd&) { return VectorXd::Zero(dim).eval(); },
          [dim](const VectorXd&) { return MatrixXd::Zero(dim, dim).eval(); }};
}

Phi2Field Phi2Field::linear(const VectorXd& coeffs) {
  const int dim = static_cast<int>(coeffs.size());
  return {[coeffs](const VectorXd& x) { return coeffs.dot(x); },
          [coeffs](const VectorXd&) { return coeffs; },
          [dim](const VectorXd&) { return MatrixXd::Zero(dim, dim).eval(); }};
}

Phi2Field Phi2Field::sine(double amplitude, const VectorXd& wavevector) {
  return {[=](const VectorXd& x) { return amplitude * std::sin(wavevector.dot(x)); },
          [=](const VectorXd& x) {
            return (amplitude * std::cos(wavevector.dot(x)) * wavevector).eval();
          },
          [=](const VectorXd& x) {
            return (-amplitude * std::sin(wavevector.dot(x)) * wavevector *
                    wavevector.transpose())
                .eval();
          }};
}

Phi2Field Phi2Field::from_function(int dim,
                                   std::function<double(const VectorXd&)> f) {
  FDScheme scheme;
  auto grad = [f, scheme](const VectorXd& x) {
    return finite_difference_gradient(f, x, scheme);
  };
  auto hess = [grad, scheme, dim](const VectorXd& x) {
    DenseTensor d = finite_difference_derivative(
        [&](const VectorXd& y) { return DenseTensor::from_vector(grad(y)); }, x,
        scheme);
    MatrixXd H(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) H(i, j) = d({i, j});
    // symmetrize
    return ((H + H.transpose()) / 2.0).eval();
  };
  return {std::move(f), grad, hess};
}

ConformalFiberMetric::ConformalFiberMetric(int dim_, double f1_, Phi2Field phi2_)
    : dim(dim_), f1(f1_), phi2(std::move(phi2_)) {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  if (f1 <= 0.0) throw ConfigError("f1 must be positive");
  if (!phi2.value || !phi2.grad || !phi2.hess)
    throw ConfigError("phi2 needs value, gradient and hessian");
  // Consistency of the supplied gradient with the scalar field.
  VectorXd x0 = VectorXd::Constant(dim, 0.37);
  VectorXd gfd = finite_difference_gradient(phi2.value, x0);
  if ((gfd - phi2.grad(x0)).cwiseAbs().maxCoeff() > 1e-6)
    throw ConfigError("phi2 gradient inconsistent with the scalar field");
}

double ConformalFiberMetric::pair(const VectorXd& x, const SplitTangentVector& X,
                                  const SplitTangentVector& Y) const {
  return f1 * X.h.dot(Y.h) + f2(x) * X.v.dot(Y.v);
}

SplitTangentVector connection_conformal(const ConformalFiberMetric& Gc,
                                        const TangentBundlePoint& P,
                                        const SplitTangentVector& X,
                                        const SplitTangentVector& Y) {
  VectorXd grad = Gc.phi2.grad(P.x);
  double Xphi = grad.dot(X.h);
  double Yphi = grad.dot(Y.h);
  double delta = Gc.delta(P.x);
  SplitTangentVector out;
  out.v = Xphi * Y.v + Yphi * X.v;
  out.h = -delta * X.v.dot(Y.v) * grad;
  return out;
}

SplitTangentVector curvature_conformal(const ConformalFiberMetric& Gc,
                                       const TangentBundlePoint& P,
                                       const SplitTangentVector& X,
                                       const SplitTangentVector& Y,
                                       const SplitTangentVector& Z) {
  VectorXd grad = Gc.phi2.grad(P.x);
  MatrixXd hess = Gc.phi2.hess(P.x);
  double delta = Gc.delta(P.x);
  double eps2 = grad.squaredNorm();

  double Xphi = grad.dot(X.h);
  double Yphi = grad.dot(Y.h);
  double Zphi = grad.dot(Z.h);

  double coefX = Xphi * Zphi + delta * eps2 * X.v.dot(Z.v) + X.h.dot(hess * Z.h);
  double coefY = Yphi * Zphi + delta * eps2 * Y.v.dot(Z.v) + Y.h.dot(hess * Z.h);

  SplitTangentVector out;
  out.v = coefX * Y.v - coefY * X.v;
  out.h = -delta * (Xphi * Y.v.dot(Z.v) - Yphi * X.v.dot(Z.v)) * grad -
          delta * Y.v.dot(Z.v) * (hess * X.h) +
          delta * X.v.dot(Z.v) * (hess * Y.h);
  return out;
}

SectionalValue sectional_conformal(const ConformalFiberMetric& Gc,
                                   const TangentBundlePoint& P,
                                   const SplitTangentVector& X,
                                   const SplitTangentVector& Y) {
  VectorXd grad = Gc.phi2.grad(P.x);
  MatrixXd hess = Gc.phi2.hess(P.x);
  if (hess.cwiseAbs().maxCoeff() > 1e-8)
    throw PreconditionError("sectional formula requires a parallel gradient");

  double f2 = Gc.f2(P.x);
  double delta = f2 / Gc.f1;
  double eps2 = grad.squaredNorm();

  SplitTangentVector Xn = X;
  SplitTangentVector Yn = Y;
  SectionalValue out;

  double gxx = Gc.pair(P.x, Xn, Xn);
  double gxy = Gc.pair(P.x, Xn, Yn);
  double gyy = Gc.pair(P.x, Yn, Yn);
  if (std::abs(gxx - 1.0) > 1e-10 || std::abs(gyy - 1.0) > 1e-10 ||
      std::abs(gxy) > 1e-10) {
    out.inputs_normalized = true;
    if (gxx <= 0.0) throw GeometryError("degenerate plane");
    Xn = Xn * (1.0 / std::sqrt(gxx));
    Yn = Yn - Xn * Gc.pair(P.x, Xn, Yn);
    double n2 = Gc.pair(P.x, Yn, Yn);
    if (n2 <= 1e-24) throw GeometryError("degenerate plane");
    Yn = Yn * (1.0 / std::sqrt(n2));
  }

  // Decompose X = a grad phi2 + X' + X^v against the gradient direction.
  double a = eps2 > 0.0 ? Xn.h.dot(grad) / eps2 : 0.0;
  double b = eps2 > 0.0 ? Yn.h.dot(grad) / eps2 : 0.0;

  VectorXd w = b * Xn.v - a * Yn.v;
  double fiber_area = Xn.v.squaredNorm() * Yn.v.squaredNorm() -
                      std::pow(Xn.v.dot(Yn.v), 2);
  out.k = -f2 * eps2 * eps2 * w.squaredNorm() - f2 * eps2 * delta * fiber_area;
  return out;
}

BundleState geodesic_rhs(const ConformalFiberMetric& Gc, const BundleState& s) {
  VectorXd grad = Gc.phi2.grad(s.x);
  double delta = Gc.delta(s.x);
  BundleState d;
  d.x = s.x_dot;
  d.u = s.u_dot;
  d.x_dot = delta * s.u_dot.squaredNorm() * grad;
  d.u_dot = -2.0 * grad.dot(s.x_dot) * s.u_dot;
  return d;
}

double g_speed(const ConformalFiberMetric& Gc, const BundleState& s) {
  return std::sqrt(Gc.f1 * s.x_dot.squaredNorm() +
                   Gc.f2(s.x) * s.u_dot.squaredNorm());
}

namespace {

BundleState axpy(const BundleState& s, double a, const BundleState& d) {
  return {s.x + a * d.x, s.u + a * d.u, s.x_dot + a * d.x_dot,
          s.u_dot + a * d.u_dot};
}

bool finite(const BundleState& s) {
  return s.x.allFinite() && s.u.allFinite() && s.x_dot.allFinite() &&
         s.u_dot.allFinite();
}

} // namespace

GeodesicTrajectory integrate_geodesic(const ConformalFiberMetric& Gc,
                                      const BundleState& s0, double duration,
                                      double dt) {
  if (dt <= 0.0 || duration < dt)
    throw ConfigError("need dt > 0 and duration >= dt");
  const auto steps = static_cast<std::size_t>(std::ceil(duration / dt));

  GeodesicTrajectory traj;
  traj.t.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.t.push_back(0.0);
  traj.states.push_back(s0);

  BundleState s = s0;
  for (std::size_t i = 1; i <= steps; ++i) {
    BundleState k1 = geodesic_rhs(Gc, s);
    BundleState k2 = geodesic_rhs(Gc, axpy(s, 0.5 * dt, k1));
    BundleState k3 = geodesic_rhs(Gc, axpy(s, 0.5 * dt, k2));
    BundleState k4 = geodesic_rhs(Gc, axpy(s, dt, k3));
    s = axpy(s, dt / 6.0,
             {k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x,
              k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u,
              k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot,
              k1.u_dot + 2.0 * k2.u_dot + 2.0 * k3.u_dot + k4.u_dot});
    if (!finite(s)) {
      traj.diverged = true;
      return traj;
    }
    traj.t.push_back(static_cast<double>(i) * dt);
    traj.states.push_back(s);
  }
  return traj;
}

} // namespace sasakigeo
