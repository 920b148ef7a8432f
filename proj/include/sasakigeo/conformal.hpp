#ifndef SASAKIGEO_CONFORMAL_HPP
#define SASAKIGEO_CONFORMAL_HPP

#include <functional>
#include <vector>

#include "sasakigeo/sasaki.hpp"

namespace sasakigeo {

/// Scalar field phi2 on flat R^m with gradient and Hessian. Analytic
/// constructors are preferred; from_function falls back to finite differences
/// (consistency-checked at construction points).
struct Phi2Field {
  std::function<double(const VectorXd&)> value;
  std::function<VectorXd(const VectorXd&)> grad;
  std::function<MatrixXd(const VectorXd&)> hess;

  static Phi2Field constant(int dim, double c);
  static Phi2Field linear(const VectorXd& coeffs);          // phi2 = c . x
  static Phi2Field sine(double amplitude, const VectorXd& wavevector);
  static Phi2Field from_function(int dim,
                                 std::function<double(const VectorXd&)> f);
};

/// Flat base, f1 constant, f2 = e^{2 phi2(x)}.
struct ConformalFiberMetric {
  int dim;
  double f1;
  Phi2Field phi2;

  ConformalFiberMetric(int dim, double f1, Phi2Field phi2);

  double f2(const VectorXd& x) const { return std::exp(2.0 * phi2.value(x)); }
  double delta(const VectorXd& x) const { return f2(x) / f1; }
  double epsilon(const VectorXd& x) const { return phi2.grad(x).norm(); }
  /// G(X,Y) = f1 <X^h,Y^h> + f2(x) <X^v,Y^v> (flat base inner products).
  double pair(const VectorXd& x, const SplitTangentVector& X,
              const SplitTangentVector& Y) const;
};

/// Difference tensor of the Levi-Civita connection against the flat one:
/// C(X,Y) = X(phi2) Y^v + Y(phi2) X^v - delta <X^v,Y^v> grad phi2.
SplitTangentVector connection_conformal(const ConformalFiberMetric& Gc,
                                        const TangentBundlePoint& P,
                                        const SplitTangentVector& X,
                                        const SplitTangentVector& Y);

/// Curvature R^G(X,Y)Z of the flat-base conformal-fiber metric.
SplitTangentVector curvature_conformal(const ConformalFiberMetric& Gc,
                                       const TangentBundlePoint& P,
                                       const SplitTangentVector& X,
                                       const SplitTangentVector& Y,
                                       const SplitTangentVector& Z);

struct SectionalValue {
  double k = 0.0;
  bool inputs_normalized = false;  // set when X, Y were not G-orthonormal
};

/// Sectional curvature of the plane spanned by X, Y (G-orthonormalized
/// internally if needed). Requires a parallel gradient: hessian must vanish.
SectionalValue sectional_conformal(const ConformalFiberMetric& Gc,
                                   const TangentBundlePoint& P,
                                   const SplitTangentVector& X,
                                   const SplitTangentVector& Y);

/// Position and velocity of a curve on TM; on the flat base the vertical
/// velocity is the plain derivative of u.
struct BundleState {
  VectorXd x;
  VectorXd u;
  VectorXd x_dot;
  VectorXd u_dot;
};

/// Geodesic equations: x'' = delta <u',u'> grad phi2, u'' = -2 (x'.grad phi2) u'.
BundleState geodesic_rhs(const ConformalFiberMetric& Gc, const BundleState& s);

double g_speed(const ConformalFiberMetric& Gc, const BundleState& s);

struct GeodesicTrajectory {
  std::vector<double> t;
  std::vector<BundleState> states;
  bool diverged = false;
};

/// Fixed-step classical RK4 over geodesic_rhs. On non-finite states the
/// partial trajectory is returned with diverged = true.
GeodesicTrajectory integrate_geodesic(const ConformalFiberMetric& Gc,
                                      const BundleState& s0, double duration,
                                      double dt);

} // namespace sasakigeo

#endif
