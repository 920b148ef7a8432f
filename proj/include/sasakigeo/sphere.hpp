#ifndef SASAKIGEO_SPHERE_HPP
#define SASAKIGEO_SPHERE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sasakigeo/sasaki.hpp"

namespace sasakigeo {

/// Radius function r on the base, with gradient and Hessian (general mode).
struct RadiusField {
  std::function<double(const VectorXd&)> r;
  std::function<VectorXd(const VectorXd&)> grad;
  std::function<MatrixXd(const VectorXd&)> hess;
};

/// S_rM inside (TM, g^{f1,f2}). Constant-radius mode carries the full
/// curvature reductions; general mode evaluates the normal and second
/// fundamental form formulas only.
class SphereBundleConfig {
public:
  SphereBundleConfig(WeightedSasakiMetric G, double r);
  SphereBundleConfig(WeightedSasakiMetric G, RadiusField field);

  const WeightedSasakiMetric& metric() const { return G_; }
  bool constant_mode() const { return constant_; }
  int base_dim() const { return G_.base->dim(); }
  int fiber_dim() const { return base_dim() - 1; }  // n = m - 1

  double radius(const VectorXd& x) const;
  VectorXd grad_radius(const VectorXd& x) const;
  MatrixXd hess_radius(const VectorXd& x) const;
  double tau(const VectorXd& x) const;  // |grad r| in g

  /// Throws PreconditionError unless |u|_g = r(x) to 1e-8.
  void check_on_bundle(const SasakiPointData& d) const;

private:
  WeightedSasakiMetric G_;
  bool constant_;
  double r_const_ = 1.0;
  RadiusField field_;
};

/// Coefficients of the unit normal U^G = a grad r + b xi.
struct NormalField {
  double a = 0.0;
  double b = 0.0;
};

/// <X^v, u> - r <grad r, X^h>; zero iff X is tangent to S_rM.
double tangency_defect(const SphereBundleConfig& C, const SasakiPointData& d,
                       const SplitTangentVector& X);

NormalField unit_normal(const SphereBundleConfig& C, const SasakiPointData& d);

/// The normal as a split vector (a grad r, b u).
SplitTangentVector normal_vector(const SphereBundleConfig& C,
                                 const SasakiPointData& d);

/// Scalar second fundamental form alpha(X,Y) = G(nabla^G_X Y, U^G) of tangent
/// vectors. Constant mode: alpha = -(sqrt(f2)/r) <X^v,Y^v>.
double second_fundamental(const SphereBundleConfig& C, const SasakiPointData& d,
                          const SplitTangentVector& X, const SplitTangentVector& Y);

/// Closed form -n / (r sqrt(f2 + delta f2 tau^2)); requires nabla dr = 0.
double mean_curvature(const SphereBundleConfig& C, const SasakiPointData& d);

/// Trace of alpha over a G-orthonormal tangent frame (two-path check).
double mean_curvature_trace(const SphereBundleConfig& C, const SasakiPointData& d);

/// G-orthonormal frame of T S_rM (2m-1 vectors). Constant mode uses the
/// adapted frame with e_m = u/r, dropping its vertical lift.
std::vector<SplitTangentVector> tangent_frame(const SphereBundleConfig& C,
                                              const SasakiPointData& d);

/// Gauss equation: R~ = R^G - alpha(X,Z)alpha(Y,W) + alpha(Y,Z)alpha(X,W).
/// Constant-radius mode only; all four arguments must be tangent.
double curvature_SrM(const SphereBundleConfig& C, const SasakiPointData& d,
                     const SplitTangentVector& X, const SplitTangentVector& Y,
                     const SplitTangentVector& Z, const SplitTangentVector& W);

/// ric~ = ric^G + ((n-1)/r^2) <X^v,Y^v>.
double ricci_SrM(const SphereBundleConfig& C, const SasakiPointData& d,
                 const SplitTangentVector& X, const SplitTangentVector& Y);

/// Direct trace of curvature_SrM over the tangent frame (two-path check).
double ricci_SrM_trace(const SphereBundleConfig& C, const SasakiPointData& d,
                       const SplitTangentVector& X, const SplitTangentVector& Y);

/// S~ = S^G + (n-1) n / (f2 r^2).
double scalar_SrM(const SphereBundleConfig& C, const SasakiPointData& d);

/// Trace of ricci_SrM_trace over the tangent frame; exercises the Gauss
/// corrections end to end.
double scalar_SrM_trace(const SphereBundleConfig& C, const SasakiPointData& d);

// Convenience overloads building the point data.
double scalar_SrM(const SphereBundleConfig& C, const TangentBundlePoint& P);
double mean_curvature(const SphereBundleConfig& C, const TangentBundlePoint& P);

// ---------------------------------------------------------------------------
// Positive-scalar-curvature scan
// ---------------------------------------------------------------------------

struct ScanRow {
  double f1, f2, r;
  double min_scalar;
  VectorXd argmin_x;
  VectorXd argmin_u;
  bool positive;
};

/// Sign-change bracket along one grid axis at fixed values of the other two.
struct ScanThreshold {
  double fixed1 = 0.0;       // f1 for r-axis thresholds; f2 for f1-axis ones
  double fixed2 = 0.0;
  std::string kind;          // "bracket" | "all_positive" | "all_nonpositive"
  double lo = 0.0, hi = 0.0; // bracket endpoints when kind == "bracket"
};

struct ScanResult {
  int dim = 0;
  std::vector<ScanRow> rows;
  std::vector<ScanThreshold> r_thresholds;   // per (f1, f2), along r
  std::vector<ScanThreshold> f1_thresholds;  // per (f2, r), along f1
  bool monotone_in_f1 = true;         // min scalar nondecreasing in f1
  bool monotone_in_f2_decrease = true;  // min scalar nondecreasing as f2 drops
  bool dim2_equal_scalars = false;    // m = 2: S~ == S^G on the bundle
};

/// Minimum of scalar_SrM over sampled (x, u) per (f1, f2, r) grid cell.
/// Sample points are shared across cells so thresholds are comparable.
ScanResult scan_positive_scalar(const std::shared_ptr<const ChartedManifold>& M,
                                const std::vector<double>& f1_grid,
                                const std::vector<double>& f2_grid,
                                const std::vector<double>& r_grid,
                                int sample_points, std::uint64_t seed);

} // namespace sasakigeo

#endif
