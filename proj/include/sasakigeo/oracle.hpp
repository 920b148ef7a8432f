#ifndef SASAKIGEO_ORACLE_HPP
#define SASAKIGEO_ORACLE_HPP

#include <functional>
#include <memory>

#include "sasakigeo/sasaki.hpp"

namespace sasakigeo {

/// Change of frame at a point of TM between split (h, v) components and
/// induced coordinates (dx, du): dx = h, du = v - Gamma(u) h.
struct FrameChange {
  MatrixXd matrix;  // 2m x 2m, columns are the lifted frame in coordinates
};

/// Brute-force verification chart: realizes g^{f1,f2} as a 2m x 2m metric in
/// induced coordinates (x, u) and differentiates only that matrix. It never
/// calls the closed-form curvature path it is meant to check.
class InducedChart {
public:
  using WeightFn = std::function<double(const VectorXd&)>;

  /// Constant-weight chart for a WeightedSasakiMetric.
  explicit InducedChart(const WeightedSasakiMetric& G);

  /// Position-dependent fiber weight f2(x) (conformal checks).
  InducedChart(std::shared_ptr<const ChartedManifold> base, double f1, WeightFn f2);

  int base_dim() const { return base_->dim(); }
  const ChartedManifold& base() const { return *base_; }

  /// G as a symmetric 2m x 2m matrix at p = (x, u):
  ///   G = f1 g_ij dx^i dx^j + f2 g_kl Du^k Du^l,  Du^k = du^k + Gamma^k_ij u^j dx^i.
  MatrixXd metric_matrix(const VectorXd& p) const;

  /// Levi-Civita Christoffels of the 2m metric, 4th-order stencils.
  DenseTensor christoffel(const VectorXd& p) const;

  /// Lowered curvature R_ABCD over 2m indices; Richardson at the outer level.
  DenseTensor curvature(const VectorXd& p) const;

  std::pair<MatrixXd, double> ricci_scalar(const VectorXd& p) const;

  FrameChange frame_change(const TangentBundlePoint& P) const;

  /// Everything needed at one point, so repeated contractions do not repeat
  /// the nested differentiation.
  struct PointValues {
    DenseTensor R;  // lowered curvature over 2m indices
    MatrixXd G;
    MatrixXd ric;
    double S = 0.0;
    FrameChange F;
  };
  PointValues evaluate(const TangentBundlePoint& P) const;

  static double curvature4_from(const PointValues& pv, const SplitTangentVector& X,
                                const SplitTangentVector& Y,
                                const SplitTangentVector& Z,
                                const SplitTangentVector& W);
  static double ricci_from(const PointValues& pv, const SplitTangentVector& X,
                           const SplitTangentVector& Y);

  /// Oracle value of R^G(X,Y,Z,W) on split vectors, via the frame change.
  double curvature4(const TangentBundlePoint& P, const SplitTangentVector& X,
                    const SplitTangentVector& Y, const SplitTangentVector& Z,
                    const SplitTangentVector& W) const;

  double ricci(const TangentBundlePoint& P, const SplitTangentVector& X,
               const SplitTangentVector& Y) const;

  double scalar(const TangentBundlePoint& P) const;

  static VectorXd pack(const TangentBundlePoint& P);

private:
  std::shared_ptr<const ChartedManifold> base_;
  double f1_;
  WeightFn f2_;
  FDScheme scheme_;
};

} // namespace sasakigeo

#endif
