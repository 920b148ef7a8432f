#ifndef SASAKIGEO_SASAKI_HPP
#define SASAKIGEO_SASAKI_HPP

#include <memory>
#include <optional>
#include <vector>

#include "sasakigeo/manifold.hpp"

namespace sasakigeo {

/// The metric f1 pi*g (+) f2 pi*g on H (+) V of TTM, with f1, f2 constant.
struct WeightedSasakiMetric {
  std::shared_ptr<const ChartedManifold> base;
  double f1 = 1.0;
  double f2 = 1.0;

  WeightedSasakiMetric(std::shared_ptr<const ChartedManifold> b, double f1_,
                       double f2_);
  double delta() const { return f2 / f1; }
};

/// A point (x, u) of TM in the base chart.
struct TangentBundlePoint {
  VectorXd x;
  VectorXd u;
};

/// Element of T(TM) as (horizontal part, vertical part), both expressed in
/// the base coordinate frame.
struct SplitTangentVector {
  VectorXd h;
  VectorXd v;

  static SplitTangentVector zero(int m);
  static SplitTangentVector horizontal(const VectorXd& h);
  static SplitTangentVector vertical(const VectorXd& v);

  SplitTangentVector operator+(const SplitTangentVector& o) const;
  SplitTangentVector operator-(const SplitTangentVector& o) const;
  SplitTangentVector operator*(double s) const;
  double max_abs() const;
};

/// g-orthonormal frame of the base tangent space at x; when u != 0 the last
/// vector is u/|u|.
struct AdaptedFrame {
  std::vector<VectorXd> e;
};

AdaptedFrame adapted_frame(const MatrixXd& g, const VectorXd& u);

/// Everything the curvature blocks need at one point (x, u): base metric,
/// frame, curvature, and its covariant derivative. Building one of these per
/// evaluation point and reusing it across tensor calls is the intended
/// pattern; all members are immutable after construction except the lazily
/// computed nabla R.
class SasakiPointData {
public:
  SasakiPointData(const WeightedSasakiMetric& G, const TangentBundlePoint& P);

  int dim() const { return m_; }
  double f1() const { return f1_; }
  double f2() const { return f2_; }
  double delta() const { return f2_ / f1_; }
  const VectorXd& x() const { return x_; }
  const VectorXd& u() const { return u_; }
  const MatrixXd& g() const { return g_; }
  const MatrixXd& ginv() const { return ginv_; }
  const std::vector<VectorXd>& frame() const { return frame_; }
  const MatrixXd& base_ricci() const { return ric_; }
  double base_scalar() const { return S_; }

  double inner(const VectorXd& a, const VectorXd& b) const {
    return a.dot(g_ * b);
  }
  /// G(X,Y) = f1 <X^h,Y^h> + f2 <X^v,Y^v>.
  double pair(const SplitTangentVector& X, const SplitTangentVector& Y) const {
    return f1_ * inner(X.h, Y.h) + f2_ * inner(X.v, Y.v);
  }

  /// R(a,b)c of the base, from the mixed components.
  VectorXd curv_op(const VectorXd& a, const VectorXd& b, const VectorXd& c) const;
  /// scriptR on horizontal m-vectors: R(a,b)u.
  VectorXd rr(const VectorXd& a, const VectorXd& b) const { return curv_op(a, b, u_); }
  /// (nabla_d R)(a,b)c, raised last slot.
  VectorXd nabla_curv_op(const VectorXd& d, const VectorXd& a, const VectorXd& b,
                         const VectorXd& c) const;

  const DenseTensor& lowered_curvature() const { return Rlow_; }
  const DenseTensor& nabla_lowered() const;

private:
  int m_;
  double f1_, f2_;
  VectorXd x_, u_;
  MatrixXd g_, ginv_;
  std::vector<VectorXd> frame_;
  DenseTensor Rlow_, Rmix_;
  MatrixXd ric_;
  double S_ = 0.0;
  std::shared_ptr<const ChartedManifold> base_;
  mutable std::optional<DenseTensor> nablaR_;
};

// The tensors of the weighted Sasaki connection and curvature. Each operation
// has a point-data overload (preferred in loops) and a convenience overload
// that builds the point data on the fly.

/// scriptR(X,Y) = R(X^h, Y^h) u, vertical valued, antisymmetric.
SplitTangentVector script_R(const SasakiPointData& d, const SplitTangentVector& X,
                            const SplitTangentVector& Y);

/// <A(X,Y), Z> = (delta/2)(<scriptR(X,Z),Y> + <scriptR(Y,Z),X>), horizontal
/// valued, expanded over the adapted frame.
SplitTangentVector tensor_A(const SasakiPointData& d, const SplitTangentVector& X,
                            const SplitTangentVector& Y);

/// B(X,Y) = Y(phi2) X^v - delta <X^v,Y^v> grad phi2; grad phi2 supplied by the
/// caller (zero for constant f2).
SplitTangentVector tensor_B(const SasakiPointData& d, const VectorXd& grad_phi2,
                            const SplitTangentVector& X, const SplitTangentVector& Y);

/// A^{nabla_D scriptR}(Y,Z) with
/// (nabla_D scriptR)(A,B) = (nabla_{D^h} R)(A^h,B^h)u + R(A^h,B^h) D^v.
SplitTangentVector a_nabla_R(const SasakiPointData& d, const SplitTangentVector& D,
                             const SplitTangentVector& Y, const SplitTangentVector& Z);

/// Curvature R^G(X,Y)Z from the per-block closed formulas, extended by
/// multilinearity over the h/v parts.
SplitTangentVector curvature_RG(const SasakiPointData& d, const SplitTangentVector& X,
                                const SplitTangentVector& Y, const SplitTangentVector& Z);

/// 4-tensor R^G(X,Y,Z,W) = G(R^G(X,Y)Z, W).
double curvature_RG4(const SasakiPointData& d, const SplitTangentVector& X,
                     const SplitTangentVector& Y, const SplitTangentVector& Z,
                     const SplitTangentVector& W);

/// Independent assembly R^G = R - (1/2) d-nabla scriptR + d-nabla A
/// - (1/2) scriptR^A - (1/2) A^scriptR + A^A; exists to cross-check the block
/// formulas.
SplitTangentVector assemble_RG_from_pieces(const SasakiPointData& d,
                                           const SplitTangentVector& X,
                                           const SplitTangentVector& Y,
                                           const SplitTangentVector& Z);

/// Ricci of G from the block formulas, symmetric bilinear.
double ricci_G(const SasakiPointData& d, const SplitTangentVector& X,
               const SplitTangentVector& Y);

/// Scalar curvature S^G = S/f1 - (f2/4f1^2) sum_{ijk} scriptR_ijk^2.
double scalar_G(const SasakiPointData& d);

/// Ricci matrix in the G-orthonormal adapted frame
/// (e_i/sqrt(f1), theta e_i/sqrt(f2)); trace equals scalar_G.
MatrixXd ricci_G_matrix(const SasakiPointData& d);

// Convenience overloads.
SplitTangentVector script_R(const WeightedSasakiMetric& G, const TangentBundlePoint& P,
                            const SplitTangentVector& X, const SplitTangentVector& Y);
SplitTangentVector tensor_A(const WeightedSasakiMetric& G, const TangentBundlePoint& P,
                            const SplitTangentVector& X, const SplitTangentVector& Y);
SplitTangentVector a_nabla_R(const WeightedSasakiMetric& G, const TangentBundlePoint& P,
                             const SplitTangentVector& D, const SplitTangentVector& Y,
                             const SplitTangentVector& Z);
SplitTangentVector curvature_RG(const WeightedSasakiMetric& G, const TangentBundlePoint& P,
                                const SplitTangentVector& X, const SplitTangentVector& Y,
                                const SplitTangentVector& Z);
double curvature_RG4(const WeightedSasakiMetric& G, const TangentBundlePoint& P,
                     const SplitTangentVector& X, const SplitTangentVector& Y,
                     const SplitTangentVector& Z, const SplitTangentVector& W);
double ricci_G(const WeightedSasakiMetric& G, const TangentBundlePoint& P,
               const SplitTangentVector& X, const SplitTangentVector& Y);
double scalar_G(const WeightedSasakiMetric& G, const TangentBundlePoint& P);

/// Closed 4-tensor forms on their special argument patterns; each must agree
/// with the generic path. Arguments are m-vectors (pure parts).
namespace rg4_patterns {
double hhhh(const SasakiPointData& d, const VectorXd& Xh, const VectorXd& Yh,
            const VectorXd& Wh);
double hvvh(const SasakiPointData& d, const VectorXd& Xh, const VectorXd& Yv,
            const VectorXd& Wh);
double vhhh(const SasakiPointData& d, const VectorXd& Xv, const VectorXd& Yh,
            const VectorXd& Wh);
double vhhv(const SasakiPointData& d, const VectorXd& Xv, const VectorXd& Yh,
            const VectorXd& Wv);
double hhhv(const SasakiPointData& d, const VectorXd& Xh, const VectorXd& Yh,
            const VectorXd& Wv);
} // namespace rg4_patterns

} // namespace sasakigeo

#endif
