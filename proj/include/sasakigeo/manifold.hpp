#ifndef SASAKIGEO_MANIFOLD_HPP
#define SASAKIGEO_MANIFOLD_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sasakigeo/tensor.hpp"

namespace sasakigeo {

/// Axis-aligned chart domain. Sampling and stencil checks shrink the box by
/// a relative margin (fraction of each edge).
struct ChartBox {
  std::vector<double> lo;
  std::vector<double> hi;

  bool contains(const VectorXd& x, double margin_fraction = 0.0) const;
  VectorXd clamp_inside(const VectorXd& x, double margin_fraction) const;
};

/// Curvature of the base manifold at a point.
/// Index conventions, fixed once for the whole library:
///   christoffel(k,i,j)      = Gamma^k_ij
///   lowered(i,j,k,l)        = R_ijkl = <R(d_i,d_j)d_k, d_l>
///   mixed(i,j,k,l)          = R^l_ijk  (lowered with last slot raised)
///   nabla(a,i,j,k,l)        = (nabla_a R)_ijkl
/// with R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
/// so constant-curvature models satisfy R(X,Y)Z = c(<Y,Z>X - <X,Z>Y).
struct CurvaturePair {
  DenseTensor mixed;
  DenseTensor lowered;
};

/// A Riemannian manifold presented in a single chart.
class ChartedManifold {
public:
  using MetricFn = std::function<DenseTensor(const VectorXd&)>;
  using ChristoffelFn = std::function<DenseTensor(const VectorXd&)>;
  using CurvatureFn = std::function<DenseTensor(const VectorXd&)>;

  ChartedManifold(int dim, MetricFn metric, ChartBox domain, std::string label);

  int dim() const { return dim_; }
  const std::string& label() const { return label_; }
  const ChartBox& domain() const { return domain_; }
  bool has_analytic_christoffel() const { return analytic_christoffel_ != nullptr; }
  bool has_analytic_curvature() const { return analytic_curvature_ != nullptr; }

  void set_analytic_christoffel(ChristoffelFn fn) { analytic_christoffel_ = std::move(fn); }
  void set_analytic_curvature(CurvatureFn fn) { analytic_curvature_ = std::move(fn); }
  void set_fd_scheme(FDScheme s) { fd_ = s; }
  const FDScheme& fd_scheme() const { return fd_; }

  /// Metric components g_ij at x. Throws DomainError off the chart.
  MatrixXd metric(const VectorXd& x) const;
  MatrixXd metric_inverse(const VectorXd& x) const;

  /// Levi-Civita Gamma^k_ij; analytic when attached, else finite differences.
  DenseTensor christoffel(const VectorXd& x) const;
  /// Force the finite-difference path (used to cross-check analytic formulas).
  DenseTensor christoffel_fd(const VectorXd& x) const;

  CurvaturePair riemann(const VectorXd& x) const;
  CurvaturePair riemann_fd(const VectorXd& x) const;

  /// (nabla_a R)_ijkl by differentiating the lowered curvature.
  DenseTensor nabla_riemann(const VectorXd& x) const;

  /// ric(X,Y) = sum_i R(X, e_i, e_i, Y) over a g-orthonormal frame; S its trace.
  std::pair<MatrixXd, double> ricci_and_scalar(const VectorXd& x) const;

  void check_domain(const VectorXd& x) const;

private:
  DenseTensor christoffel_from_metric(const VectorXd& x) const;
  CurvaturePair riemann_from_christoffel(const VectorXd& x) const;

  int dim_;
  MetricFn metric_;
  ChartBox domain_;
  std::string label_;
  ChristoffelFn analytic_christoffel_;
  CurvatureFn analytic_curvature_;
  FDScheme fd_;
};

/// Test-manifold zoo.
struct BumpSpec {
  double amplitude = 0.1;
  std::vector<double> center;
  double width = 1.0;
};

struct ZooSpec {
  enum class Kind { Euclidean, ConstantCurvature, Product, Perturbed };

  Kind kind = Kind::Euclidean;
  int dim = 2;
  double curvature_constant = 1.0;                  // constant_curvature
  std::vector<std::shared_ptr<ZooSpec>> factors;    // product (exactly two)
  BumpSpec bump;                                    // perturbed

  static ZooSpec euclidean(int dim);
  static ZooSpec constant_curvature(int dim, double c);
  static ZooSpec product(ZooSpec a, ZooSpec b);
  static ZooSpec perturbed(int dim, BumpSpec bump);
};

/// Builds the manifold, attaching analytic Christoffel/curvature closed forms
/// where the model admits them (everything except `perturbed`).
std::shared_ptr<const ChartedManifold> construct_zoo(const ZooSpec& spec);

} // namespace sasakigeo

#endif
