#ifndef SASAKIGEO_TENSOR_HPP
#define SASAKIGEO_TENSOR_HPP

#include <Eigen/Dense>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sasakigeo/errors.hpp"

namespace sasakigeo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Dense multi-index array with row-major storage. Dimensions stay small
/// (extents are m or 2m with m <= 6), so everything is a flat vector.
class DenseTensor {
public:
  DenseTensor() = default;
  explicit DenseTensor(std::vector<int> shape);

  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }

  double& at(std::span<const int> idx);
  double at(std::span<const int> idx) const;

  double& operator()(std::initializer_list<int> idx) {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }
  double operator()(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool all_finite() const;
  double max_abs() const;

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(double s);

  static DenseTensor from_matrix(const MatrixXd& m);
  static DenseTensor from_vector(const VectorXd& v);
  MatrixXd as_matrix() const;   // rank-2 only
  VectorXd as_vector() const;   // rank-1 only

private:
  std::size_t offset(std::span<const int> idx) const;

  std::vector<int> shape_;
  std::vector<std::size_t> strides_;
  std::vector<double> data_;
};

/// Central finite-difference scheme. The effective step in direction i is
/// step * max(1, |x_i|).
struct FDScheme {
  enum class Order { Central2, Central4 };

  double step = 1e-3;
  Order order = Order::Central4;
  bool richardson = false;
};

using TensorField = std::function<DenseTensor(const VectorXd&)>;

/// Partial derivatives of a tensor field, stacked in a new leading slot:
/// result(i, ...) = d/dx_i field(...). Throws NumericError on non-finite
/// field values; DomainError from the field propagates.
DenseTensor finite_difference_derivative(const TensorField& field,
                                         const VectorXd& point,
                                         const FDScheme& scheme = {});

/// Scalar-field convenience: gradient as a VectorXd.
VectorXd finite_difference_gradient(const std::function<double(const VectorXd&)>& f,
                                    const VectorXd& point,
                                    const FDScheme& scheme = {});

/// Gram-Schmidt against the inner product <a,b> = a^T gram b. The seed is
/// processed in order. When distinguished_last is given it is projected out
/// of the seed first, the remainder orthonormalized, and the normalized
/// distinguished vector appended as the final frame member.
std::vector<VectorXd> gram_schmidt_frame(
    const MatrixXd& gram, const std::vector<VectorXd>& seed,
    const std::optional<VectorXd>& distinguished_last = std::nullopt);

inline std::vector<VectorXd> gram_schmidt_frame(
    const DenseTensor& gram, const std::vector<VectorXd>& seed,
    const std::optional<VectorXd>& distinguished_last = std::nullopt) {
  return gram_schmidt_frame(gram.as_matrix(), seed, distinguished_last);
}

/// Contract pairs of slots of t against gram: for each pair (a, b) the slots
/// are summed with weight gram(ia, ib). Contracted slots drop from the shape.
DenseTensor contract_with_metric(const DenseTensor& t, const DenseTensor& gram,
                                 const std::vector<std::pair<int, int>>& slot_pairs);

} // namespace sasakigeo

#endif
