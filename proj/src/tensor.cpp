#include "sasakigeo/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace sasakigeo {

DenseTensor::DenseTensor(std::vector<int> shape) : shape_(std::move(shape)) {
  std::size_t n = 1;
  strides_.resize(shape_.size());
  for (int i = static_cast<int>(shape_.size()) - 1; i >= 0; --i) {
    if (shape_[i] <= 0) throw ShapeError("tensor extent must be positive");
    strides_[i] = n;
    n *= static_cast<std::size_t>(shape_[i]);
  }
  data_.assign(n, 0.0);
}

std::size_t DenseTensor::offset(std::span<const int> idx) const {
  if (idx.size() != shape_.size()) throw ShapeError("index rank mismatch");
  std::size_t off = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= shape_[k]) throw ShapeError("index out of range");
    off += strides_[k] * static_cast<std::size_t>(idx[k]);
  }
  return off;
}

double& DenseTensor::at(std::span<const int> idx) { return data_[offset(idx)]; }
double DenseTensor::at(std::span<const int> idx) const { return data_[offset(idx)]; }

bool DenseTensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

double DenseTensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  if (shape_ != other.shape_) throw ShapeError("shape mismatch in +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  if (shape_ != other.shape_) throw ShapeError("shape mismatch in -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

DenseTensor DenseTensor::from_matrix(const MatrixXd& m) {
  DenseTensor t({static_cast<int>(m.rows()), static_cast<int>(m.cols())});
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t({i, j}) = m(i, j);
  return t;
}

DenseTensor DenseTensor::from_vector(const VectorXd& v) {
  DenseTensor t({static_cast<int>(v.size())});
  for (int i = 0; i < v.size(); ++i) t({i}) = v(i);
  return t;
}

MatrixXd DenseTensor::as_matrix() const {
  if (rank() != 2) throw ShapeError("as_matrix requires rank 2");
  MatrixXd m(shape_[0], shape_[1]);
  for (int i = 0; i < shape_[0]; ++i)
    for (int j = 0; j < shape_[1]; ++j) m(i, j) = at(std::array{i, j});
  return m;
}

VectorXd DenseTensor::as_vector() const {
  if (rank() != 1) throw ShapeError("as_vector requires rank 1");
  VectorXd v(shape_[0]);
  for (int i = 0; i < shape_[0]; ++i) v(i) = at(std::array{i});
  return v;
}

namespace {

DenseTensor eval_checked(const TensorField& field, const VectorXd& x) {
  DenseTensor t = field(x);
  if (!t.all_finite()) throw NumericError("non-finite field value in stencil");
  return t;
}

// One directional derivative at the given absolute step.
DenseTensor directional(const TensorField& field, const VectorXd& point, int dir,
                        double h, FDScheme::Order order) {
  VectorXd x = point;
  auto shift = [&](double s) {
    x(dir) = point(dir) + s;
    return eval_checked(field, x);
  };
  if (order == FDScheme::Order::Central2) {
    DenseTensor d = shift(h);
    d -= shift(-h);
    d *= 1.0 / (2.0 * h);
    return d;
  }
  // (-f(2h) + 8 f(h) - 8 f(-h) + f(-2h)) / (12 h)
  DenseTensor d = shift(2.0 * h);
  d *= -1.0;
  DenseTensor p1 = shift(h);
  p1 *= 8.0;
  d += p1;
  DenseTensor m1 = shift(-h);
  m1 *= -8.0;
  d += m1;
  d += shift(-2.0 * h);
  d *= 1.0 / (12.0 * h);
  return d;
}

} // namespace

DenseTensor finite_difference_derivative(const TensorField& field,
                                         const VectorXd& point,
                                         const FDScheme& scheme) {
  if (scheme.step <= 0.0) throw ConfigError("FD step must be positive");
  const int n = static_cast<int>(point.size());
  DenseTensor sample = eval_checked(field, point);

  std::vector<int> out_shape;
  out_shape.push_back(n);
  for (int e : sample.shape()) out_shape.push_back(e);
  DenseTensor out(out_shape);

  const std::size_t block = sample.size();
  for (int dir = 0; dir < n; ++dir) {
    double h = scheme.step * std::max(1.0, std::abs(point(dir)));
    DenseTensor d = directional(field, point, dir, h, scheme.order);
    if (scheme.richardson) {
      DenseTensor dh = directional(field, point, dir, 0.5 * h, scheme.order);
      // Richardson step for the leading error term of the base scheme.
      double w = scheme.order == FDScheme::Order::Central4 ? 16.0 : 4.0;
      dh *= w;
      dh -= d;
      dh *= 1.0 / (w - 1.0);
      d = dh;
    }
    std::copy(d.data().begin(), d.data().end(),
              out.data().begin() + static_cast<std::ptrdiff_t>(block) * dir);
  }
  return out;
}

VectorXd finite_difference_gradient(const std::function<double(const VectorXd&)>& f,
                                    const VectorXd& point, const FDScheme& scheme) {
  TensorField field = [&](const VectorXd& x) {
    DenseTensor t({1});
    t({0}) = f(x);
    return t;
  };
  DenseTensor d = finite_difference_derivative(field, point, scheme);
  VectorXd g(point.size());
  for (int i = 0; i < point.size(); ++i) g(i) = d({i, 0});
  return g;
}

std::vector<VectorXd> gram_schmidt_frame(
    const MatrixXd& gram, const std::vector<VectorXd>& seed,
    const std::optional<VectorXd>& distinguished_last) {
  const int m = static_cast<int>(gram.rows());
  if (gram.cols() != m) throw ShapeError("gram must be square");
  {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw GeometryError("gram matrix not positive-definite");
  }
  auto ip = [&](const VectorXd& a, const VectorXd& b) {
    return a.dot(gram * b);
  };

  std::vector<VectorXd> frame;
  VectorXd last;
  if (distinguished_last) {
    last = *distinguished_last;
    double n2 = ip(last, last);
    if (n2 <= 0.0 || !std::isfinite(n2))
      throw GeometryError("distinguished vector must be nonzero");
    last /= std::sqrt(n2);
  }

  const int want = distinguished_last ? m - 1 : m;
  for (const VectorXd& s : seed) {
    if (static_cast<int>(frame.size()) == want) break;
    VectorXd v = s;
    if (distinguished_last) v -= ip(v, last) * last;
    for (const VectorXd& e : frame) v -= ip(v, e) * e;
    // Second pass for numerical orthogonality.
    if (distinguished_last) v -= ip(v, last) * last;
    for (const VectorXd& e : frame) v -= ip(v, e) * e;
    double n2 = ip(v, v);
    double s2 = ip(s, s);
    if (n2 < 1e-20 * std::max(1.0, s2)) {
      if (!distinguished_last) throw RankError("seed vectors linearly dependent");
      continue;  // redundant after projecting out the distinguished direction
    }
    frame.push_back(v / std::sqrt(n2));
  }
  if (static_cast<int>(frame.size()) != want)
    throw RankError("seed does not span the required subspace");
  if (distinguished_last) frame.push_back(last);
  return frame;
}

DenseTensor contract_with_metric(const DenseTensor& t, const DenseTensor& gram,
                                 const std::vector<std::pair<int, int>>& slot_pairs) {
  if (gram.rank() != 2) throw ShapeError("gram must be rank 2");
  const int r = t.rank();
  std::vector<bool> contracted(r, false);
  for (auto [a, b] : slot_pairs) {
    if (a < 0 || b < 0 || a >= r || b >= r || a == b)
      throw ShapeError("invalid slot pair");
    if (contracted[a] || contracted[b]) throw ShapeError("slot paired twice");
    if (t.shape()[a] != t.shape()[b]) throw ShapeError("paired extents differ");
    if (t.shape()[a] != gram.shape()[0] || t.shape()[a] != gram.shape()[1])
      throw ShapeError("gram extent does not match paired slots");
    contracted[a] = contracted[b] = true;
  }

  std::vector<int> free_slots;
  std::vector<int> out_shape;
  for (int k = 0; k < r; ++k)
    if (!contracted[k]) {
      free_slots.push_back(k);
      out_shape.push_back(t.shape()[k]);
    }
  DenseTensor out(out_shape.empty() ? std::vector<int>{1} : out_shape);
  const bool scalar_out = out_shape.empty();

  std::vector<int> idx(r, 0);
  std::vector<int> free_idx(free_slots.size(), 0);

  // Iterate free indices, then paired indices, accumulating gram weights.
  std::function<void(std::size_t, double&)> sum_pairs =
      [&](std::size_t p, double& acc) {
        if (p == slot_pairs.size()) {
          acc += t.at(idx);
          return;
        }
        auto [a, b] = slot_pairs[p];
        for (int ia = 0; ia < t.shape()[a]; ++ia)
          for (int ib = 0; ib < t.shape()[b]; ++ib) {
            idx[a] = ia;
            idx[b] = ib;
            double g = gram.at(std::array{ia, ib});
            if (g == 0.0) continue;
            double sub = 0.0;
            sum_pairs(p + 1, sub);
            acc += g * sub;
          }
      };

  std::function<void(std::size_t)> iterate_free = [&](std::size_t f) {
    if (f == free_slots.size()) {
      double acc = 0.0;
      sum_pairs(0, acc);
      if (scalar_out)
        out({0}) = acc;
      else
        out.at(free_idx) = acc;
      return;
    }
    for (int v = 0; v < t.shape()[free_slots[f]]; ++v) {
      idx[free_slots[f]] = v;
      free_idx[f] = v;
      iterate_free(f + 1);
    }
  };
  iterate_free(0);
  return out;
}

} // namespace sasakigeo
