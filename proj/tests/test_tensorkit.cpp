#include <doctest.h>

#include <cmath>

#include "sasakigeo/tensor.hpp"
#include "sasakigeo/util.hpp"

using namespace sasakigeo;

namespace {

DenseTensor scalar_field(double v) {
  DenseTensor t({1});
  t({0}) = v;
  return t;
}

} // namespace

TEST_CASE("derivative of bilinear field is exact") {
  TensorField f = [](const VectorXd& x) { return scalar_field(x(0) * x(1)); };
  VectorXd p(2);
  p << 1.0, 2.0;
  FDScheme scheme{1e-3, FDScheme::Order::Central2, false};
  DenseTensor d = finite_difference_derivative(f, p, scheme);
  CHECK(d({0, 0}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(d({1, 0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("derivative of a constant tensor is the zero tensor") {
  TensorField f = [](const VectorXd&) {
    DenseTensor t({2, 2});
    t({0, 0}) = 3.0;
    t({1, 1}) = -1.0;
    return t;
  };
  VectorXd p(3);
  p << 0.5, -0.2, 1.0;
  DenseTensor d = finite_difference_derivative(f, p);
  CHECK(d.shape() == std::vector<int>{3, 2, 2});
  CHECK(d.max_abs() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("sin derivative matches cos to 1e-8") {
  TensorField f = [](const VectorXd& x) { return scalar_field(std::sin(x(0))); };
  VectorXd p(1);
  p << 0.3;
  FDScheme scheme{1e-4, FDScheme::Order::Central2, false};
  DenseTensor d = finite_difference_derivative(f, p, scheme);
  CHECK(std::abs(d({0, 0}) - std::cos(0.3)) < 1e-8);
}

TEST_CASE("4th-order scheme is exact on polynomials of degree <= 4") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    // random univariate quartic in x_0, evaluated in a 2d chart
    double c[5];
    for (double& v : c) v = rng.uniform(-2.0, 2.0);
    TensorField f = [&c](const VectorXd& x) {
      double t = x(0);
      return scalar_field(c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * c[4]))));
    };
    VectorXd p = rng.uniform_vector(2, -1.0, 1.0);
    DenseTensor d = finite_difference_derivative(f, p);
    double t = p(0);
    double expected = c[1] + 2 * c[2] * t + 3 * c[3] * t * t + 4 * c[4] * t * t * t;
    double scale = std::max(1.0, std::abs(expected));
    CHECK(std::abs(d({0, 0}) - expected) / scale < 1e-10);
    CHECK(std::abs(d({1, 0})) < 1e-10);
  }
}

TEST_CASE("richardson refinement tightens the 2nd-order scheme") {
  TensorField f = [](const VectorXd& x) { return scalar_field(std::exp(x(0))); };
  VectorXd p(1);
  p << 0.4;
  FDScheme plain{1e-2, FDScheme::Order::Central2, false};
  FDScheme rich{1e-2, FDScheme::Order::Central2, true};
  double exact = std::exp(0.4);
  double e_plain = std::abs(finite_difference_derivative(f, p, plain)({0, 0}) - exact);
  double e_rich = std::abs(finite_difference_derivative(f, p, rich)({0, 0}) - exact);
  CHECK(e_rich < e_plain / 10.0);
}

TEST_CASE("stencil errors surface as exceptions") {
  TensorField domain_limited = [](const VectorXd& x) {
    if (x(0) > 1.0) throw DomainError("left the chart");
    return scalar_field(x(0));
  };
  VectorXd edge(1);
  edge << 0.9999;
  FDScheme scheme{1e-3, FDScheme::Order::Central4, false};
  CHECK_THROWS_AS(finite_difference_derivative(domain_limited, edge, scheme),
                  DomainError);

  TensorField bad = [](const VectorXd& x) {
    return scalar_field(x(0) > 0.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0);
  };
  VectorXd origin(1);
  origin << 0.0;
  CHECK_THROWS_AS(finite_difference_derivative(bad, origin, scheme), NumericError);

  FDScheme invalid{0.0, FDScheme::Order::Central4, false};
  TensorField ok = [](const VectorXd& x) { return scalar_field(x(0)); };
  CHECK_THROWS_AS(finite_difference_derivative(ok, origin, invalid), ConfigError);
}

TEST_CASE("gram schmidt: identity gram keeps the standard basis") {
  MatrixXd gram = MatrixXd::Identity(3, 3);
  std::vector<VectorXd> seed;
  for (int i = 0; i < 3; ++i) seed.push_back(VectorXd::Unit(3, i));
  auto frame = gram_schmidt_frame(gram, seed);
  for (int i = 0; i < 3; ++i)
    CHECK((frame[i] - VectorXd::Unit(3, i)).norm() < 1e-14);
}

TEST_CASE("gram schmidt: diagonal gram rescales") {
  MatrixXd gram(2, 2);
  gram << 4.0, 0.0, 0.0, 1.0;
  std::vector<VectorXd> seed{VectorXd::Unit(2, 0), VectorXd::Unit(2, 1)};
  auto frame = gram_schmidt_frame(gram, seed);
  CHECK(frame[0](0) == doctest::Approx(0.5));
  CHECK(frame[0](1) == doctest::Approx(0.0));
  CHECK(frame[1](1) == doctest::Approx(1.0));
}

TEST_CASE("gram schmidt: distinguished last vector") {
  MatrixXd gram = MatrixXd::Identity(3, 3);
  std::vector<VectorXd> seed;
  for (int i = 0; i < 3; ++i) seed.push_back(VectorXd::Unit(3, i));
  VectorXd dist(3);
  dist << 0.0, 0.0, 2.0;
  auto frame = gram_schmidt_frame(gram, seed, dist);
  REQUIRE(frame.size() == 3);
  CHECK((frame[2] - VectorXd::Unit(3, 2)).norm() < 1e-12);
  // first two orthonormal in the x1 x2 plane
  for (int i = 0; i < 2; ++i) CHECK(std::abs(frame[i](2)) < 1e-12);
  CHECK(std::abs(frame[0].dot(frame[1])) < 1e-12);
}

TEST_CASE("gram schmidt property: F^T gram F = I for random SPD gram") {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    int m = 2 + static_cast<int>(rng.uniform(0.0, 3.999));
    MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a(i, j) = rng.normal();
    MatrixXd gram = a.transpose() * a + 0.3 * MatrixXd::Identity(m, m);
    std::vector<VectorXd> seed;
    for (int i = 0; i < m; ++i) seed.push_back(VectorXd::Unit(m, i));
    std::optional<VectorXd> dist;
    if (trial % 2 == 0) dist = rng.normal_vector(m);
    auto frame = gram_schmidt_frame(gram, seed, dist);
    REQUIRE(static_cast<int>(frame.size()) == m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(frame[i].dot(gram * frame[j]) - expected) < 1e-10);
      }
  }
}

TEST_CASE("gram schmidt error paths") {
  MatrixXd gram = MatrixXd::Identity(2, 2);
  std::vector<VectorXd> dependent{VectorXd::Unit(2, 0), VectorXd::Unit(2, 0)};
  CHECK_THROWS_AS(gram_schmidt_frame(gram, dependent), RankError);

  MatrixXd indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -1.0;
  std::vector<VectorXd> seed{VectorXd::Unit(2, 0), VectorXd::Unit(2, 1)};
  CHECK_THROWS_AS(gram_schmidt_frame(indefinite, seed), GeometryError);
}

namespace {

DenseTensor outer(const VectorXd& a, const VectorXd& b) {
  DenseTensor t({static_cast<int>(a.size()), static_cast<int>(b.size())});
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j) t({i, j}) = a(i) * b(j);
  return t;
}

double pair_with(const VectorXd& a, const VectorXd& b, const MatrixXd& gram) {
  DenseTensor t = outer(a, b);
  DenseTensor g = DenseTensor::from_matrix(gram);
  return contract_with_metric(t, g, {{0, 1}})({0});
}

} // namespace

TEST_CASE("contract_with_metric examples") {
  VectorXd e1 = VectorXd::Unit(2, 0), e2 = VectorXd::Unit(2, 1);
  MatrixXd id = MatrixXd::Identity(2, 2);
  CHECK(pair_with(e1, e2, id) == doctest::Approx(0.0));

  VectorXd a(2), b(2);
  a << 1.0, 2.0;
  b << 3.0, 4.0;
  CHECK(pair_with(a, b, id) == doctest::Approx(11.0));

  MatrixXd scaled = 9.0 * id;
  CHECK(pair_with(e1, e1, scaled) == doctest::Approx(9.0));
}

TEST_CASE("contract_with_metric is bilinear and symmetric for symmetric gram") {
  Rng rng(23);
  MatrixXd a(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = rng.normal();
  MatrixXd gram = a + a.transpose();
  for (int trial = 0; trial < 10; ++trial) {
    VectorXd x = rng.normal_vector(3), y = rng.normal_vector(3),
             z = rng.normal_vector(3);
    double s = rng.uniform(-2.0, 2.0);
    CHECK(pair_with(x, y, gram) == doctest::Approx(pair_with(y, x, gram)));
    CHECK(pair_with((x + s * z).eval(), y, gram) ==
          doctest::Approx(pair_with(x, y, gram) + s * pair_with(z, y, gram)));
  }
}

TEST_CASE("contract drops paired slots and keeps free ones") {
  DenseTensor t({2, 3, 2});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 2; ++k) t({i, j, k}) = i + 10.0 * j + 100.0 * k;
  DenseTensor id = DenseTensor::from_matrix(MatrixXd::Identity(2, 2));
  DenseTensor r = contract_with_metric(t, id, {{0, 2}});
  REQUIRE(r.shape() == std::vector<int>{3});
  for (int j = 0; j < 3; ++j)
    CHECK(r({j}) == doctest::Approx(t({0, j, 0}) + t({1, j, 1})));

  DenseTensor bad = DenseTensor::from_matrix(MatrixXd::Identity(3, 3));
  CHECK_THROWS_AS(contract_with_metric(t, bad, {{0, 2}}), ShapeError);
  CHECK_THROWS_AS(contract_with_metric(t, id, {{0, 1}}), ShapeError);
}
