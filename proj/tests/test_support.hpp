#ifndef SASAKIGEO_TEST_SUPPORT_HPP
#define SASAKIGEO_TEST_SUPPORT_HPP

#include "sasakigeo/manifold.hpp"
#include "sasakigeo/sasaki.hpp"
#include "sasakigeo/util.hpp"

namespace sasakigeo::testing {

inline VectorXd random_chart_point(const ChartedManifold& M, Rng& rng,
                                   double margin = 0.08) {
  VectorXd x(M.dim());
  for (int i = 0; i < M.dim(); ++i) {
    double lo = M.domain().lo[i], hi = M.domain().hi[i];
    double pad = margin * (hi - lo);
    x(i) = rng.uniform(lo + pad, hi - pad);
  }
  return x;
}

inline SplitTangentVector random_split(Rng& rng, int m) {
  return {rng.uniform_vector(m, -1.0, 1.0), rng.uniform_vector(m, -1.0, 1.0)};
}

/// Random g-orthonormal frame at x (seeded by random directions).
inline std::vector<VectorXd> random_orthonormal_frame(const MatrixXd& g, Rng& rng) {
  const int m = static_cast<int>(g.rows());
  std::vector<VectorXd> seed;
  for (int i = 0; i < m; ++i) seed.push_back(rng.normal_vector(m));
  return gram_schmidt_frame(g, seed);
}

inline double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace sasakigeo::testing

#endif
