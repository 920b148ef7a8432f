#ifndef SASAKIGEO_UTIL_HPP
#define SASAKIGEO_UTIL_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include <Eigen/Dense>

namespace sasakigeo {

/// Deterministic sampling: mt19937_64 has a standard-mandated sequence and the
/// mappings below avoid the implementation-defined library distributions, so
/// identical seeds give identical draws on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 1e-300);
    double u2 = uniform01();
    double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
  }

  Eigen::VectorXd normal_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  Eigen::VectorXd uniform_vector(int n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }

private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Worker cap from SASAKIGEO_THREADS (0 or unset = hardware concurrency).
int worker_count();

/// Index-parallel loop; results must be written to disjoint slots so the
/// schedule cannot affect output. Exceptions propagate from the first failing
/// index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Shortest 17-significant-digit form, used for all CSV numbers.
std::string format_double(double v);

} // namespace sasakigeo

#endif
