#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace rotavg {

// Deterministic random source used by the synthetic generators and the
// sampling oracles in the tests. All distributions are implemented on top
// of the raw mt19937_64 stream so that fixtures reproduce bit-for-bit on
// any platform (the standard library's distribution objects are not
// portable across implementations).
//
// Algorithms, recorded in dataset metadata as "mt19937_64":
//   uniform01  - (x >> 11) * 2^-53, x a raw 64-bit draw
//   normal     - Marsaglia polar method
//   quaternion - Marsaglia (1972) uniform point on S^3
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  static constexpr const char* kAlgorithm = "mt19937_64";

  std::uint64_t raw() { return gen_(); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform01() * static_cast<double>(hi - lo + 1));
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  Eigen::Vector3d normal3() { return {normal(), normal(), normal()}; }

  // Uniform unit quaternion (w, x, y, z).
  Eigen::Vector4d quaternion() {
    double x1, y1, s1, x2, y2, s2;
    do {
      x1 = 2.0 * uniform01() - 1.0;
      y1 = 2.0 * uniform01() - 1.0;
      s1 = x1 * x1 + y1 * y1;
    } while (s1 >= 1.0);
    do {
      x2 = 2.0 * uniform01() - 1.0;
      y2 = 2.0 * uniform01() - 1.0;
      s2 = x2 * x2 + y2 * y2;
    } while (s2 >= 1.0 || s2 == 0.0);
    const double f = std::sqrt((1.0 - s1) / s2);
    return {x1, y1, x2 * f, y2 * f};
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rotavg
