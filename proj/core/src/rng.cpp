#include "zodfo/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace zodfo {

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  // Rejection keeps the draw exactly uniform without bias from the modulus.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return v % n;
}

double RngStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

Vector RngStream::gaussian_vector(Eigen::Index d) {
  if (d <= 0) throw std::invalid_argument("gaussian_vector: d must be positive");
  Vector u(d);
  for (Eigen::Index j = 0; j < d; ++j) u[j] = normal();
  return u;
}

}  // namespace zodfo
