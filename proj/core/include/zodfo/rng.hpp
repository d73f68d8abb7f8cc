#pragma once

#include <cstdint>
#include <random>

#include "zodfo/vector.hpp"

namespace zodfo {

/*! Deterministic random stream shared by all solvers.
 *
 *  Reproducibility contract: for a fixed seed the sequence of draws is
 *  identical across platforms and builds.  The engine is mt19937_64 (whose
 *  output is fully specified by the standard) and every derived draw uses a
 *  fixed, named transform rather than the implementation-defined standard
 *  distributions:
 *    - uniform indices: rejection sampling on the raw 64-bit stream,
 *    - standard normals: Marsaglia polar method (pairs, spare cached).
 */
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform draw from {0, ..., n-1}, with replacement across calls.
  std::uint64_t uniform_index(std::uint64_t n);

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform01();

  // One standard normal via the Marsaglia polar method.
  double normal();

  // d independent standard normals (the smoothing direction u).
  Vector gaussian_vector(Eigen::Index d);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace zodfo
