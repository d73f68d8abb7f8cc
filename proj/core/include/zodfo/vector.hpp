#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace zodfo {

using Vector = Eigen::VectorXd;

inline bool is_finite(const Vector& v) { return v.allFinite(); }

// Solver state and evaluation points must stay finite; callers that accept
// external input funnel it through here before touching the objective.
inline void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
  }
}

inline void require_dimension(const Vector& v, Eigen::Index d, const char* what) {
  if (v.size() != d) {
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(d) + ", got " +
                                std::to_string(v.size()));
  }
}

}  // namespace zodfo
