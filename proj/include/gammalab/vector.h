#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string_view>

#include "gammalab/errors.h"

namespace gammalab {

// A point of the finite-dimensional Hilbert space R^d.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool is_finite(const Vector& x) { return x.allFinite(); }

inline void require_dim(const Vector& x, Eigen::Index dim, std::string_view what) {
  if (x.size() != dim) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(dim) +
                            ", got " + std::to_string(x.size()));
  }
}

inline void require_finite(const Vector& x, std::string_view what) {
  if (!x.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite coordinate");
}

}  // namespace gammalab
