#pragma once

#include <vector>

#include "gammalab/vector.h"

namespace gammalab {

struct MinNormResult {
  Vector point;
  // Convex weights over the input points (zero outside the final corral).
  Vector weights;
  // |x|^2 - min_j <x, p_j>; |x - x*|^2 <= gap for the exact minimizer x*.
  double gap = 0.0;
  int iterations = 0;
};

// Minimum-norm point of conv(columns of `points`), a d-by-m matrix, by
// Wolfe's algorithm. Terminates on a relative duality gap of 1e-15 or when
// the most violating point already belongs to the corral.
MinNormResult min_norm_point(const Matrix& points);

Vector min_norm_point(const std::vector<Vector>& points);

// Euclidean projection of z onto conv(columns of `points`).
MinNormResult project_onto_hull(const Matrix& points, const Vector& z);

}  // namespace gammalab
