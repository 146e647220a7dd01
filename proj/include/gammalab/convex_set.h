#pragma once

#include <variant>

#include "gammalab/vector.h"

namespace gammalab {

struct Ball {
  Vector center;
  double radius = 1.0;
};

struct Box {
  Vector lo;
  Vector hi;
};

// {x : <normal, x> <= offset}
struct Halfspace {
  Vector normal;
  double offset = 0.0;
};

using ConvexSet = std::variant<Ball, Box, Halfspace>;

Eigen::Index set_dim(const ConvexSet& set);

// Throws InvalidArgument for empty or degenerate descriptors.
void validate_set(const ConvexSet& set);

// Membership up to a relative slack of 1e-12, so convex combinations of
// members stay members after rounding.
bool contains(const ConvexSet& set, const Vector& x);

// Euclidean projection. Points already inside are returned unchanged, and the
// result always passes contains().
Vector project(const ConvexSet& set, const Vector& x);

double distance(const ConvexSet& set, const Vector& x);

}  // namespace gammalab
