#pragma once

// JSON descriptors shared by every module and the CLI:
//   {"kind": "Quadratic", "lambda": 1, "params": {"Q": [[1]], "b": [0], "c": 0}}
// Vectors are arrays of numbers, matrices arrays of rows. +∞ is written as
// the string "inf".

#include <json.hpp>

#include "gammalab/convex.h"

namespace gammalab {

using Json = nlohmann::json;

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const ConvexSet& set);
Json to_json(const LambdaConvexFunction& f);
Json to_json(const ProxResult& r);

// Finite doubles pass through; ±∞ and NaN become strings.
Json number_to_json(double value);
double number_from_json(const Json& j);

Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
ConvexSet set_from_json(const Json& j);

// Quadratic descriptors may carry "lambda"; it must match the smallest
// eigenvalue of Q. Other kinds store the given lambda (default 0).
LambdaConvexFunction function_from_json(const Json& j);

}  // namespace gammalab
