#pragma once

// Indexed families (f_h, x_h0, x_h1) with a declared Mosco limit (f, x0, x1).

#include <string>
#include <vector>

#include "gammalab/convex.h"
#include "gammalab/function_io.h"

namespace gammalab {

struct FamilyMember {
  LambdaConvexFunction f;
  Vector x0;
  Vector x1;
  // Family parameter (ε, penalty weight, ...) and a scale tending to 0 along
  // the family; endpoint drift is proportional to the scale.
  double parameter = 0.0;
  double scale = 0.0;
};

struct MoscoFamily {
  std::string name;
  std::vector<FamilyMember> members;
  FamilyMember limit;
  double uniform_lambda = 0.0;
  double slope_bound_S = 0.0;
  std::vector<Vector> probes;  // default probe points for the experiments
};

// x_h,i = x_i + drift * scale_h * (1, ..., 1).
struct EndpointDrift {
  double amount = 0.0;
};

std::vector<double> default_epsilon_schedule();   // {0.5, 0.2, 0.1, 0.05, 0.02, 0.01}
std::vector<double> default_penalty_schedule();   // {1, 4, 16, 64, 256, 1024}

// LogSumExp members with decreasing ε converging to MaxLinear on the same
// vectors (rows of `vectors`).
MoscoFamily family_logsumexp_to_max(const Matrix& vectors, const std::vector<double>& epsilon_schedule,
                                    const Vector& x0, const Vector& x1, EndpointDrift drift = {});

// Stacked permutations: for points A_1..A_n in R^k, the rows are
// A^σ = (A_σ(1), ..., A_σ(n)) in R^{nk} for every σ, in lexicographic order.
Matrix permutation_vectors(const Matrix& points);

// Members weight_h * dist^2(., C) with increasing weights; limit Indicator(C).
// Endpoints must lie in C.
MoscoFamily family_penalty_to_indicator(const ConvexSet& set, const std::vector<double>& penalty_schedule,
                                        const Vector& x0, const Vector& x1, EndpointDrift drift = {});

// Every member equals f.
MoscoFamily family_constant(const LambdaConvexFunction& f, const Vector& x0, const Vector& x1, int count = 6);

struct FamilyAudit {
  bool lambda_ok = true;       // every λ >= uniform_lambda
  bool slope_bound_ok = true;  // endpoint slopes <= S
  bool endpoints_converge = true;
  double max_endpoint_slope = 0.0;
  std::vector<double> endpoint_distances;  // max_i |x_h,i - x_i| per member
};

FamilyAudit audit_family(const MoscoFamily& family);

Json to_json(const MoscoFamily& family);
// {"type": "logsumexp_to_max", "vectors": [...], "epsilons": [...], "x0", "x1", "drift"},
// {"type": "penalty_to_indicator", "set": {...}, "penalties": [...], ...} or
// {"type": "constant", "function": {...}, "count": 6, ...}.
MoscoFamily family_from_json(const Json& j);

}  // namespace gammalab
