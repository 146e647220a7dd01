#pragma once

// Seeded randomized invariant suites for every module.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gammalab/function_io.h"

namespace gammalab {

using Rng = std::mt19937_64;

// Random instances. Quadratics may have negative λ; sets are nondegenerate.
LambdaConvexFunction random_function(Kind kind, Eigen::Index dim, Rng& rng);
ConvexSet random_set(Eigen::Index dim, Rng& rng);
Vector random_vector(Eigen::Index dim, double scale, Rng& rng);
// A point of D(∂f): anywhere for finite kinds, inside the set for Indicator.
Vector random_domain_point(const LambdaConvexFunction& f, Rng& rng);
// τ with 1 + τλ >= 0.5, log-uniform in [1e-2, 2] before clipping.
double random_tau(const LambdaConvexFunction& f, Rng& rng);

struct VerifyOptions {
  std::string scope = "all";  // all | convex_core | action_path | path_opt | gamma_lab
  std::uint64_t seed = 0;
  int samples = 200;          // per kind and invariant
  // Every function reports λ + 1 instead of λ, which breaks the resolvent
  // slope chain and must be detected.
  bool plant_lambda_fault = false;
};

struct InvariantResult {
  std::string module;
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst_margin = 0.0;  // max of measured - allowed over the trials
  Json offending = Json::array();  // first few failing inputs, replayable
};

struct VerifyReport {
  std::string scope;
  std::uint64_t seed = 0;
  std::vector<InvariantResult> results;
  int total_failures() const;
  bool passed() const { return total_failures() == 0; }
  const InvariantResult* find(const std::string& name) const;
};

std::vector<std::string> verify_scopes();
VerifyReport verify_suite(const VerifyOptions& options);
Json to_json(const VerifyReport& report);

}  // namespace gammalab
