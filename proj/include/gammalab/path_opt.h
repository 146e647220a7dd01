#pragma once

// Approximate minimizers of the endpoint-constrained action
//   Γ_δ(x0, xd) = inf { I_f(γ) : γ(0) = x0, γ(δ) = xd }
// and independent references for it.

#include <string_view>
#include <vector>

#include "gammalab/action.h"

namespace gammalab {

struct ArmijoRule {
  double initial_step = 1.0;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 60;
};

struct MinimizeConfig {
  int intervals = 256;             // N
  std::vector<double> tau_schedule;  // strictly decreasing, absolute values
  int max_iters = 4000;            // per stage
  double grad_tol = 1e-6;
  ArmijoRule step;
  // Relative central-difference step for the gradient of |∇f_τ|^2:
  // h = fd_relative_step * (1 + |y|).
  double fd_relative_step = 1e-5;

  // {0.5, 0.1, 0.02, 0.004} δ.
  static MinimizeConfig defaults(double delta);
  void validate(const LambdaConvexFunction& f) const;
};

Json to_json(const MinimizeConfig& cfg);
MinimizeConfig minimize_config_from_json(const Json& j, double delta);

struct StageTrace {
  double tau = 0.0;
  int iterations = 0;
  bool converged = false;
  double final_gradient_norm = 0.0;
  std::vector<double> objective;  // accepted iterates
};

struct MinimizeResult {
  Path path;
  double value_smoothed = 0.0;  // smoothed objective at the final τ
  double value_true = 0.0;      // discrete_action under f, midpoint rule
  int iterations = 0;
  bool converged = false;
  // True when the reported path is the resolvent image of the optimized
  // interior nodes, which had the smaller true action.
  bool resolvent_polished = false;
  std::vector<StageTrace> stages;
};

Json summary_json(const MinimizeResult& r, const MinimizeConfig& cfg);

// Preconditioned gradient descent with Armijo backtracking on
//   E_τ(x) = Σ |Δx_i|^2 / Δt + Σ Δt |∇f_τ|^2(midpoint_i)
// over interior nodes, for each τ of the schedule with warm starts. Endpoints
// are pinned bit-exactly. Non-convergence is reported, never thrown.
MinimizeResult minimize_action(const LambdaConvexFunction& f, const Vector& x0, const Vector& xd, double delta,
                               const MinimizeConfig& cfg);

// Smoothed objective and its gradient with respect to all nodes (endpoint
// rows are left zero). Exposed for gradient checks.
double smoothed_objective(const LambdaConvexFunction& f, double tau, const Path& path);
Matrix smoothed_gradient(const LambdaConvexFunction& f, double tau, const Path& path, double fd_relative_step);
Matrix kinetic_gradient(const Path& path);

struct GridOracleConfig {
  Vector lo;       // box corner
  Vector hi;
  std::vector<int> points;  // grid points per coordinate (>= 2)
  int time_steps = 32;
  int neighborhood = 2;     // max cells per coordinate per step
  double snap_tolerance = 1e-6;  // in cells
  long long node_budget = 50'000'000;  // layer nodes times branching
};

struct GridOracleResult {
  double value = kInfinity;
  // Velocity quantization d δ (h/Δt)^2 / 4 plus one step of slope quadrature.
  double error_bound = 0.0;
  Path path;
};

// Shortest path through the time-expanded grid graph, edge cost
// |Δx|^2/Δt + Δt |∇f|^2(midpoint). d <= 2.
GridOracleResult grid_oracle(const LambdaConvexFunction& f, const Vector& x0, const Vector& xd, double delta,
                             const GridOracleConfig& cfg);

enum class ClosedFormCase { kFree, kQuadratic1d };

ClosedFormCase parse_closed_form_case(std::string_view name);

// kFree: |xd - x0|^2 / δ for f ≡ 0. kQuadratic1d: f = ½x^2 on R,
// ((a^2 + b^2) cosh δ - 2ab) / sinh δ with a = x0, b = xd.
double closed_form_value(ClosedFormCase which, const Vector& x0, const Vector& xd, double delta);

}  // namespace gammalab
