#pragma once

// Numerical Γ-convergence experiments along Mosco families: pointwise
// resolvent convergence, convergence of minimal values, recovery-sequence
// bounds and a slope lower-semicontinuity surrogate.

#include <string>
#include <vector>

#include "gammalab/families.h"
#include "gammalab/path_opt.h"

namespace gammalab {

// Passes when the last `window` successive steps are nonincreasing up to a
// relative slack (plus an absolute floor for sequences at rounding level).
bool eventually_decreasing(const std::vector<double>& seq, int window = 3, double slack = 0.05,
                           double floor = 1e-12);

struct ResolventRow {
  std::size_t member = 0;
  double parameter = 0.0;
  std::size_t probe = 0;
  Vector point;
  double gap = 0.0;  // |J_{f_h,τ}(p) - J_{f,τ}(p)|
};

struct ResolventTable {
  double tau = 0.0;
  std::vector<ResolventRow> rows;
  std::vector<double> final_gaps;     // per probe, last member
  std::vector<bool> probe_decreasing;  // eventual-monotonicity audit per probe
  bool all_decreasing = true;
};

ResolventTable resolvent_convergence_table(const MoscoFamily& family, double tau, const std::vector<Vector>& probes);

struct ValueRow {
  std::size_t member = 0;
  double parameter = 0.0;
  double value = 0.0;
  double gap = 0.0;           // |value - limit value|
  double relative_gap = 0.0;  // gap / max(1, |limit value|)
  int iterations = 0;
  bool converged = false;
  bool flagged = false;
};

struct ValueReport {
  double delta = 0.0;
  std::vector<ValueRow> rows;
  double limit_value = 0.0;
  bool limit_converged = false;
  bool gaps_decreasing = true;
  double final_relative_gap = 0.0;
  Path limit_path;
};

ValueReport gamma_value_experiment(const MoscoFamily& family, double delta, const MinimizeConfig& cfg);

struct LimsupRow {
  std::size_t member = 0;
  double parameter = 0.0;
  double tau = 0.0;
  double action_extended = 0.0;  // recovery curve on [-τ, 1 + τ]
  double action_rescaled = 0.0;  // the same curve on [0, 1]
  double bound = 0.0;            // (1 + τλ)^-2 (A(γ) + 472 τ S^2)
  double gap = 0.0;              // action_extended - A(γ)
  double junction_gap = 0.0;
  bool satisfied = false;
};

struct LimsupReport {
  double gamma_action = 0.0;  // discrete_action of γ under the limit
  double slope_bound_S = 0.0;
  double lambda = 0.0;
  double tolerance = 0.0;
  std::vector<LimsupRow> rows;
  bool all_satisfied = true;
};

// γ is parametrized on [0, 1] with the limit endpoints. The bound is checked
// on the extended curve with tolerance 1e-9 (1 + bound).
LimsupReport gamma_limsup_experiment(const MoscoFamily& family, const Path& gamma, const std::vector<double>& taus);

struct LiminfRow {
  std::size_t probe = 0;
  Vector point;
  double limit_slope = 0.0;
  std::vector<double> member_slopes;  // slope(f_h, x_h), x_h = p + c scale_h (1, ..., 1)
  double tail_liminf = 0.0;           // min over the last `window` members
  bool satisfied = false;
};

struct LiminfReport {
  double drift = 0.0;
  std::vector<LiminfRow> rows;
  bool all_satisfied = true;
};

// liminf_h slope(f_h, x_h) >= slope(f, x) - 1e-6. For an infinite limit
// slope the tail must be strictly increasing instead.
LiminfReport slope_liminf_check(const MoscoFamily& family, const std::vector<Vector>& probes, double drift = 0.0,
                                int window = 1);

std::string to_csv(const ResolventTable& t);
std::string to_csv(const ValueReport& r);
std::string to_csv(const LimsupReport& r);
std::string to_csv(const LiminfReport& r);
Json to_json(const ResolventTable& t);
Json to_json(const ValueReport& r);
Json to_json(const LimsupReport& r);
Json to_json(const LiminfReport& r);

}  // namespace gammalab
