#pragma once

// λ-convex functions on R^d and their proximal calculus: resolvent J_τ,
// Moreau envelope f_τ, envelope gradient (x - J_τ(x)) / τ, metric slope and
// minimal-norm subgradient.

#include <string_view>
#include <variant>
#include <vector>

#include "gammalab/convex_set.h"
#include "gammalab/vector.h"

namespace gammalab {

enum class Kind { kQuadratic, kMaxLinear, kLogSumExp, kIndicator, kDistancePenalty };

std::string_view kind_name(Kind kind);
Kind parse_kind(std::string_view name);

// f(x) = ½<Qx, x> + <b, x> + c
struct QuadraticParams {
  Matrix Q;
  Vector b;
  double c = 0.0;
};

// f(x) = max_i <a_i, x>. `vectors` is m-by-d, row i holding a_i.
struct MaxLinearParams {
  Matrix vectors;
};

// f(x) = ε log((1/m) Σ_i exp(<a_i, x> / ε))
struct LogSumExpParams {
  Matrix vectors;
  double epsilon = 1.0;
};

// 0 on the set, +∞ outside.
struct IndicatorParams {
  ConvexSet set;
};

// f(x) = weight * dist(x, set)^2
struct DistancePenaltyParams {
  ConvexSet set;
  double weight = 1.0;
};

using FunctionParams =
    std::variant<QuadraticParams, MaxLinearParams, LogSumExpParams, IndicatorParams, DistancePenaltyParams>;

// Immutable descriptor of a proper, lower semicontinuous, λ-convex function.
// λ is computed from the spectrum of Q for quadratics and is 0 for the other
// kinds; with_lambda() overrides the stored value (used for fault planting).
class LambdaConvexFunction {
 public:
  static LambdaConvexFunction quadratic(Matrix Q, Vector b, double c = 0.0);
  static LambdaConvexFunction max_linear(Matrix vectors);
  static LambdaConvexFunction log_sum_exp(Matrix vectors, double epsilon);
  static LambdaConvexFunction indicator(ConvexSet set);
  static LambdaConvexFunction distance_penalty(ConvexSet set, double weight);
  // f ≡ 0 on R^d.
  static LambdaConvexFunction zero(Eigen::Index dim);

  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  Eigen::Index dim() const { return dim_; }
  const FunctionParams& params() const { return params_; }

  template <class P>
  const P& as() const {
    return std::get<P>(params_);
  }

  LambdaConvexFunction with_lambda(double lambda) const;

 private:
  LambdaConvexFunction(Kind kind, double lambda, Eigen::Index dim, FunctionParams params)
      : kind_(kind), lambda_(lambda), dim_(dim), params_(std::move(params)) {}

  Kind kind_;
  double lambda_;
  Eigen::Index dim_;
  FunctionParams params_;
};

struct ProxResult {
  Vector resolvent_point;
  double envelope_value = 0.0;
  Vector moreau_gradient;
  double tau = 0.0;
  double solver_residual = 0.0;
};

struct ProxOptions {
  int newton_max_iters = 100;
  // Failure threshold for |y + τ∇f(y) - x|.
  double newton_tolerance = 1e-10;
};

// Both conditions 1 + τλ > 0 and τ > 0.
bool is_admissible(const LambdaConvexFunction& f, double tau);

double evaluate(const LambdaConvexFunction& f, const Vector& x);

ProxResult prox(const LambdaConvexFunction& f, double tau, const Vector& x,
                const ProxOptions& options = {});

Vector moreau_gradient(const LambdaConvexFunction& f, double tau, const Vector& x);

// Active-set tolerance η(f(x)) = 1e-9 (1 + |f(x)|) for MaxLinear kinks.
struct SlopeOptions {
  double active_relative_tol = 1e-9;
};

// |∇f|(x); +∞ outside D(∂f).
double slope(const LambdaConvexFunction& f, const Vector& x, const SlopeOptions& options = {});

// ∇f(x), the element of minimal norm of ∂f(x). Throws DomainError off D(∂f).
Vector min_norm_subgradient(const LambdaConvexFunction& f, const Vector& x,
                            const SlopeOptions& options = {});

// Indices i with <a_i, x> >= f(x) - η for MaxLinear.
std::vector<Eigen::Index> active_set(const LambdaConvexFunction& f, const Vector& x,
                                     const SlopeOptions& options = {});

// Kind-independent slope estimate from the envelope gradients over the
// schedule τ_k = τ_0 2^-k, k = 0..12. For λ >= 0 the sequence is
// nondecreasing in k (|∇f_τ|(x) increases to |∇f|(x) as τ ↓ 0). For λ < 0
// the audit runs on (1 + λτ)|∇f_τ|(x) instead, since the raw values can
// decrease (½λx² + bx has |∇f_τ| = |λx + b| / (1 + λτ)).
struct ResolventSlope {
  std::vector<double> taus;
  std::vector<double> values;
  double last = 0.0;
  double extrapolated = 0.0;
  bool monotone = true;
};

ResolventSlope slope_from_resolvents(const LambdaConvexFunction& f, const Vector& x,
                                     double tau0 = 1.0, int levels = 13);

// max over samples y of [f(x) - f(y) + (λ/2)|x - y|^2]^+ / |x - y|.
double sampled_slope_lower_bound(const LambdaConvexFunction& f, const Vector& x,
                                 const std::vector<Vector>& samples);

// Analytic gradient for the smooth kinds (Quadratic, LogSumExp, DistancePenalty).
Vector smooth_gradient(const LambdaConvexFunction& f, const Vector& x);

}  // namespace gammalab
