#include "gammalab/convex.h"

#include <algorithm>
#include <cmath>
#include <span>

#include "gammalab/kernels.h"
#include "gammalab/min_norm_point.h"

namespace gammalab {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::span<const double> span_of(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<const double> span_of(const Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
std::span<double> mutable_span(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Vector scores(const Matrix& vectors, const Vector& x) {
  Vector out(vectors.rows());
  kernels::active().scores(span_of(vectors), span_of(x), mutable_span(out));
  return out;
}

// Value, softmax weights and gradient of the averaged log-sum-exp.
struct SoftMax {
  double value;
  Vector weights;
  Vector gradient;
};

SoftMax soft_max(const LogSumExpParams& p, const Vector& x) {
  const auto& k = kernels::active();
  const Vector s = scores(p.vectors, x);
  const double top = k.max_value(span_of(s));
  Vector w(s.size());
  const double sum = k.exp_shifted(span_of(s), top, 1.0 / p.epsilon, mutable_span(w));
  w /= sum;
  Vector g(p.vectors.cols());
  k.weighted_columns(span_of(p.vectors), span_of(w), mutable_span(g));
  const double value = top + p.epsilon * (std::log(sum) - std::log(static_cast<double>(s.size())));
  return {value, std::move(w), std::move(g)};
}

Matrix soft_max_hessian(const LogSumExpParams& p, const SoftMax& sm) {
  const Matrix weighted = p.vectors.array().colwise() * sm.weights.array();
  Matrix h = p.vectors.transpose() * weighted - sm.gradient * sm.gradient.transpose();
  return h / p.epsilon;
}

void check_point(const LambdaConvexFunction& f, const Vector& x, std::string_view what) {
  require_dim(x, f.dim(), what);
  require_finite(x, what);
}

void check_vectors(const Matrix& vectors, std::string_view what) {
  if (vectors.rows() == 0 || vectors.cols() == 0) {
    throw InvalidArgument(std::string(what) + ": vector list must be nonempty");
  }
  if (!vectors.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite vector entry");
}

Vector prox_log_sum_exp(const LogSumExpParams& p, double tau, const Vector& x,
                        const ProxOptions& options, double& residual_out) {
  const Eigen::Index d = x.size();
  Vector y = x;
  SoftMax sm = soft_max(p, y);
  Vector residual = y + tau * sm.gradient - x;
  double r = residual.norm();
  const double target = 1e-14 * (1.0 + x.norm());
  for (int iter = 0; iter < options.newton_max_iters && r > target; ++iter) {
    const Matrix jac = Matrix::Identity(d, d) + tau * soft_max_hessian(p, sm);
    const Vector step = -jac.ldlt().solve(residual);
    double alpha = 1.0;
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      const Vector trial = y + alpha * step;
      SoftMax trial_sm = soft_max(p, trial);
      Vector trial_res = trial + tau * trial_sm.gradient - x;
      const double tr = trial_res.norm();
      if (tr * tr <= (1.0 - 2e-4 * alpha) * r * r) {
        y = trial;
        sm = std::move(trial_sm);
        residual = std::move(trial_res);
        r = tr;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  residual_out = r;
  if (!(r <= options.newton_tolerance)) {
    throw ConvergenceFailure("log-sum-exp prox: Newton residual " + std::to_string(r) +
                             " above tolerance after iteration cap");
  }
  return y;
}

}  // namespace

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::kQuadratic: return "Quadratic";
    case Kind::kMaxLinear: return "MaxLinear";
    case Kind::kLogSumExp: return "LogSumExp";
    case Kind::kIndicator: return "Indicator";
    case Kind::kDistancePenalty: return "DistancePenalty";
  }
  return "?";
}

Kind parse_kind(std::string_view name) {
  for (Kind k : {Kind::kQuadratic, Kind::kMaxLinear, Kind::kLogSumExp, Kind::kIndicator,
                 Kind::kDistancePenalty}) {
    if (kind_name(k) == name) return k;
  }
  throw InvalidArgument("unknown function kind '" + std::string(name) + "'");
}

LambdaConvexFunction LambdaConvexFunction::quadratic(Matrix Q, Vector b, double c) {
  if (Q.rows() == 0 || Q.rows() != Q.cols()) throw InvalidArgument("quadratic: Q must be square");
  require_dim(b, Q.rows(), "quadratic b");
  if (!Q.allFinite() || !b.allFinite() || !std::isfinite(c)) {
    throw InvalidArgument("quadratic: non-finite parameter");
  }
  const double asym = (Q - Q.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * (1.0 + Q.cwiseAbs().maxCoeff())) throw InvalidArgument("quadratic: Q not symmetric");
  Q = 0.5 * (Q + Q.transpose());
  const double lambda = Eigen::SelfAdjointEigenSolver<Matrix>(Q, Eigen::EigenvaluesOnly).eigenvalues()(0);
  const Eigen::Index dim = Q.rows();
  return {Kind::kQuadratic, lambda, dim, QuadraticParams{std::move(Q), std::move(b), c}};
}

LambdaConvexFunction LambdaConvexFunction::max_linear(Matrix vectors) {
  check_vectors(vectors, "max_linear");
  const Eigen::Index dim = vectors.cols();
  return {Kind::kMaxLinear, 0.0, dim, MaxLinearParams{std::move(vectors)}};
}

LambdaConvexFunction LambdaConvexFunction::log_sum_exp(Matrix vectors, double epsilon) {
  check_vectors(vectors, "log_sum_exp");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("log_sum_exp: epsilon must be positive");
  const Eigen::Index dim = vectors.cols();
  return {Kind::kLogSumExp, 0.0, dim, LogSumExpParams{std::move(vectors), epsilon}};
}

LambdaConvexFunction LambdaConvexFunction::indicator(ConvexSet set) {
  validate_set(set);
  const Eigen::Index dim = set_dim(set);
  return {Kind::kIndicator, 0.0, dim, IndicatorParams{std::move(set)}};
}

LambdaConvexFunction LambdaConvexFunction::distance_penalty(ConvexSet set, double weight) {
  validate_set(set);
  if (!(weight > 0.0) || !std::isfinite(weight)) throw InvalidArgument("distance_penalty: weight must be positive");
  const Eigen::Index dim = set_dim(set);
  return {Kind::kDistancePenalty, 0.0, dim, DistancePenaltyParams{std::move(set), weight}};
}

LambdaConvexFunction LambdaConvexFunction::zero(Eigen::Index dim) {
  return quadratic(Matrix::Zero(dim, dim), Vector::Zero(dim), 0.0);
}

LambdaConvexFunction LambdaConvexFunction::with_lambda(double lambda) const {
  LambdaConvexFunction copy = *this;
  copy.lambda_ = lambda;
  return copy;
}

bool is_admissible(const LambdaConvexFunction& f, double tau) {
  return std::isfinite(tau) && tau > 0.0 && 1.0 + tau * f.lambda() > 0.0;
}

double evaluate(const LambdaConvexFunction& f, const Vector& x) {
  check_point(f, x, "evaluate");
  return std::visit(
      Overloaded{[&](const QuadraticParams& p) { return 0.5 * x.dot(p.Q * x) + p.b.dot(x) + p.c; },
                 [&](const MaxLinearParams& p) {
                   const Vector s = scores(p.vectors, x);
                   return kernels::active().max_value(span_of(s));
                 },
                 [&](const LogSumExpParams& p) { return soft_max(p, x).value; },
                 [&](const IndicatorParams& p) { return contains(p.set, x) ? 0.0 : kInfinity; },
                 [&](const DistancePenaltyParams& p) {
                   const double dist = distance(p.set, x);
                   return p.weight * dist * dist;
                 }},
      f.params());
}

ProxResult prox(const LambdaConvexFunction& f, double tau, const Vector& x, const ProxOptions& options) {
  check_point(f, x, "prox");
  if (!is_admissible(f, tau)) {
    throw InadmissibleStep("prox: tau = " + std::to_string(tau) + " violates 1 + tau*lambda > 0 (lambda = " +
                           std::to_string(f.lambda()) + ")");
  }
  ProxResult out;
  out.tau = tau;
  out.resolvent_point = std::visit(
      Overloaded{[&](const QuadraticParams& p) -> Vector {
                   const Eigen::Index d = x.size();
                   const Matrix system = Matrix::Identity(d, d) + tau * p.Q;
                   const Vector rhs = x - tau * p.b;
                   Eigen::LLT<Matrix> llt(system);
                   if (llt.info() != Eigen::Success) throw InadmissibleStep("prox: I + tau Q not positive definite");
                   Vector y = llt.solve(rhs);
                   out.solver_residual = (system * y - rhs).norm();
                   return y;
                 },
                 [&](const MaxLinearParams& p) -> Vector {
                   // Moreau decomposition: J_τ(x) = x - τ Π_K(x/τ), K = conv{a_i}.
                   const MinNormResult proj = project_onto_hull(p.vectors.transpose(), x / tau);
                   out.solver_residual = tau * std::sqrt(proj.gap);
                   return x - tau * proj.point;
                 },
                 [&](const LogSumExpParams& p) -> Vector {
                   return prox_log_sum_exp(p, tau, x, options, out.solver_residual);
                 },
                 [&](const IndicatorParams& p) -> Vector { return project(p.set, x); },
                 [&](const DistancePenaltyParams& p) -> Vector {
                   const double mix = 2.0 * p.weight * tau;
                   return (x + mix * project(p.set, x)) / (1.0 + mix);
                 }},
      f.params());
  const Vector diff = x - out.resolvent_point;
  out.moreau_gradient = diff / tau;
  out.envelope_value = evaluate(f, out.resolvent_point) + diff.squaredNorm() / (2.0 * tau);
  return out;
}

Vector moreau_gradient(const LambdaConvexFunction& f, double tau, const Vector& x) {
  return prox(f, tau, x).moreau_gradient;
}

std::vector<Eigen::Index> active_set(const LambdaConvexFunction& f, const Vector& x,
                                     const SlopeOptions& options) {
  check_point(f, x, "active_set");
  const auto& p = f.as<MaxLinearParams>();
  const Vector s = scores(p.vectors, x);
  const double top = kernels::active().max_value(span_of(s));
  const double eta = options.active_relative_tol * (1.0 + std::abs(top));
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) >= top - eta) active.push_back(i);
  }
  return active;
}

Vector smooth_gradient(const LambdaConvexFunction& f, const Vector& x) {
  check_point(f, x, "smooth_gradient");
  return std::visit(Overloaded{[&](const QuadraticParams& p) -> Vector { return p.Q * x + p.b; },
                               [&](const LogSumExpParams& p) -> Vector { return soft_max(p, x).gradient; },
                               [&](const DistancePenaltyParams& p) -> Vector {
                                 return 2.0 * p.weight * (x - project(p.set, x));
                               },
                               [&](const auto&) -> Vector {
                                 throw InvalidArgument("smooth_gradient: kind " + std::string(kind_name(f.kind())) +
                                                       " is not differentiable");
                               }},
                    f.params());
}

Vector min_norm_subgradient(const LambdaConvexFunction& f, const Vector& x, const SlopeOptions& options) {
  check_point(f, x, "min_norm_subgradient");
  switch (f.kind()) {
    case Kind::kMaxLinear: {
      const auto& p = f.as<MaxLinearParams>();
      const std::vector<Eigen::Index> active = active_set(f, x, options);
      Matrix hull(f.dim(), static_cast<Eigen::Index>(active.size()));
      for (std::size_t k = 0; k < active.size(); ++k) hull.col(static_cast<Eigen::Index>(k)) = p.vectors.row(active[k]).transpose();
      return min_norm_point(hull).point;
    }
    case Kind::kIndicator:
      if (!contains(f.as<IndicatorParams>().set, x)) throw DomainError("min_norm_subgradient: point outside the set");
      return Vector::Zero(f.dim());
    default:
      return smooth_gradient(f, x);
  }
}

double slope(const LambdaConvexFunction& f, const Vector& x, const SlopeOptions& options) {
  check_point(f, x, "slope");
  switch (f.kind()) {
    case Kind::kIndicator:
      return contains(f.as<IndicatorParams>().set, x) ? 0.0 : kInfinity;
    case Kind::kDistancePenalty: {
      const auto& p = f.as<DistancePenaltyParams>();
      return 2.0 * p.weight * distance(p.set, x);
    }
    default:
      return min_norm_subgradient(f, x, options).norm();
  }
}

ResolventSlope slope_from_resolvents(const LambdaConvexFunction& f, const Vector& x, double tau0, int levels) {
  check_point(f, x, "slope_from_resolvents");
  if (levels < 2) throw InvalidArgument("slope_from_resolvents: need at least two levels");
  if (f.lambda() < 0.0) tau0 = std::min(tau0, 0.5 / -f.lambda());
  ResolventSlope out;
  double tau = tau0;
  for (int k = 0; k < levels; ++k, tau *= 0.5) {
    const double value = prox(f, tau, x).moreau_gradient.norm();
    const double audited = (1.0 + std::min(f.lambda(), 0.0) * tau) * value;
    if (!out.values.empty()) {
      const double tau_prev = out.taus.back();
      const double prev = (1.0 + std::min(f.lambda(), 0.0) * tau_prev) * out.values.back();
      if (audited < prev - 1e-8 * (1.0 + prev)) out.monotone = false;
    }
    out.taus.push_back(tau);
    out.values.push_back(value);
  }
  out.last = out.values.back();
  // First-order Richardson step: the envelope slope converges at rate O(τ).
  out.extrapolated = 2.0 * out.last - out.values[out.values.size() - 2];
  return out;
}

double sampled_slope_lower_bound(const LambdaConvexFunction& f, const Vector& x, const std::vector<Vector>& samples) {
  check_point(f, x, "sampled_slope_lower_bound");
  if (samples.empty()) throw InvalidArgument("sampled_slope_lower_bound: empty sample set");
  const double fx = evaluate(f, x);
  double best = 0.0;
  for (const Vector& y : samples) {
    require_dim(y, f.dim(), "sampled_slope_lower_bound sample");
    const double dist = (x - y).norm();
    if (dist == 0.0) throw InvalidArgument("sampled_slope_lower_bound: samples must exclude x");
    const double fy = evaluate(f, y);
    if (std::isinf(fy)) continue;  // [-∞]^+ = 0, also covers fx = fy = +∞
    if (std::isinf(fx)) return kInfinity;
    const double quotient = std::max(0.0, fx - fy + 0.5 * f.lambda() * dist * dist) / dist;
    best = std::max(best, quotient);
  }
  return best;
}

}  // namespace gammalab
