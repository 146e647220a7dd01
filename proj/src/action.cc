#include "gammalab/action.h"

#include <algorithm>
#include <cmath>

#include "gammalab/kernels.h"

namespace gammalab {
namespace {

constexpr double kJunctionTol = 1e-8;

double kinetic_energy(const Path& path) {
  const Matrix& nodes = path.nodes();
  return kernels::active().kinetic_energy({nodes.data(), static_cast<std::size_t>(nodes.size())},
                                          static_cast<std::size_t>(path.dim()),
                                          {path.times().data(), path.times().size()});
}

void require_interpolation_step(const LambdaConvexFunction& f, double tau, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("interpolation: delta must be positive");
  if (!is_admissible(f, tau) || 1.0 + tau * f.lambda() < 0.5) {
    throw InadmissibleStep("interpolation: need (1 + tau*lambda)^-1 <= 2, tau = " + std::to_string(tau));
  }
}

Vector subgradient_in_domain(const LambdaConvexFunction& f, const Vector& x, const char* which) {
  try {
    return min_norm_subgradient(f, x);
  } catch (const DomainError&) {
    throw DomainError(std::string("interpolation: endpoint ") + which + " outside D(∂f)");
  }
}

}  // namespace

std::string_view quadrature_name(Quadrature rule) {
  return rule == Quadrature::kMidpoint ? "midpoint" : "node-trapezoid";
}

Quadrature parse_quadrature(std::string_view name) {
  if (name == "midpoint") return Quadrature::kMidpoint;
  if (name == "node-trapezoid" || name == "trapezoid") return Quadrature::kNodeTrapezoid;
  throw InvalidArgument("unknown quadrature rule '" + std::string(name) + "'");
}

Json to_json(const ActionBreakdown& a) {
  return Json{{"kinetic", number_to_json(a.kinetic)},
              {"slope_term", number_to_json(a.slope_term)},
              {"total", number_to_json(a.total)},
              {"rule", std::string(quadrature_name(a.rule))},
              {"N", a.intervals}};
}

ActionBreakdown discrete_action(const LambdaConvexFunction& f, const Path& path, Quadrature rule) {
  require_dim(path.front(), f.dim(), "discrete_action");
  ActionBreakdown out;
  out.rule = rule;
  out.intervals = path.intervals();
  out.kinetic = kinetic_energy(path);
  const auto& t = path.times();
  double slope_term = 0.0;
  if (rule == Quadrature::kMidpoint) {
    for (std::size_t i = 0; i < path.intervals(); ++i) {
      const double s = slope(f, path.midpoint(i));
      if (std::isinf(s)) {
        slope_term = kInfinity;
        break;
      }
      slope_term += (t[i + 1] - t[i]) * s * s;
    }
  } else {
    for (std::size_t i = 0; i < path.size(); ++i) {
      const double s = slope(f, path.node(i));
      if (std::isinf(s)) {
        slope_term = kInfinity;
        break;
      }
      const double left = i > 0 ? t[i] - t[i - 1] : 0.0;
      const double right = i + 1 < path.size() ? t[i + 1] - t[i] : 0.0;
      slope_term += 0.5 * (left + right) * s * s;
    }
  }
  out.slope_term = slope_term;
  out.total = out.kinetic + slope_term;
  return out;
}

double alt_action(const LambdaConvexFunction& f, const Path& path) {
  require_dim(path.front(), f.dim(), "alt_action");
  const auto& t = path.times();
  double total = 0.0;
  for (std::size_t i = 0; i < path.intervals(); ++i) {
    const double dt = t[i + 1] - t[i];
    const Vector velocity = (path.node(i + 1) - path.node(i)) / dt;
    const Vector g = min_norm_subgradient(f, path.midpoint(i));
    total += dt * (velocity - g).squaredNorm();
  }
  return total;
}

UpperGradientCheck upper_gradient_residual(const LambdaConvexFunction& f, const Path& path) {
  require_dim(path.front(), f.dim(), "upper_gradient_residual");
  const double f0 = evaluate(f, path.front());
  const double f1 = evaluate(f, path.back());
  if (!std::isfinite(f0) || !std::isfinite(f1)) throw DomainError("upper_gradient_residual: endpoint outside D(f)");
  UpperGradientCheck out;
  double s_left = slope(f, path.node(0));
  for (std::size_t i = 0; i < path.intervals(); ++i) {
    const double length = (path.node(i + 1) - path.node(i)).norm();
    const double s_right = slope(f, path.node(i + 1));
    if (length == 0.0) {
      s_left = s_right;
      continue;
    }
    const double s_mid = slope(f, path.midpoint(i));
    if (std::isinf(s_mid)) throw DomainError("upper_gradient_residual: infinite integrand");
    out.integral += length * s_mid;
    if (std::isfinite(s_left) && std::isfinite(s_right)) {
      const double hi = std::max({s_left, s_mid, s_right});
      const double lo = std::min({s_left, s_mid, s_right});
      out.quadrature_bound += length * (hi - lo);
    }
    s_left = s_right;
  }
  out.variation = std::abs(f1 - f0);
  out.residual = out.integral - out.variation;
  out.quadrature_bound += 1e-12 * (1.0 + out.integral + out.variation);
  return out;
}

DuboisReymondCheck dubois_reymond_residual(const LambdaConvexFunction& f, const Path& path) {
  require_dim(path.front(), f.dim(), "dubois_reymond_residual");
  const auto& t = path.times();
  std::vector<double> energy(path.intervals());
  for (std::size_t i = 0; i < path.intervals(); ++i) {
    const double s = slope(f, path.midpoint(i));
    if (std::isinf(s)) throw DomainError("dubois_reymond_residual: infinite slope");
    const double speed = (path.node(i + 1) - path.node(i)).norm() / (t[i + 1] - t[i]);
    energy[i] = speed * speed - s * s;
  }
  DuboisReymondCheck out;
  for (double e : energy) out.mean += e;
  out.mean /= static_cast<double>(energy.size());
  for (double e : energy) out.max_deviation = std::max(out.max_deviation, std::abs(e - out.mean));
  return out;
}

Path interpolation_path(const LambdaConvexFunction& f, double tau, double delta, const Vector& x0, const Vector& xd,
                        int samples, double t_start) {
  require_dim(x0, f.dim(), "interpolation_path x0");
  require_dim(xd, f.dim(), "interpolation_path xd");
  require_interpolation_step(f, tau, delta);
  if (samples < 1) throw InvalidArgument("interpolation_path: need at least one interval");
  // Tilted endpoints x + τ∇f(x) are mapped back onto x by J_τ.
  const Vector lifted0 = x0 + tau * subgradient_in_domain(f, x0, "x0");
  const Vector liftedd = xd + tau * subgradient_in_domain(f, xd, "xd");
  std::vector<double> times(static_cast<std::size_t>(samples) + 1);
  Matrix nodes(f.dim(), samples + 1);
  for (int k = 0; k <= samples; ++k) {
    const double s = static_cast<double>(k) / samples;
    times[static_cast<std::size_t>(k)] = k == samples ? t_start + delta : t_start + s * delta;
    const Vector lifted = k == samples ? liftedd : Vector((1.0 - s) * lifted0 + s * liftedd);
    nodes.col(k) = prox(f, tau, lifted).resolvent_point;
  }
  return Path(std::move(times), std::move(nodes));
}

double interpolation_bound(const LambdaConvexFunction& f, double tau, double delta, const Vector& x0,
                           const Vector& xd) {
  require_dim(x0, f.dim(), "interpolation_bound x0");
  require_dim(xd, f.dim(), "interpolation_bound xd");
  require_interpolation_step(f, tau, delta);
  const Vector g0 = subgradient_in_domain(f, x0, "x0");
  const Vector gd = subgradient_in_domain(f, xd, "xd");
  const double min_slope_sq = std::min(g0.squaredNorm(), gd.squaredNorm());
  return 2.0 * delta * min_slope_sq + (40.0 / delta + 12.0 * delta / (tau * tau)) * (xd - x0).squaredNorm() +
         (12.0 * delta + 40.0 * tau * tau / delta) * (gd - g0).squaredNorm();
}

double tau_interpolation_bound(const LambdaConvexFunction& f, double tau, const Vector& x0, const Vector& xd) {
  require_dim(x0, f.dim(), "tau_interpolation_bound x0");
  require_dim(xd, f.dim(), "tau_interpolation_bound xd");
  require_interpolation_step(f, tau, tau);
  const double s0 = subgradient_in_domain(f, x0, "x0").squaredNorm();
  const double sd = subgradient_in_domain(f, xd, "xd").squaredNorm();
  return 52.0 / tau * (xd - x0).squaredNorm() + 210.0 * tau * std::max(s0, sd);
}

int default_patch_samples(double tau, std::size_t intervals) {
  return std::max(16, static_cast<int>(std::ceil(tau * static_cast<double>(intervals))));
}

RecoveryConstruction recovery_construction(const LambdaConvexFunction& fh, double tau, const Path& gamma,
                                           const Vector& xh0, const Vector& xh1, int patch_samples) {
  require_dim(gamma.front(), fh.dim(), "recovery_path gamma");
  require_dim(xh0, fh.dim(), "recovery_path xh0");
  require_dim(xh1, fh.dim(), "recovery_path xh1");
  if (std::abs(gamma.start_time()) > 1e-12 || std::abs(gamma.end_time() - 1.0) > 1e-12) {
    throw InvalidArgument("recovery_path: gamma must be parametrized on [0, 1]");
  }
  require_interpolation_step(fh, tau, tau);

  Matrix core(fh.dim(), static_cast<Eigen::Index>(gamma.size()));
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    core.col(static_cast<Eigen::Index>(i)) = prox(fh, tau, gamma.node(i)).resolvent_point;
  }
  const Vector core_start = core.col(0);
  const Vector core_end = core.col(core.cols() - 1);
  const Path front = interpolation_path(fh, tau, tau, xh0, core_start, patch_samples, -tau);
  const Path back = interpolation_path(fh, tau, tau, core_end, xh1, patch_samples, 1.0);

  const double junction_gap = std::max((front.back() - core_start).norm(), (back.front() - core_end).norm());
  const double endpoint_gap = std::max((front.front() - xh0).norm(), (back.back() - xh1).norm());
  if (junction_gap > kJunctionTol || endpoint_gap > kJunctionTol) {
    throw Error("recovery_path: junction or endpoint mismatch " + format_double(std::max(junction_gap, endpoint_gap)));
  }

  // Junction nodes come from the core; patch copies are dropped.
  const std::size_t total = (front.size() - 1) + gamma.size() + (back.size() - 1);
  std::vector<double> times;
  times.reserve(total);
  Matrix nodes(fh.dim(), static_cast<Eigen::Index>(total));
  Eigen::Index col = 0;
  for (std::size_t i = 0; i + 1 < front.size(); ++i) {
    times.push_back(front.times()[i]);
    nodes.col(col++) = front.node(i);
  }
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    times.push_back(gamma.times()[i]);
    nodes.col(col++) = core.col(static_cast<Eigen::Index>(i));
  }
  for (std::size_t i = 1; i < back.size(); ++i) {
    times.push_back(back.times()[i]);
    nodes.col(col++) = back.node(i);
  }
  nodes.col(0) = xh0;
  nodes.col(col - 1) = xh1;
  Path extended(std::move(times), std::move(nodes));
  Path rescaled = extended.rescaled(0.0, 1.0);
  return {std::move(extended), std::move(rescaled), junction_gap, endpoint_gap};
}

Path recovery_path(const LambdaConvexFunction& fh, double tau, const Path& gamma, const Vector& xh0,
                   const Vector& xh1, int patch_samples) {
  return recovery_construction(fh, tau, gamma, xh0, xh1, patch_samples).rescaled;
}

}  // namespace gammalab
