#include "gammalab/path_opt.h"

#include <algorithm>
#include <array>
#include <cmath>

namespace gammalab {
namespace {

double slope_sq_smoothed(const LambdaConvexFunction& f, double tau, const Vector& y) {
  return prox(f, tau, y).moreau_gradient.squaredNorm();
}

Vector slope_sq_gradient(const LambdaConvexFunction& f, double tau, const Vector& y, double rel_step) {
  const double h = rel_step * (1.0 + y.norm());
  Vector grad(y.size());
  Vector probe = y;
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    probe(k) = y(k) + h;
    const double up = slope_sq_smoothed(f, tau, probe);
    probe(k) = y(k) - h;
    const double down = slope_sq_smoothed(f, tau, probe);
    probe(k) = y(k);
    grad(k) = (up - down) / (2.0 * h);
  }
  return grad;
}

// Solves the kinetic Hessian system (tridiagonal in time, identical for every
// coordinate) for the interior nodes: out = A^-1 rhs.
Matrix solve_kinetic(const std::vector<double>& t, const Matrix& rhs) {
  const Eigen::Index n = rhs.cols();  // interior count
  Matrix out = Matrix::Zero(rhs.rows(), n);
  if (n == 0) return out;
  std::vector<double> diag(static_cast<std::size_t>(n)), upper(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto node = static_cast<std::size_t>(j + 1);
    diag[static_cast<std::size_t>(j)] = 2.0 / (t[node] - t[node - 1]) + 2.0 / (t[node + 1] - t[node]);
    upper[static_cast<std::size_t>(j)] = -2.0 / (t[node + 1] - t[node]);
  }
  for (Eigen::Index k = 0; k < rhs.rows(); ++k) {
    std::vector<double> c(static_cast<std::size_t>(n)), d(static_cast<std::size_t>(n));
    c[0] = upper[0] / diag[0];
    d[0] = rhs(k, 0) / diag[0];
    for (Eigen::Index j = 1; j < n; ++j) {
      const auto u = static_cast<std::size_t>(j);
      const double denom = diag[u] - upper[u - 1] * c[u - 1];
      c[u] = upper[u] / denom;
      d[u] = (rhs(k, j) - upper[u - 1] * d[u - 1]) / denom;
    }
    out(k, n - 1) = d[static_cast<std::size_t>(n - 1)];
    for (Eigen::Index j = n - 2; j >= 0; --j) {
      out(k, j) = d[static_cast<std::size_t>(j)] - c[static_cast<std::size_t>(j)] * out(k, j + 1);
    }
  }
  return out;
}

Path with_interior(const Path& base, const Matrix& interior) {
  Matrix nodes = base.nodes();
  nodes.middleCols(1, interior.cols()) = interior;
  return Path(base.times(), std::move(nodes));
}

}  // namespace

MinimizeConfig MinimizeConfig::defaults(double delta) {
  MinimizeConfig cfg;
  cfg.tau_schedule = {0.5 * delta, 0.1 * delta, 0.02 * delta, 0.004 * delta};
  return cfg;
}

void MinimizeConfig::validate(const LambdaConvexFunction& f) const {
  if (intervals < 2) throw InvalidArgument("minimize: N must be at least 2");
  if (!(grad_tol > 0.0)) throw InvalidArgument("minimize: grad_tol must be positive");
  if (max_iters < 1) throw InvalidArgument("minimize: max_iters must be positive");
  if (tau_schedule.empty()) throw InvalidArgument("minimize: empty tau schedule");
  if (!(step.initial_step > 0.0) || !(step.shrink > 0.0 && step.shrink < 1.0) ||
      !(step.sufficient_decrease > 0.0 && step.sufficient_decrease < 1.0)) {
    throw InvalidArgument("minimize: bad Armijo parameters");
  }
  for (std::size_t i = 0; i < tau_schedule.size(); ++i) {
    if (i > 0 && !(tau_schedule[i] < tau_schedule[i - 1])) {
      throw InvalidArgument("minimize: tau schedule must be strictly decreasing");
    }
    if (!is_admissible(f, tau_schedule[i])) {
      throw InadmissibleStep("minimize: tau " + std::to_string(tau_schedule[i]) + " not admissible");
    }
  }
}

Json to_json(const MinimizeConfig& cfg) {
  return Json{{"N", cfg.intervals},
              {"tau_schedule", cfg.tau_schedule},
              {"max_iters", cfg.max_iters},
              {"grad_tol", cfg.grad_tol},
              {"fd_relative_step", cfg.fd_relative_step},
              {"step",
               {{"initial", cfg.step.initial_step},
                {"shrink", cfg.step.shrink},
                {"sufficient_decrease", cfg.step.sufficient_decrease},
                {"max_backtracks", cfg.step.max_backtracks}}}};
}

MinimizeConfig minimize_config_from_json(const Json& j, double delta) {
  MinimizeConfig cfg = MinimizeConfig::defaults(delta);
  if (j.is_null()) return cfg;
  if (j.contains("N")) cfg.intervals = j.at("N").get<int>();
  if (j.contains("tau_schedule")) cfg.tau_schedule = j.at("tau_schedule").get<std::vector<double>>();
  if (j.contains("max_iters")) cfg.max_iters = j.at("max_iters").get<int>();
  if (j.contains("grad_tol")) cfg.grad_tol = j.at("grad_tol").get<double>();
  if (j.contains("fd_relative_step")) cfg.fd_relative_step = j.at("fd_relative_step").get<double>();
  if (j.contains("step")) {
    const Json& s = j.at("step");
    if (s.contains("initial")) cfg.step.initial_step = s.at("initial").get<double>();
    if (s.contains("shrink")) cfg.step.shrink = s.at("shrink").get<double>();
    if (s.contains("sufficient_decrease")) cfg.step.sufficient_decrease = s.at("sufficient_decrease").get<double>();
    if (s.contains("max_backtracks")) cfg.step.max_backtracks = s.at("max_backtracks").get<int>();
  }
  return cfg;
}

Json summary_json(const MinimizeResult& r, const MinimizeConfig& cfg) {
  Json stages = Json::array();
  for (const StageTrace& s : r.stages) {
    stages.push_back({{"tau", s.tau},
                      {"iterations", s.iterations},
                      {"converged", s.converged},
                      {"final_gradient_norm", s.final_gradient_norm}});
  }
  return Json{{"value_smoothed", number_to_json(r.value_smoothed)},
              {"value_true", number_to_json(r.value_true)},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"resolvent_polished", r.resolvent_polished},
              {"tau_schedule", cfg.tau_schedule},
              {"stages", std::move(stages)}};
}

double smoothed_objective(const LambdaConvexFunction& f, double tau, const Path& path) {
  const auto& t = path.times();
  double total = 0.0;
  for (std::size_t i = 0; i < path.intervals(); ++i) {
    const double dt = t[i + 1] - t[i];
    total += (path.node(i + 1) - path.node(i)).squaredNorm() / dt + dt * slope_sq_smoothed(f, tau, path.midpoint(i));
  }
  return total;
}

Matrix kinetic_gradient(const Path& path) {
  const auto& t = path.times();
  const Matrix& x = path.nodes();
  Matrix grad = Matrix::Zero(x.rows(), x.cols());
  for (Eigen::Index j = 1; j + 1 < x.cols(); ++j) {
    const auto u = static_cast<std::size_t>(j);
    grad.col(j) = 2.0 * (x.col(j) - x.col(j - 1)) / (t[u] - t[u - 1]) - 2.0 * (x.col(j + 1) - x.col(j)) / (t[u + 1] - t[u]);
  }
  return grad;
}

Matrix smoothed_gradient(const LambdaConvexFunction& f, double tau, const Path& path, double fd_relative_step) {
  const auto& t = path.times();
  Matrix grad = kinetic_gradient(path);
  Vector previous = slope_sq_gradient(f, tau, path.midpoint(0), fd_relative_step);
  for (std::size_t j = 1; j + 1 < path.size(); ++j) {
    const Vector next = slope_sq_gradient(f, tau, path.midpoint(j), fd_relative_step);
    grad.col(static_cast<Eigen::Index>(j)) += 0.5 * (t[j] - t[j - 1]) * previous + 0.5 * (t[j + 1] - t[j]) * next;
    previous = next;
  }
  return grad;
}

MinimizeResult minimize_action(const LambdaConvexFunction& f, const Vector& x0, const Vector& xd, double delta,
                               const MinimizeConfig& cfg) {
  require_dim(x0, f.dim(), "minimize_action x0");
  require_dim(xd, f.dim(), "minimize_action xd");
  require_finite(x0, "minimize_action x0");
  require_finite(xd, "minimize_action xd");
  if (!(delta > 0.0)) throw InvalidArgument("minimize_action: delta must be positive");
  cfg.validate(f);

  Path current = Path::straight(x0, xd, 0.0, delta, cfg.intervals);
  if (f.kind() == Kind::kIndicator) {
    Matrix nodes = current.nodes();
    for (Eigen::Index j = 1; j + 1 < nodes.cols(); ++j) {
      nodes.col(j) = project(f.as<IndicatorParams>().set, nodes.col(j));
    }
    current = Path(current.times(), std::move(nodes));
  }

  const Eigen::Index interior = cfg.intervals - 1;
  std::vector<StageTrace> stages;
  int total_iters = 0;
  double value_smoothed = 0.0;
  for (double tau : cfg.tau_schedule) {
    StageTrace trace;
    trace.tau = tau;
    double energy = smoothed_objective(f, tau, current);
    trace.objective.push_back(energy);
    double alpha = cfg.step.initial_step;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
      const Matrix grad = smoothed_gradient(f, tau, current, cfg.fd_relative_step).middleCols(1, interior);
      const Matrix direction = -solve_kinetic(current.times(), grad);
      const double slope_along = (grad.array() * direction.array()).sum();
      trace.final_gradient_norm = std::sqrt(std::max(0.0, -slope_along));
      if (trace.final_gradient_norm <= cfg.grad_tol) {
        trace.converged = true;
        break;
      }
      bool accepted = false;
      alpha = std::min(cfg.step.initial_step, alpha / cfg.step.shrink);
      for (int back = 0; back <= cfg.step.max_backtracks; ++back) {
        const Matrix trial_interior = current.nodes().middleCols(1, interior) + alpha * direction;
        Path trial = with_interior(current, trial_interior);
        const double trial_energy = smoothed_objective(f, tau, trial);
        if (trial_energy <= energy + cfg.step.sufficient_decrease * alpha * slope_along) {
          current = std::move(trial);
          energy = trial_energy;
          accepted = true;
          break;
        }
        alpha *= cfg.step.shrink;
      }
      ++trace.iterations;
      if (!accepted) {
        // No representable decrease along the descent direction anymore.
        trace.converged = trace.final_gradient_norm <= 1e3 * cfg.grad_tol;
        break;
      }
      trace.objective.push_back(energy);
    }
    total_iters += trace.iterations;
    value_smoothed = energy;
    stages.push_back(std::move(trace));
  }

  // Candidate with interior nodes replaced by their resolvents at the final τ:
  // it lies in D(∂f) and has (1 + τλ)^-1-contracted increments.
  const double tau_last = cfg.tau_schedule.back();
  Matrix polished_nodes = current.nodes();
  for (Eigen::Index j = 1; j + 1 < polished_nodes.cols(); ++j) {
    polished_nodes.col(j) = prox(f, tau_last, polished_nodes.col(j)).resolvent_point;
  }
  Path polished(current.times(), std::move(polished_nodes));
  const double raw_value = discrete_action(f, current).total;
  const double polished_value = discrete_action(f, polished).total;
  const bool use_polished = polished_value < raw_value;

  MinimizeResult result{use_polished ? std::move(polished) : std::move(current),
                        value_smoothed,
                        use_polished ? polished_value : raw_value,
                        total_iters,
                        stages.back().converged,
                        use_polished,
                        std::move(stages)};
  return result;
}

GridOracleResult grid_oracle(const LambdaConvexFunction& f, const Vector& x0, const Vector& xd, double delta,
                             const GridOracleConfig& cfg) {
  const Eigen::Index d = f.dim();
  if (d < 1 || d > 2) throw InvalidArgument("grid_oracle: dimension must be 1 or 2");
  require_dim(x0, d, "grid_oracle x0");
  require_dim(xd, d, "grid_oracle xd");
  require_dim(cfg.lo, d, "grid_oracle lo");
  require_dim(cfg.hi, d, "grid_oracle hi");
  if (static_cast<Eigen::Index>(cfg.points.size()) != d) throw DimensionMismatch("grid_oracle: points per axis");
  if (cfg.time_steps < 1 || cfg.neighborhood < 1) throw InvalidArgument("grid_oracle: bad resolution");
  if (!(delta > 0.0)) throw InvalidArgument("grid_oracle: delta must be positive");

  std::array<int, 2> n{1, 1};
  std::array<double, 2> h{0.0, 0.0};
  for (Eigen::Index k = 0; k < d; ++k) {
    n[static_cast<std::size_t>(k)] = cfg.points[static_cast<std::size_t>(k)];
    if (n[static_cast<std::size_t>(k)] < 2 || !(cfg.hi(k) > cfg.lo(k))) throw InvalidArgument("grid_oracle: bad box");
    h[static_cast<std::size_t>(k)] = (cfg.hi(k) - cfg.lo(k)) / (n[static_cast<std::size_t>(k)] - 1);
  }
  const int radius = cfg.neighborhood;
  const long long grid_size = static_cast<long long>(n[0]) * n[1];
  const long long branching = d == 1 ? 2 * radius + 1 : (2LL * radius + 1) * (2LL * radius + 1);
  if (grid_size * (cfg.time_steps + 1) * branching > cfg.node_budget) {
    throw InvalidArgument("grid_oracle: graph exceeds node budget");
  }

  auto snap = [&](const Vector& x, const char* which) {
    std::array<int, 2> idx{0, 0};
    for (Eigen::Index k = 0; k < d; ++k) {
      const auto u = static_cast<std::size_t>(k);
      const double cell = (x(k) - cfg.lo(k)) / h[u];
      const int r = static_cast<int>(std::lround(cell));
      if (r < 0 || r >= n[u] || std::abs(cell - r) > cfg.snap_tolerance) {
        throw InvalidArgument(std::string("grid_oracle: endpoint ") + which + " is off the grid");
      }
      idx[u] = r;
    }
    return idx;
  };
  const auto start = snap(x0, "x0");
  const auto goal = snap(xd, "xd");
  auto flat = [&](int i, int j) { return static_cast<long long>(j) * n[0] + i; };

  // Squared slopes on the half-step lattice; edge midpoints land on it.
  const int m0 = 2 * n[0] - 1;
  const int m1 = d == 2 ? 2 * n[1] - 1 : 1;
  std::vector<double> half_slope_sq(static_cast<std::size_t>(m0) * m1);
  Vector probe(d);
  for (int j = 0; j < m1; ++j) {
    for (int i = 0; i < m0; ++i) {
      probe(0) = cfg.lo(0) + 0.5 * i * h[0];
      if (d == 2) probe(1) = cfg.lo(1) + 0.5 * j * h[1];
      const double s = slope(f, probe);
      half_slope_sq[static_cast<std::size_t>(j) * m0 + i] = s * s;
    }
  }

  const double dt = delta / cfg.time_steps;
  const auto layer = static_cast<std::size_t>(grid_size);
  std::vector<double> cost(layer, kInfinity), next(layer);
  std::vector<int> parent(layer * static_cast<std::size_t>(cfg.time_steps), -1);
  cost[static_cast<std::size_t>(flat(start[0], start[1]))] = 0.0;
  const int r1 = d == 2 ? radius : 0;

  // The graph is layered by time, so processing layers in order settles every
  // label of a layer before it is expanded (label-setting). Ties keep the
  // lowest-cost, then lowest-index predecessor.
  for (int step = 0; step < cfg.time_steps; ++step) {
    std::fill(next.begin(), next.end(), kInfinity);
    int* par = parent.data() + static_cast<std::size_t>(step) * layer;
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i) {
        const double base = cost[static_cast<std::size_t>(flat(i, j))];
        if (std::isinf(base)) continue;
        for (int dj = -r1; dj <= r1; ++dj) {
          const int jj = j + dj;
          if (jj < 0 || jj >= n[1]) continue;
          for (int di = -radius; di <= radius; ++di) {
            const int ii = i + di;
            if (ii < 0 || ii >= n[0]) continue;
            const double s2 = half_slope_sq[static_cast<std::size_t>(j + jj) * m0 + (i + ii)];
            if (std::isinf(s2)) continue;
            const double dx0 = di * h[0];
            const double dx1 = dj * h[1];
            const double c = base + (dx0 * dx0 + dx1 * dx1) / dt + dt * s2;
            const auto target = static_cast<std::size_t>(flat(ii, jj));
            if (c < next[target]) {
              next[target] = c;
              par[target] = static_cast<int>(flat(i, j));
            }
          }
        }
      }
    }
    cost.swap(next);
  }

  GridOracleResult out{cost[static_cast<std::size_t>(flat(goal[0], goal[1]))], 0.0,
                       Path::straight(x0, xd, 0.0, delta, 1)};
  if (std::isinf(out.value)) return out;

  std::vector<int> trail(static_cast<std::size_t>(cfg.time_steps) + 1);
  trail.back() = static_cast<int>(flat(goal[0], goal[1]));
  for (int step = cfg.time_steps - 1; step >= 0; --step) {
    trail[static_cast<std::size_t>(step)] =
        parent[static_cast<std::size_t>(step) * layer + static_cast<std::size_t>(trail[static_cast<std::size_t>(step) + 1])];
  }
  std::vector<double> times(trail.size());
  Matrix nodes(d, static_cast<Eigen::Index>(trail.size()));
  double max_slope_sq = 0.0;
  for (std::size_t s = 0; s < trail.size(); ++s) {
    times[s] = s + 1 == trail.size() ? delta : static_cast<double>(s) * dt;
    const int i = trail[s] % n[0];
    const int j = trail[s] / n[0];
    nodes(0, static_cast<Eigen::Index>(s)) = cfg.lo(0) + i * h[0];
    if (d == 2) nodes(1, static_cast<Eigen::Index>(s)) = cfg.lo(1) + j * h[1];
    max_slope_sq = std::max(max_slope_sq, half_slope_sq[static_cast<std::size_t>(2 * j) * m0 + 2 * i]);
  }
  nodes.col(0) = x0;
  nodes.col(nodes.cols() - 1) = xd;
  out.path = Path(std::move(times), std::move(nodes));
  const double hmax = std::max(h[0], h[1]);
  out.error_bound = delta * static_cast<double>(d) * (hmax / dt) * (hmax / dt) / 4.0 + dt * max_slope_sq;
  return out;
}

ClosedFormCase parse_closed_form_case(std::string_view name) {
  if (name == "free") return ClosedFormCase::kFree;
  if (name == "quadratic_1d") return ClosedFormCase::kQuadratic1d;
  throw InvalidArgument("unknown closed-form case '" + std::string(name) + "'");
}

double closed_form_value(ClosedFormCase which, const Vector& x0, const Vector& xd, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("closed_form_value: delta must be positive");
  require_dim(xd, x0.size(), "closed_form_value");
  switch (which) {
    case ClosedFormCase::kFree:
      return (xd - x0).squaredNorm() / delta;
    case ClosedFormCase::kQuadratic1d: {
      require_dim(x0, 1, "closed_form_value quadratic_1d");
      const double a = x0(0);
      const double b = xd(0);
      return ((a * a + b * b) * std::cosh(delta) - 2.0 * a * b) / std::sinh(delta);
    }
  }
  throw InvalidArgument("closed_form_value: unknown case");
}

}  // namespace gammalab
