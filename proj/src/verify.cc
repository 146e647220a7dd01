#include "gammalab/verify.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>

#include "gammalab/experiments.h"
#include "gammalab/min_norm_point.h"

namespace gammalab {
namespace {

constexpr int kMaxOffending = 5;
constexpr Kind kAllKinds[] = {Kind::kQuadratic, Kind::kMaxLinear, Kind::kLogSumExp, Kind::kIndicator,
                              Kind::kDistancePenalty};
constexpr Kind kLemmaKinds[] = {Kind::kQuadratic, Kind::kMaxLinear, Kind::kLogSumExp};
constexpr Kind kSmoothKinds[] = {Kind::kQuadratic, Kind::kLogSumExp};

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double log_uniform(Rng& rng, double lo, double hi) { return std::exp(uniform(rng, std::log(lo), std::log(hi))); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Records one trial; margin > 0 is a failure.
struct Recorder {
  InvariantResult& result;

  void operator()(double margin, const std::function<Json()>& describe) {
    ++result.trials;
    if (result.trials == 1 || margin > result.worst_margin) result.worst_margin = margin;
    if (margin > 0.0 || std::isnan(margin)) {
      ++result.failures;
      if (static_cast<int>(result.offending.size()) < kMaxOffending) {
        Json entry = describe();
        entry["margin"] = number_to_json(margin);
        result.offending.push_back(std::move(entry));
      }
    }
  }
};

class Suite {
 public:
  explicit Suite(const VerifyOptions& options) : options_(options), rng_(options.seed) {}

  InvariantResult& open(const std::string& module, const std::string& name) {
    results_.push_back({module, name, 0, 0, 0.0, Json::array()});
    return results_.back();
  }

  LambdaConvexFunction function(Kind kind, Eigen::Index dim) {
    LambdaConvexFunction f = random_function(kind, dim, rng_);
    return options_.plant_lambda_fault ? f.with_lambda(f.lambda() + 1.0) : f;
  }

  // Step sizes follow the true modulus so that planted faults never make a
  // resolvent ill-posed.
  double tau(const LambdaConvexFunction& f) {
    return random_tau(options_.plant_lambda_fault ? f.with_lambda(f.lambda() - 1.0) : f, rng_);
  }

  Eigen::Index dim() { return uniform_int(rng_, 1, 4); }

  Matrix matrix(Eigen::Index rows, Eigen::Index cols) {
    return Matrix::NullaryExpr(rows, cols, [&] { return uniform(rng_, -1.0, 1.0); });
  }

  Rng& rng() { return rng_; }
  const VerifyOptions& options() const { return options_; }
  VerifyReport take() {
    VerifyReport report;
    report.results.assign(std::make_move_iterator(results_.begin()), std::make_move_iterator(results_.end()));
    return report;
  }

 private:
  VerifyOptions options_;
  Rng rng_;
  std::deque<InvariantResult> results_;
};

Json instance(const LambdaConvexFunction& f, double tau, const Vector& x) {
  return Json{{"function", to_json(f)}, {"tau", tau}, {"x", to_json(x)}};
}

void run_convex_core(Suite& s) {
  const int n = s.options().samples;
  auto& envelope = s.open("convex_core", "envelope_identity");
  auto& reconstruct = s.open("convex_core", "gradient_reconstruction");
  auto& domain = s.open("convex_core", "domain_gradient_identity");
  auto& chain = s.open("convex_core", "slope_chain");
  auto& lip_j = s.open("convex_core", "resolvent_lipschitz");
  auto& lip_g = s.open("convex_core", "envelope_gradient_lipschitz");
  auto& decomposition = s.open("convex_core", "moreau_decomposition");
  auto& newton = s.open("convex_core", "newton_residual");
  auto& quad_grad = s.open("convex_core", "quadratic_envelope_gradient");
  auto& monotone = s.open("convex_core", "resolvent_slope_monotone");
  auto& lower = s.open("convex_core", "sampled_slope_lower_bound");
  auto& convexity = s.open("convex_core", "perturbed_convexity");

  for (Kind kind : kAllKinds) {
    for (int trial = 0; trial < n; ++trial) {
      const LambdaConvexFunction f = s.function(kind, s.dim());
      const double tau = s.tau(f);
      const double contraction = 1.0 / (1.0 + tau * f.lambda());
      const Vector x = random_vector(f.dim(), 2.0, s.rng());
      const ProxResult p = prox(f, tau, x);
      const Vector& j = p.resolvent_point;

      {
        const double fj = evaluate(f, j);
        const double rhs = fj + (x - j).squaredNorm() / (2.0 * tau);
        const double tol = (kind == Kind::kLogSumExp ? 1e-6 : 1e-9) * (1.0 + std::abs(rhs));
        Recorder{envelope}(std::abs(p.envelope_value - rhs) - tol, [&] { return instance(f, tau, x); });
      }
      Recorder{reconstruct}((tau * p.moreau_gradient + j - x).norm() - 1e-12 * (1.0 + x.norm()),
                            [&] { return instance(f, tau, x); });
      {
        const Vector y = random_domain_point(f, s.rng());
        const Vector g = min_norm_subgradient(f, y);
        const Vector back = moreau_gradient(f, tau, y + tau * g);
        Recorder{domain}((back - g).norm() - 1e-8 * (1.0 + g.norm()), [&] { return instance(f, tau, y); });
      }
      {
        const double a = slope(f, j);
        const double b = (x - j).norm() / tau;
        const double c = contraction * slope(f, x);
        const double tol = 1e-8 * (1.0 + b);
        const double margin = std::max(a - b - tol, std::isinf(c) ? -kInfinity : b - c - tol);
        Recorder{chain}(margin, [&] {
          Json e = instance(f, tau, x);
          e["slope_at_resolvent"] = number_to_json(a);
          e["envelope_slope"] = b;
          e["contracted_slope"] = number_to_json(c);
          return e;
        });
      }
      const Vector y = x + log_uniform(s.rng(), 1e-3, 2.0) * random_vector(f.dim(), 1.0, s.rng()).normalized();
      const ProxResult q = prox(f, tau, y);
      {
        const double ratio = (j - q.resolvent_point).norm() / (x - y).norm();
        Recorder{lip_j}(ratio - contraction - 1e-8, [&] {
          Json e = instance(f, tau, x);
          e["y"] = to_json(y);
          e["ratio"] = ratio;
          return e;
        });
      }
      {
        const double ratio = (p.moreau_gradient - q.moreau_gradient).norm() / (x - y).norm();
        Recorder{lip_g}(ratio - 3.0 / tau - 1e-8, [&] {
          Json e = instance(f, tau, x);
          e["y"] = to_json(y);
          e["ratio"] = ratio;
          return e;
        });
      }
      if (kind == Kind::kMaxLinear) {
        const Vector pk = project_onto_hull(f.as<MaxLinearParams>().vectors.transpose(), x / tau).point;
        Recorder{decomposition}((x - j - tau * pk).norm() - 1e-9 * (1.0 + x.norm()),
                                [&] { return instance(f, tau, x); });
      }
      if (kind == Kind::kLogSumExp) {
        Recorder{newton}(p.solver_residual - 1e-10, [&] { return instance(f, tau, x); });
      }
      if (kind == Kind::kQuadratic) {
        const auto& qp = f.as<QuadraticParams>();
        const Vector analytic = qp.Q * j + qp.b;
        Recorder{quad_grad}((p.moreau_gradient - analytic).norm() - 1e-10 * (1.0 + analytic.norm()),
                            [&] { return instance(f, tau, x); });
      }
      {
        const Vector z = random_domain_point(f, s.rng());
        const ResolventSlope rs = slope_from_resolvents(f, z);
        Recorder{monotone}(rs.monotone ? -1.0 : 1.0, [&] { return instance(f, rs.taus.front(), z); });
      }
      {
        const Vector z = random_domain_point(f, s.rng());
        std::vector<Vector> samples;
        for (int k = 0; k < 8; ++k) {
          Vector w = z + log_uniform(s.rng(), 1e-4, 1.0) * random_vector(f.dim(), 1.0, s.rng()).normalized();
          if (kind == Kind::kIndicator && k % 2 == 0) w = project(f.as<IndicatorParams>().set, w);
          if ((w - z).norm() > 0.0) samples.push_back(std::move(w));
        }
        if (!samples.empty()) {
          const double lb = sampled_slope_lower_bound(f, z, samples);
          const double sl = slope(f, z);
          Recorder{lower}(lb - sl - 1e-9 * (1.0 + sl), [&] { return instance(f, 0.0, z); });
        }
      }
      {
        const Vector u = random_domain_point(f, s.rng());
        const Vector v = random_domain_point(f, s.rng());
        const double t = uniform(s.rng(), 0.0, 1.0);
        const double lhs = evaluate(f, (1.0 - t) * u + t * v);
        const double fu = evaluate(f, u);
        const double fv = evaluate(f, v);
        const double rhs = (1.0 - t) * fu + t * fv - 0.5 * f.lambda() * t * (1.0 - t) * (u - v).squaredNorm();
        const double tol = 1e-9 * (1.0 + std::abs(fu) + std::abs(fv) + (u - v).squaredNorm());
        Recorder{convexity}(lhs - rhs - tol, [&] {
          Json e = instance(f, 0.0, u);
          e["y"] = to_json(v);
          e["t"] = t;
          return e;
        });
      }
    }
  }
}

// x0 + s v + sin(π s) w at s = t / δ.
Path smooth_path(const Vector& x0, const Vector& v, const Vector& w, double delta, int intervals) {
  std::vector<double> times(static_cast<std::size_t>(intervals) + 1);
  Matrix nodes(x0.size(), intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    const double s = static_cast<double>(i) / intervals;
    times[static_cast<std::size_t>(i)] = s * delta;
    nodes.col(i) = x0 + s * v + std::sin(3.14159265358979 * s) * w;
  }
  return Path(std::move(times), std::move(nodes));
}

void run_action_path(Suite& s) {
  const int n = std::max(1, s.options().samples / 4);
  auto& lemma = s.open("action_path", "interpolation_lemma_bound");
  auto& coarse = s.open("action_path", "tau_interpolation_bound");
  auto& endpoints = s.open("action_path", "interpolation_endpoints");
  auto& nulll = s.open("action_path", "null_lagrangian_order");
  auto& upper = s.open("action_path", "upper_gradient");
  constexpr int kSamples = 256;

  for (Kind kind : kLemmaKinds) {
    for (int trial = 0; trial < n; ++trial) {
      const LambdaConvexFunction f = s.function(kind, s.dim());
      const double tau = s.tau(f);
      const double delta = log_uniform(s.rng(), 0.05, 2.0);
      const Vector x0 = random_vector(f.dim(), 1.5, s.rng());
      const Vector xd = random_vector(f.dim(), 1.5, s.rng());
      if (1.0 + tau * f.lambda() < 0.5 || 1.0 + tau * f.lambda() <= 0.0) continue;
      auto describe = [&] {
        Json e = instance(f, tau, x0);
        e["xd"] = to_json(xd);
        e["delta"] = delta;
        return e;
      };
      const Path path = interpolation_path(f, tau, delta, x0, xd, kSamples);
      const double action = discrete_action(f, path).total;
      const double bound = interpolation_bound(f, tau, delta, x0, xd);
      Recorder{lemma}(action - bound - 1e-9 * (1.0 + bound), describe);

      const double coarse_action = discrete_action(f, interpolation_path(f, tau, tau, x0, xd, kSamples)).total;
      const double coarse_bound = tau_interpolation_bound(f, tau, x0, xd);
      Recorder{coarse}(coarse_action - coarse_bound - 1e-9 * (1.0 + coarse_bound), describe);

      const double r0 = prox(f, tau, x0 + tau * min_norm_subgradient(f, x0)).solver_residual;
      const double r1 = prox(f, tau, xd + tau * min_norm_subgradient(f, xd)).solver_residual;
      const double err = std::max((path.front() - x0).norm() - 10.0 * r0 - 1e-12 * (1.0 + x0.norm()),
                                  (path.back() - xd).norm() - 10.0 * r1 - 1e-12 * (1.0 + xd.norm()));
      Recorder{endpoints}(err, describe);
    }
  }

  for (Kind kind : kSmoothKinds) {
    for (int trial = 0; trial < n; ++trial) {
      const LambdaConvexFunction f = s.function(kind, s.dim());
      const Vector x0 = random_vector(f.dim(), 1.0, s.rng());
      const double delta = log_uniform(s.rng(), 0.25, 2.0);
      const Vector v = random_vector(f.dim(), 1.5, s.rng());
      const Vector w = random_vector(f.dim(), 1.0, s.rng());
      auto residual = [&](int intervals) {
        const Path p = smooth_path(x0, v, w, delta, intervals);
        const double total = discrete_action(f, p).total;
        return std::pair{std::abs(alt_action(f, p) - (total - 2.0 * evaluate(f, p.back()) + 2.0 * evaluate(f, p.front()))),
                         total};
      };
      const auto [coarse_res, total] = residual(64);
      const auto [fine_res, unused] = residual(128);
      (void)unused;
      Recorder{nulll}(fine_res - 0.6 * coarse_res - 1e-9 * (1.0 + std::abs(total)), [&] {
        Json e = instance(f, 0.0, x0);
        e["delta"] = delta;
        e["residual_64"] = coarse_res;
        e["residual_128"] = fine_res;
        return e;
      });
    }
  }

  for (Kind kind : kAllKinds) {
    for (int trial = 0; trial < n; ++trial) {
      const LambdaConvexFunction f = s.function(kind, s.dim());
      std::vector<Vector> vertices;
      for (int k = 0; k < 5; ++k) vertices.push_back(random_domain_point(f, s.rng()));
      std::vector<Vector> nodes;
      constexpr int kRefine = 12;
      for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
        for (int r = 0; r < kRefine; ++r) {
          const double t = static_cast<double>(r) / kRefine;
          nodes.push_back((1.0 - t) * vertices[k] + t * vertices[k + 1]);
        }
      }
      nodes.push_back(vertices.back());
      std::vector<double> times(nodes.size());
      for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<double>(i) / (times.size() - 1);
      const Path path(times, nodes);
      const UpperGradientCheck check = upper_gradient_residual(f, path);
      Recorder{upper}(-check.residual - check.quadrature_bound, [&] {
        Json e = instance(f, 0.0, vertices.front());
        Json vs = Json::array();
        for (const Vector& v : vertices) vs.push_back(to_json(v));
        e["vertices"] = std::move(vs);
        return e;
      });
    }
  }
}

void run_path_opt(Suite& s) {
  const int n = std::max(1, s.options().samples / 10);
  auto& kinetic = s.open("path_opt", "kinetic_gradient_fd");
  auto& directional = s.open("path_opt", "smoothed_directional_derivative");
  auto& descent = s.open("path_opt", "descent_monotone");
  auto& pinning = s.open("path_opt", "endpoint_pinning");
  auto& free_case = s.open("path_opt", "free_case_value");

  for (int trial = 0; trial < n; ++trial) {
    const Eigen::Index d = uniform_int(s.rng(), 1, 2);
    const Path base = smooth_path(random_vector(d, 1.0, s.rng()), random_vector(d, 1.5, s.rng()),
                                  random_vector(d, 1.0, s.rng()), 1.0, 16);
    const LambdaConvexFunction zero = LambdaConvexFunction::zero(d);
    const Matrix grad = kinetic_gradient(base);
    double worst = 0.0;
    constexpr double kStep = 1e-6;
    for (Eigen::Index j = 1; j + 1 < base.nodes().cols(); ++j) {
      for (Eigen::Index k = 0; k < d; ++k) {
        Matrix up = base.nodes();
        Matrix down = base.nodes();
        up(k, j) += kStep;
        down(k, j) -= kStep;
        const double fd = (smoothed_objective(zero, 1.0, Path(base.times(), up)) -
                           smoothed_objective(zero, 1.0, Path(base.times(), down))) / (2.0 * kStep);
        worst = std::max(worst, std::abs(fd - grad(k, j)) / (1.0 + std::abs(grad(k, j))));
      }
    }
    Recorder{kinetic}(worst - 1e-6, [&] { return Json{{"path", to_csv(base)}}; });
  }

  for (Kind kind : kAllKinds) {
    for (int trial = 0; trial < n; ++trial) {
      const LambdaConvexFunction f = s.function(kind, uniform_int(s.rng(), 1, 2));
      const double tau = std::min(s.tau(f) * 10.0, 1.0);
      if (!is_admissible(f, tau) || 1.0 + tau * f.lambda() < 0.5) continue;
      const Path base = smooth_path(random_vector(f.dim(), 1.0, s.rng()), random_vector(f.dim(), 1.5, s.rng()),
                                    random_vector(f.dim(), 1.0, s.rng()), 1.0, 16);
      Matrix v = Matrix::Zero(f.dim(), base.nodes().cols());
      v.middleCols(1, v.cols() - 2) = s.matrix(f.dim(), v.cols() - 2);
      const Matrix grad = smoothed_gradient(f, tau, base, 1e-5);
      const double analytic = (grad.array() * v.array()).sum();
      constexpr double kStep = 1e-5;
      const double fd = (smoothed_objective(f, tau, Path(base.times(), Matrix(base.nodes() + kStep * v))) -
                         smoothed_objective(f, tau, Path(base.times(), Matrix(base.nodes() - kStep * v)))) /
                        (2.0 * kStep);
      Recorder{directional}(std::abs(fd - analytic) - 1e-3 * (1.0 + std::abs(fd)), [&] {
        Json e = instance(f, tau, base.front());
        e["analytic"] = analytic;
        e["finite_difference"] = fd;
        return e;
      });
    }
  }

  for (int trial = 0; trial < n; ++trial) {
    const Kind kind = kAllKinds[uniform_int(s.rng(), 0, 4)];
    const LambdaConvexFunction f = s.function(kind, uniform_int(s.rng(), 1, 2));
    const Vector x0 = random_domain_point(f, s.rng());
    const Vector xd = random_domain_point(f, s.rng());
    MinimizeConfig cfg = MinimizeConfig::defaults(1.0);
    cfg.intervals = 32;
    cfg.max_iters = 200;
    cfg.tau_schedule.erase(std::remove_if(cfg.tau_schedule.begin(), cfg.tau_schedule.end(),
                                          [&](double t) { return 1.0 + t * f.lambda() <= 0.0; }),
                           cfg.tau_schedule.end());
    if (cfg.tau_schedule.empty()) continue;
    const MinimizeResult r = minimize_action(f, x0, xd, 1.0, cfg);
    bool monotone = true;
    for (const StageTrace& st : r.stages) {
      for (std::size_t i = 1; i < st.objective.size(); ++i) monotone = monotone && st.objective[i] <= st.objective[i - 1];
    }
    auto describe = [&] {
      Json e = instance(f, 0.0, x0);
      e["xd"] = to_json(xd);
      return e;
    };
    Recorder{descent}(monotone ? -1.0 : 1.0, describe);
    const bool pinned = (r.path.front().array() == x0.array()).all() && (r.path.back().array() == xd.array()).all();
    Recorder{pinning}(pinned ? -1.0 : 1.0, describe);
  }

  for (int trial = 0; trial < n; ++trial) {
    const Eigen::Index d = uniform_int(s.rng(), 1, 2);
    const Vector x0 = random_vector(d, 1.0, s.rng());
    const Vector xd = random_vector(d, 1.0, s.rng());
    const double delta = log_uniform(s.rng(), 0.5, 2.0);
    MinimizeConfig cfg = MinimizeConfig::defaults(delta);
    cfg.intervals = 32;
    const double value = minimize_action(LambdaConvexFunction::zero(d), x0, xd, delta, cfg).value_true;
    const double exact = closed_form_value(ClosedFormCase::kFree, x0, xd, delta);
    Recorder{free_case}(std::abs(value - exact) - 1e-6 * (1.0 + exact),
                        [&] { return Json{{"x0", to_json(x0)}, {"xd", to_json(xd)}, {"delta", delta}}; });
  }
}

void run_gamma_lab(Suite& s) {
  auto& resolvent = s.open("gamma_lab", "resolvent_gaps_decreasing");
  auto& liminf = s.open("gamma_lab", "slope_liminf");
  auto& recovery = s.open("gamma_lab", "recovery_bound");
  auto& audit = s.open("gamma_lab", "family_hypotheses");

  Matrix pm(2, 1);
  pm << 1.0, -1.0;
  std::vector<MoscoFamily> families;
  families.push_back(family_logsumexp_to_max(pm, default_epsilon_schedule(), Vector::Constant(1, -1.0),
                                             Vector::Constant(1, 1.0)));
  Matrix points(2, 1);
  points << 1.0, -0.5;
  families.push_back(family_logsumexp_to_max(permutation_vectors(points), default_epsilon_schedule(),
                                             Vector::Constant(2, -0.5), Vector::Constant(2, 0.5)));
  families.push_back(family_penalty_to_indicator(Ball{Vector::Zero(2), 1.0}, default_penalty_schedule(),
                                                 (Vector(2) << -0.6, 0.1).finished(),
                                                 (Vector(2) << 0.5, 0.3).finished()));
  for (int trial = 0; trial < std::max(1, s.options().samples / 50); ++trial) {
    const LambdaConvexFunction f = s.function(Kind::kQuadratic, uniform_int(s.rng(), 1, 2));
    families.push_back(family_constant(f, random_vector(f.dim(), 1.0, s.rng()), random_vector(f.dim(), 1.0, s.rng())));
  }

  for (const MoscoFamily& family : families) {
    auto describe = [&] { return Json{{"family", family.name}, {"limit", to_json(family.limit.f)}}; };
    const FamilyAudit a = audit_family(family);
    Recorder{audit}(a.lambda_ok && a.slope_bound_ok && a.endpoints_converge ? -1.0 : 1.0, describe);

    const double tau = family.uniform_lambda < 0.0 ? std::min(0.5, 0.25 / -family.uniform_lambda) : 0.5;
    const ResolventTable table = resolvent_convergence_table(family, tau, family.probes);
    Recorder{resolvent}(table.all_decreasing ? -1.0 : 1.0, describe);

    const LiminfReport li = slope_liminf_check(family, family.probes);
    Recorder{liminf}(li.all_satisfied ? -1.0 : 1.0, describe);

    const Path gamma = Path::straight(family.limit.x0, family.limit.x1, 0.0, 1.0, 64);
    std::vector<double> taus;
    for (double t : {0.2, 0.05}) {
      if (1.0 + t * family.uniform_lambda >= 0.5) taus.push_back(t);
    }
    const LimsupReport lr = gamma_limsup_experiment(family, gamma, taus);
    for (const LimsupRow& row : lr.rows) {
      Recorder{recovery}(row.action_extended - row.bound - lr.tolerance, [&] {
        Json e = describe();
        e["member"] = row.member;
        e["tau"] = row.tau;
        return e;
      });
    }
  }
}

}  // namespace

LambdaConvexFunction random_function(Kind kind, Eigen::Index dim, Rng& rng) {
  switch (kind) {
    case Kind::kQuadratic: {
      const Matrix g = Matrix::NullaryExpr(dim, dim, [&] { return std::normal_distribution<double>()(rng); });
      const Eigen::HouseholderQR<Matrix> qr(g);
      const Matrix orth = qr.householderQ();
      Vector eig(dim);
      for (Eigen::Index k = 0; k < dim; ++k) eig(k) = uniform(rng, -0.5, 2.0);
      const Matrix Q = orth * eig.asDiagonal() * orth.transpose();
      return LambdaConvexFunction::quadratic(Q, random_vector(dim, 1.0, rng), uniform(rng, -1.0, 1.0));
    }
    case Kind::kMaxLinear:
    case Kind::kLogSumExp: {
      const int m = uniform_int(rng, 1, 5);
      const Matrix a = Matrix::NullaryExpr(m, dim, [&] { return std::normal_distribution<double>()(rng); });
      if (kind == Kind::kMaxLinear) return LambdaConvexFunction::max_linear(a);
      return LambdaConvexFunction::log_sum_exp(a, log_uniform(rng, 0.05, 1.0));
    }
    case Kind::kIndicator:
      return LambdaConvexFunction::indicator(random_set(dim, rng));
    case Kind::kDistancePenalty:
      return LambdaConvexFunction::distance_penalty(random_set(dim, rng), log_uniform(rng, 0.1, 10.0));
  }
  throw InvalidArgument("random_function: unknown kind");
}

ConvexSet random_set(Eigen::Index dim, Rng& rng) {
  switch (uniform_int(rng, 0, 2)) {
    case 0:
      return Ball{random_vector(dim, 0.5, rng), uniform(rng, 0.5, 2.0)};
    case 1: {
      const Vector c = random_vector(dim, 0.5, rng);
      Vector lo(dim), hi(dim);
      for (Eigen::Index k = 0; k < dim; ++k) {
        lo(k) = c(k) - uniform(rng, 0.3, 1.5);
        hi(k) = c(k) + uniform(rng, 0.3, 1.5);
      }
      return Box{lo, hi};
    }
    default: {
      Vector normal = random_vector(dim, 1.0, rng);
      if (normal.norm() < 1e-3) normal = Vector::Unit(dim, 0);
      return Halfspace{normal.normalized(), uniform(rng, -0.5, 1.0)};
    }
  }
}

Vector random_vector(Eigen::Index dim, double scale, Rng& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v(k) = normal(rng);
  return v;
}

Vector random_domain_point(const LambdaConvexFunction& f, Rng& rng) {
  Vector x = random_vector(f.dim(), 1.5, rng);
  if (f.kind() == Kind::kIndicator) x = project(f.as<IndicatorParams>().set, x);
  return x;
}

double random_tau(const LambdaConvexFunction& f, Rng& rng) {
  double tau = log_uniform(rng, 1e-2, 2.0);
  if (f.lambda() < 0.0) tau = std::min(tau, 0.5 / -f.lambda());
  return tau;
}

int VerifyReport::total_failures() const {
  int total = 0;
  for (const InvariantResult& r : results) total += r.failures;
  return total;
}

const InvariantResult* VerifyReport::find(const std::string& name) const {
  for (const InvariantResult& r : results) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::vector<std::string> verify_scopes() { return {"all", "convex_core", "action_path", "path_opt", "gamma_lab"}; }

VerifyReport verify_suite(const VerifyOptions& options) {
  const auto scopes = verify_scopes();
  if (std::find(scopes.begin(), scopes.end(), options.scope) == scopes.end()) {
    throw InvalidArgument("verify: unknown scope '" + options.scope + "'");
  }
  if (options.samples < 1) throw InvalidArgument("verify: samples must be positive");
  Suite suite(options);
  const bool all = options.scope == "all";
  if (all || options.scope == "convex_core") run_convex_core(suite);
  if (all || options.scope == "action_path") run_action_path(suite);
  if (all || options.scope == "path_opt") run_path_opt(suite);
  if (all || options.scope == "gamma_lab") run_gamma_lab(suite);
  VerifyReport report = suite.take();
  report.scope = options.scope;
  report.seed = options.seed;
  return report;
}

Json to_json(const VerifyReport& report) {
  Json results = Json::array();
  for (const InvariantResult& r : report.results) {
    results.push_back({{"module", r.module},
                       {"invariant", r.name},
                       {"trials", r.trials},
                       {"failures", r.failures},
                       {"worst_margin", number_to_json(r.worst_margin)},
                       {"offending", r.offending}});
  }
  return Json{{"scope", report.scope},
              {"seed", report.seed},
              {"total_failures", report.total_failures()},
              {"passed", report.passed()},
              {"results", std::move(results)}};
}

}  // namespace gammalab
