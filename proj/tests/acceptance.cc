// One PASS/FAIL line per acceptance criterion; exit status is the number of
// failed criteria.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gammalab/experiments.h"
#include "gammalab/min_norm_point.h"
#include "gammalab/verify.h"

using namespace gammalab;

namespace {

int failed = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  failed += ok ? 0 : 1;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

LambdaConvexFunction half_square() { return LambdaConvexFunction::quadratic(Matrix::Identity(1, 1), Vector::Zero(1)); }

Matrix pm_one() {
  Matrix a(2, 1);
  a << 1, -1;
  return a;
}

// Spectral resolvent of ½<Qx,x> + <b,x> + c, independent of the library's solve.
Vector spectral_resolvent(const Matrix& Q, const Vector& b, double tau, const Vector& x) {
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(Q);
  const Vector shrink = (1.0 / (1.0 + tau * eig.eigenvalues().array())).matrix();
  return eig.eigenvectors() * shrink.asDiagonal() * eig.eigenvectors().transpose() * (x - tau * b);
}

void criterion_1() {
  Rng rng(101);
  double worst_quad = 0.0;
  double worst_decomp = 0.0;
  double worst_newton = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index d = 1 + trial % 4;
    const LambdaConvexFunction f = random_function(Kind::kQuadratic, d, rng);
    const auto& p = f.as<QuadraticParams>();
    const double tau = random_tau(f, rng);
    const Vector x = random_vector(d, 2.0, rng);
    const ProxResult r = prox(f, tau, x);
    const Vector j = spectral_resolvent(p.Q, p.b, tau, x);
    const double fj = 0.5 * j.dot(p.Q * j) + p.b.dot(j) + p.c;
    const double env = fj + (x - j).squaredNorm() / (2.0 * tau);
    worst_quad = std::max({worst_quad, (r.resolvent_point - j).cwiseAbs().maxCoeff(), std::abs(r.envelope_value - env),
                           (r.moreau_gradient - (x - j) / tau).cwiseAbs().maxCoeff()});

    const LambdaConvexFunction m = random_function(Kind::kMaxLinear, d, rng);
    const Vector y = random_vector(d, 2.0, rng);
    const ProxResult rm = prox(m, tau, y);
    // Π_K computed through the projection of y/τ onto the hull.
    const Vector pk = project_onto_hull(m.as<MaxLinearParams>().vectors.transpose(), y / tau).point;
    worst_decomp = std::max(worst_decomp, (y - rm.resolvent_point - tau * pk).norm());

    const LambdaConvexFunction l = random_function(Kind::kLogSumExp, d, rng);
    const ProxResult rl = prox(l, tau, y);
    const Vector residual = rl.resolvent_point + tau * smooth_gradient(l, rl.resolvent_point) - y;
    worst_newton = std::max({worst_newton, rl.solver_residual, residual.norm()});
  }
  const bool ok = worst_quad <= 1e-10 && worst_decomp <= 1e-9 && worst_newton <= 1e-10;
  report(1, ok,
         "proximal identities: quadratic max error " + fmt("%.3g", worst_quad) + " (<= 1e-10), decomposition " +
             fmt("%.3g", worst_decomp) + " (<= 1e-9), Newton residual " + fmt("%.3g", worst_newton) + " (<= 1e-10)");
}

void criterion_2() {
  VerifyOptions options;
  options.scope = "convex_core";
  options.samples = 1000;
  options.seed = 202;
  const VerifyReport r = verify_suite(options);
  int violations = 0;
  std::string detail;
  for (const char* name : {"domain_gradient_identity", "slope_chain", "resolvent_lipschitz", "envelope_gradient_lipschitz"}) {
    const InvariantResult* res = r.find(name);
    violations += res->failures;
    detail += std::string(name) + " " + std::to_string(res->failures) + "/" + std::to_string(res->trials) + ", ";
  }
  detail.resize(detail.size() - 2);
  report(2, violations == 0, "resolvent calculus on 1000 samples per kind: " + detail);
}

void criterion_3() {
  Rng rng(303);
  constexpr Kind kinds[] = {Kind::kQuadratic, Kind::kMaxLinear, Kind::kLogSumExp};
  int lemma_violations = 0;
  int coarse_violations = 0;
  double worst_ratio = 0.0;
  std::FILE* csv = std::fopen("acceptance_interpolation.csv", "w");
  if (csv != nullptr) std::fprintf(csv, "instance,kind,tau,delta,action,bound,action_tau,tau_bound\n");
  for (int i = 0; i < 200; ++i) {
    const Kind kind = kinds[i % 3];
    const LambdaConvexFunction f = random_function(kind, 1 + (i / 3) % 3, rng);
    double tau = random_tau(f, rng);
    if (1.0 + tau * f.lambda() < 0.5) tau = 0.5 / (1.0 + std::abs(f.lambda()));
    const double delta = std::exp(std::uniform_real_distribution<double>(std::log(0.05), std::log(2.0))(rng));
    const Vector x0 = random_vector(f.dim(), 1.5, rng);
    const Vector xd = random_vector(f.dim(), 1.5, rng);
    const double a = discrete_action(f, interpolation_path(f, tau, delta, x0, xd, 256)).total;
    const double b = interpolation_bound(f, tau, delta, x0, xd);
    const double at = discrete_action(f, interpolation_path(f, tau, tau, x0, xd, 256)).total;
    const double bt = tau_interpolation_bound(f, tau, x0, xd);
    const double tol = 1e-9 * (1.0 + b);
    lemma_violations += a > b + tol;
    coarse_violations += at > bt + 1e-9 * (1.0 + bt);
    worst_ratio = std::max({worst_ratio, a / b, at / bt});
    if (csv != nullptr) {
      std::fprintf(csv, "%d,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, std::string(kind_name(kind)).c_str(), tau,
                   delta, a, b, at, bt);
    }
  }
  if (csv != nullptr) std::fclose(csv);
  report(3, lemma_violations == 0 && coarse_violations == 0,
         "interpolation bounds on 200 instances (M = 256): " + std::to_string(lemma_violations) + " general and " +
             std::to_string(coarse_violations) + " delta = tau violations, largest action/bound " +
             fmt("%.3g", worst_ratio) + " (per-instance rows in acceptance_interpolation.csv)");
}

struct OracleInstance {
  std::string label;
  LambdaConvexFunction f;
  Vector x0, xd;
  GridOracleConfig grid;
};

GridOracleConfig grid_1d(double lo, double hi, double h, int steps, int radius) {
  GridOracleConfig g;
  g.lo = vec({lo});
  g.hi = vec({hi});
  g.points = {static_cast<int>(std::lround((hi - lo) / h)) + 1};
  g.time_steps = steps;
  g.neighborhood = radius;
  return g;
}

GridOracleConfig grid_2d(double lo, double hi, double h, int steps, int radius) {
  GridOracleConfig g;
  g.lo = vec({lo, lo});
  g.hi = vec({hi, hi});
  const int n = static_cast<int>(std::lround((hi - lo) / h)) + 1;
  g.points = {n, n};
  g.time_steps = steps;
  g.neighborhood = radius;
  g.node_budget = 200'000'000;
  return g;
}

void criterion_4() {
  const MinimizeConfig cfg = MinimizeConfig::defaults(1.0);
  const MinimizeResult q = minimize_action(half_square(), vec({1}), vec({2}), 1.0, cfg);
  const double q_exact = closed_form_value(ClosedFormCase::kQuadratic1d, vec({1}), vec({2}), 1.0);
  const double q_rel = std::abs(q.value_true - q_exact) / q_exact;
  const MinimizeResult z = minimize_action(LambdaConvexFunction::zero(2), vec({0, 0}), vec({1, -0.5}), 1.0, cfg);
  const double z_exact = closed_form_value(ClosedFormCase::kFree, vec({0, 0}), vec({1, -0.5}), 1.0);
  const double z_rel = std::abs(z.value_true - z_exact) / z_exact;

  Matrix tri(3, 2);
  tri << 1, 0, -0.5, 0.8, -0.5, -0.8;
  Matrix lse(3, 2);
  lse << 1, 1, -1, 0.5, 0, -1;
  std::vector<OracleInstance> instances{
      {"zero 1-d", LambdaConvexFunction::zero(1), vec({-1}), vec({1}), grid_1d(-2, 2, 0.01, 20, 24)},
      {"half square 1-d", half_square(), vec({1}), vec({2}), grid_1d(0, 3, 0.01, 20, 24)},
      {"abs 1-d", LambdaConvexFunction::max_linear(pm_one()), vec({-1}), vec({1}), grid_1d(-2, 2, 0.01, 20, 24)},
      {"log-sum-exp 1-d", LambdaConvexFunction::log_sum_exp(pm_one(), 0.1), vec({-1}), vec({1}),
       grid_1d(-2, 2, 0.01, 20, 24)},
      {"interval indicator", LambdaConvexFunction::indicator(Box{vec({-1}), vec({1})}), vec({-0.5}), vec({1}),
       grid_1d(-2, 2, 0.01, 20, 24)},
      {"max of three planes 2-d", LambdaConvexFunction::max_linear(tri), vec({-0.5, -0.5}), vec({0.75, 0.5}),
       grid_2d(-1.5, 1.5, 0.025, 10, 10)},
      {"ball indicator 2-d", LambdaConvexFunction::indicator(Ball{Vector::Zero(2), 1.0}), vec({-1, 0}),
       vec({0.5, 0.75}), grid_2d(-1.5, 1.5, 0.025, 10, 10)},
      {"anisotropic quadratic 2-d",
       LambdaConvexFunction::quadratic((Matrix(2, 2) << 1, 0, 0, 2).finished(), vec({0.25, 0})), vec({0.5, -0.5}),
       vec({-0.5, 0.5}), grid_2d(-1.5, 1.5, 0.025, 10, 10)},
      {"box indicator 2-d", LambdaConvexFunction::indicator(Box{vec({-1, -0.5}), vec({1, 0.5})}), vec({-1, -0.5}),
       vec({1, 0.5}), grid_2d(-1.5, 1.5, 0.025, 10, 10)},
      {"log-sum-exp 2-d", LambdaConvexFunction::log_sum_exp(lse, 0.2), vec({-0.5, 0}), vec({0.5, 0.25}),
       grid_2d(-1.5, 1.5, 0.025, 10, 10)},
  };
  int disagreements = 0;
  std::string worst_label;
  double worst_excess = -kInfinity;
  for (const OracleInstance& inst : instances) {
    const MinimizeResult r = minimize_action(inst.f, inst.x0, inst.xd, 1.0, cfg);
    const GridOracleResult g = grid_oracle(inst.f, inst.x0, inst.xd, 1.0, inst.grid);
    const double allowed = 0.05 * std::abs(g.value) + g.error_bound;
    const double excess = std::abs(r.value_true - g.value) - allowed;
    std::printf("  oracle %-26s minimize %.6f grid %.6f bound %.4f\n", inst.label.c_str(), r.value_true, g.value,
                g.error_bound);
    if (excess > worst_excess) {
      worst_excess = excess;
      worst_label = inst.label;
    }
    disagreements += !(excess <= 0.0);
  }
  report(4, q_rel <= 0.01 && z_rel <= 0.001 && disagreements == 0,
         "quadratic relative error " + fmt("%.3g", q_rel) + " (<= 1%), free case " + fmt("%.3g", z_rel) +
             " (<= 0.1%), grid disagreements " + std::to_string(disagreements) + "/10 (tightest: " + worst_label + ")");
}

void criterion_5() {
  const MoscoFamily fam = family_logsumexp_to_max(pm_one(), default_epsilon_schedule(), vec({-1}), vec({1}));
  const ValueReport v = gamma_value_experiment(fam, 1.0, MinimizeConfig::defaults(1.0));
  const ResolventTable t = resolvent_convergence_table(fam, 0.5, fam.probes);
  double worst_final = 0.0;
  for (double g : t.final_gaps) worst_final = std::max(worst_final, g);
  bool flagged = !v.limit_converged;
  for (const ValueRow& row : v.rows) flagged = flagged || row.flagged;
  report(5, v.gaps_decreasing && v.final_relative_gap <= 0.02 && worst_final <= 1e-2 && !flagged,
         "log-sum-exp to max: limit value " + fmt("%.6f", v.limit_value) + ", final relative gap " +
             fmt("%.3g", v.final_relative_gap) + " (<= 2%), gaps eventually decreasing " +
             (v.gaps_decreasing ? "yes" : "no") + ", worst final resolvent gap " + fmt("%.3g", worst_final) +
             " (<= 1e-2)");
}

void criterion_6() {
  const MinimizeConfig cfg = MinimizeConfig::defaults(1.0);
  const MoscoFamily lse = family_logsumexp_to_max(pm_one(), default_epsilon_schedule(), vec({-1}), vec({1}));
  const Path lse_gamma = minimize_action(lse.limit.f, lse.limit.x0, lse.limit.x1, 1.0, cfg).path;
  const LimsupReport a = gamma_limsup_experiment(lse, lse_gamma, {0.2, 0.05});

  const MoscoFamily pen = family_penalty_to_indicator(Ball{Vector::Zero(2), 1.0}, default_penalty_schedule(),
                                                      vec({-0.6, 0.1}), vec({0.5, 0.3}));
  const Path pen_gamma = minimize_action(pen.limit.f, pen.limit.x0, pen.limit.x1, 1.0, cfg).path;
  const LimsupReport b = gamma_limsup_experiment(pen, pen_gamma, {0.2, 0.05});

  const MoscoFamily constant = family_constant(half_square(), vec({1}), vec({2}), 1);
  const Path c_gamma = minimize_action(half_square(), vec({1}), vec({2}), 1.0, cfg).path;
  const LimsupReport c = gamma_limsup_experiment(constant, c_gamma, {0.2, 0.05, 0.0125});
  const bool shrinking = std::abs(c.rows[1].gap) < std::abs(c.rows[0].gap) && std::abs(c.rows[2].gap) < std::abs(c.rows[1].gap);
  int violations = 0;
  for (const auto* r : {&a, &b, &c}) {
    for (const LimsupRow& row : r->rows) violations += !row.satisfied;
  }
  report(6, violations == 0 && shrinking,
         "recovery bound violations " + std::to_string(violations) + "/" +
             std::to_string(a.rows.size() + b.rows.size() + c.rows.size()) + ", constant-family gaps " +
             fmt("%.3g", c.rows[0].gap) + fmt(" > %.3g", c.rows[1].gap) + fmt(" > %.3g", c.rows[2].gap));
}

Path exp_path(int n) {
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  Matrix x(1, n + 1);
  for (int i = 0; i <= n; ++i) {
    t[static_cast<std::size_t>(i)] = static_cast<double>(i) / n;
    x(0, i) = std::exp(t[static_cast<std::size_t>(i)]);
  }
  return Path(t, x);
}

void criterion_7() {
  const auto f = half_square();
  auto residual = [&](int n) {
    const Path p = exp_path(n);
    const double total = discrete_action(f, p, Quadrature::kNodeTrapezoid).total;
    return std::abs(alt_action(f, p) - (total - 2.0 * evaluate(f, p.back()) + 2.0 * evaluate(f, p.front())));
  };
  const double r128 = residual(128);
  const double r256 = residual(256);
  const double r512 = residual(512);
  const double order = std::min(std::log2(r128 / r256), std::log2(r256 / r512));
  const double value_err = std::abs(discrete_action(f, exp_path(512), Quadrature::kNodeTrapezoid).total - (std::exp(2.0) - 1.0));

  Rng rng(707);
  int upper_violations = 0;
  constexpr Kind kinds[] = {Kind::kQuadratic, Kind::kMaxLinear, Kind::kLogSumExp, Kind::kIndicator,
                            Kind::kDistancePenalty};
  for (int i = 0; i < 500; ++i) {
    const LambdaConvexFunction g = random_function(kinds[i % 5], 1 + (i / 5) % 3, rng);
    std::vector<Vector> nodes;
    Vector previous = random_domain_point(g, rng);
    nodes.push_back(previous);
    for (int k = 0; k < 4; ++k) {
      const Vector next = random_domain_point(g, rng);
      for (int r = 1; r <= 10; ++r) nodes.push_back(previous + (next - previous) * (r / 10.0));
      previous = next;
    }
    std::vector<double> t(nodes.size());
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = static_cast<double>(j) / (t.size() - 1);
    const UpperGradientCheck u = upper_gradient_residual(g, Path(t, nodes));
    upper_violations += u.residual < -u.quadrature_bound;
  }

  Matrix points(2, 1);
  points << 1, -0.5;
  std::vector<MoscoFamily> families{
      family_logsumexp_to_max(pm_one(), default_epsilon_schedule(), vec({-1}), vec({1})),
      family_logsumexp_to_max(permutation_vectors(points), default_epsilon_schedule(), vec({-0.5, -0.5}),
                              vec({0.5, 0.5})),
      family_penalty_to_indicator(Ball{Vector::Zero(2), 1.0}, default_penalty_schedule(), vec({-0.6, 0.1}),
                                  vec({0.5, 0.3})),
  };
  int liminf_failures = 0;
  std::size_t probes = 0;
  for (const MoscoFamily& fam : families) {
    for (double drift : {0.0, 0.3}) {
      const LiminfReport r = slope_liminf_check(fam, fam.probes, drift);
      for (const LiminfRow& row : r.rows) liminf_failures += !row.satisfied;
      probes += r.rows.size();
    }
  }
  report(7, order >= 0.9 && value_err <= 1e-3 && upper_violations == 0 && liminf_failures == 0,
         "null-Lagrangian order " + fmt("%.3f", order) + " (>= 0.9), e^t action error " + fmt("%.2g", value_err) +
             " (<= 1e-3), upper-gradient violations " + std::to_string(upper_violations) +
             "/500, slope liminf failures " + std::to_string(liminf_failures) + "/" + std::to_string(probes));
}

void criterion_8() {
  VerifyOptions options;
  options.scope = "all";
  options.seed = 0;
  const VerifyReport first = verify_suite(options);
  const std::string a = to_json(first).dump();
  const std::string b = to_json(verify_suite(options)).dump();

  const MoscoFamily fam = family_logsumexp_to_max(pm_one(), default_epsilon_schedule(), vec({-1}), vec({1}));
  MinimizeConfig cfg = MinimizeConfig::defaults(1.0);
  cfg.intervals = 128;
  auto run = [&] {
    const ResolventTable t = resolvent_convergence_table(fam, 0.5, fam.probes);
    const ValueReport v = gamma_value_experiment(fam, 1.0, cfg);
    const LimsupReport l = gamma_limsup_experiment(fam, v.limit_path, {0.2, 0.05});
    const LiminfReport i = slope_liminf_check(fam, fam.probes, 0.3);
    return to_csv(t) + to_csv(v) + to_csv(l) + to_csv(i) + to_json(t).dump() + to_json(v).dump() +
           to_json(l).dump() + to_json(i).dump() + to_csv(v.limit_path);
  };
  const bool experiments_equal = run() == run();
  report(8, a == b && experiments_equal && first.passed(),
         std::string("verify --seed 0 identical: ") + (a == b ? "yes" : "no") + " (" +
             std::to_string(first.total_failures()) + " failures), experiment reruns identical: " +
             (experiments_equal ? "yes" : "no"));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                    criterion_5, criterion_6, criterion_7, criterion_8};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion: exception %s\n", e.what());
      ++failed;
    }
  }
  std::printf("%d of 8 criteria failed\n", failed);
  return failed;
}
