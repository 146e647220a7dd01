// gammalab: command-line front end.
//
//   gammalab prox --function '{"kind":"Quadratic","params":{"Q":[[1]]}}' --tau 1 --x 2
//   gammalab minimize --config instance.json --csv-dir out
//   gammalab gamma --config family.json --experiment limsup
//   gammalab verify --scope all --seed 0
//
// Every subcommand reads an optional JSON config; flags override its keys.
// JSON goes to stdout, CSV files to --csv-dir (default: current directory).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gammalab/experiments.h"
#include "gammalab/kernels.h"
#include "gammalab/verify.h"

namespace fs = std::filesystem;
using namespace gammalab;

namespace {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return Json::parse(in);
}

// Inline JSON, or @file.
Json parse_json_arg(const std::string& text) {
  if (!text.empty() && text.front() == '@') return read_json_file(text.substr(1));
  return Json::parse(text);
}

// "1,2.5,-3" or a JSON array.
Json parse_vector_arg(const std::string& text) {
  if (!text.empty() && text.front() == '[') return Json::parse(text);
  Json out = Json::array();
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

struct Common {
  std::string config;
  std::string csv_dir = ".";
};

struct Overrides {
  std::vector<std::pair<std::string, std::string>> vectors;
  std::vector<std::pair<std::string, std::string>> json;
  std::vector<std::pair<std::string, double>> numbers;
  std::vector<std::pair<std::string, std::string>> strings;
};

class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& help) : app_(parent.add_subcommand(name, help)) {
    app_->add_option("--config", common_.config, "JSON config file");
    app_->add_option("--csv-dir", common_.csv_dir, "output directory for CSV files");
  }

  CLI::App* app() { return app_; }

  void vector_flag(const std::string& key, const std::string& help) {
    slots_.push_back(std::make_unique<std::string>());
    app_->add_option("--" + key, *slots_.back(), help)->each([this, key](const std::string& v) { over_.vectors.emplace_back(key, v); });
  }
  void json_flag(const std::string& key, const std::string& help) {
    slots_.push_back(std::make_unique<std::string>());
    app_->add_option("--" + key, *slots_.back(), help)->each([this, key](const std::string& v) { over_.json.emplace_back(key, v); });
  }
  void number_flag(const std::string& key, const std::string& help) {
    slots_.push_back(std::make_unique<std::string>());
    app_->add_option("--" + key, *slots_.back(), help)->each([this, key](const std::string& v) {
      over_.numbers.emplace_back(key, std::stod(v));
    });
  }
  void string_flag(const std::string& key, const std::string& help) {
    slots_.push_back(std::make_unique<std::string>());
    app_->add_option("--" + key, *slots_.back(), help)->each([this, key](const std::string& v) { over_.strings.emplace_back(key, v); });
  }

  Json config() const {
    Json cfg = common_.config.empty() ? Json::object() : read_json_file(common_.config);
    for (const auto& [k, v] : over_.vectors) cfg[k] = parse_vector_arg(v);
    for (const auto& [k, v] : over_.json) cfg[k] = parse_json_arg(v);
    for (const auto& [k, v] : over_.numbers) cfg[k] = v;
    for (const auto& [k, v] : over_.strings) cfg[k] = v;
    return cfg;
  }

  fs::path csv_path(const std::string& file) const {
    fs::create_directories(common_.csv_dir);
    return fs::path(common_.csv_dir) / file;
  }

 private:
  CLI::App* app_;
  Common common_;
  Overrides over_;
  std::vector<std::unique_ptr<std::string>> slots_;
};

const Json& require(const Json& cfg, const char* key) {
  if (!cfg.contains(key)) throw InvalidArgument(std::string("missing required setting '") + key + "'");
  return cfg.at(key);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << text;
}

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

int run_prox(const Json& cfg) {
  const LambdaConvexFunction f = function_from_json(require(cfg, "function"));
  const ProxResult r = prox(f, require(cfg, "tau").get<double>(), vector_from_json(require(cfg, "x")));
  print(to_json(r));
  return 0;
}

int run_slope(const Json& cfg) {
  const LambdaConvexFunction f = function_from_json(require(cfg, "function"));
  const Vector x = vector_from_json(require(cfg, "x"));
  const double s = slope(f, x);
  Json out{{"slope", number_to_json(s)}};
  if (std::isfinite(s)) out["min_norm_subgradient"] = to_json(min_norm_subgradient(f, x));
  if (cfg.value("resolvent_estimate", false)) {
    const ResolventSlope rs = slope_from_resolvents(f, x);
    out["resolvent_estimate"] = {{"last", rs.last}, {"extrapolated", rs.extrapolated}, {"monotone", rs.monotone}};
  }
  print(out);
  return 0;
}

int run_interpolate(const Command& cmd, const Json& cfg) {
  const LambdaConvexFunction f = function_from_json(require(cfg, "function"));
  const double tau = require(cfg, "tau").get<double>();
  const double delta = cfg.value("delta", tau);
  const Vector x0 = vector_from_json(require(cfg, "x0"));
  const Vector xd = vector_from_json(require(cfg, "xd"));
  const int samples = cfg.value("M", 256);
  const Path path = interpolation_path(f, tau, delta, x0, xd, samples);
  const fs::path csv = cmd.csv_path("interpolation_path.csv");
  write_text(csv, to_csv(path));
  Json out{{"action", to_json(discrete_action(f, path))},
           {"bound", number_to_json(interpolation_bound(f, tau, delta, x0, xd))},
           {"csv", csv.string()}};
  if (delta == tau) out["tau_bound"] = number_to_json(tau_interpolation_bound(f, tau, x0, xd));
  print(out);
  return 0;
}

int run_minimize(const Command& cmd, const Json& cfg) {
  const LambdaConvexFunction f = function_from_json(require(cfg, "function"));
  const double delta = cfg.value("delta", 1.0);
  const Vector x0 = vector_from_json(require(cfg, "x0"));
  const Vector xd = vector_from_json(require(cfg, "xd"));
  MinimizeConfig mc = minimize_config_from_json(cfg.value("minimize", Json()), delta);
  if (cfg.contains("N")) mc.intervals = cfg.at("N").get<int>();
  const MinimizeResult r = minimize_action(f, x0, xd, delta, mc);
  const fs::path csv = cmd.csv_path("minimize_path.csv");
  write_text(csv, to_csv(r.path));
  Json out = summary_json(r, mc);
  out["csv"] = csv.string();
  if (cfg.contains("closed_form")) {
    out["closed_form"] = closed_form_value(parse_closed_form_case(cfg.at("closed_form").get<std::string>()), x0, xd, delta);
  }
  if (cfg.contains("grid")) {
    const Json& g = cfg.at("grid");
    GridOracleConfig gc;
    gc.lo = vector_from_json(g.at("lo"));
    gc.hi = vector_from_json(g.at("hi"));
    gc.points = g.at("points").get<std::vector<int>>();
    gc.time_steps = g.value("time_steps", gc.time_steps);
    gc.neighborhood = g.value("neighborhood", gc.neighborhood);
    const GridOracleResult oracle = grid_oracle(f, x0, xd, delta, gc);
    out["grid_oracle"] = {{"value", number_to_json(oracle.value)}, {"error_bound", oracle.error_bound}};
  }
  print(out);
  return 0;
}

int run_gamma(const Command& cmd, const Json& cfg) {
  const MoscoFamily family = family_from_json(require(cfg, "family"));
  const std::string experiment = cfg.value("experiment", std::string("all"));
  const bool all = experiment == "all";
  if (!all && experiment != "resolvent" && experiment != "value" && experiment != "limsup" && experiment != "liminf") {
    throw InvalidArgument("unknown experiment '" + experiment + "'");
  }
  const double delta = cfg.value("delta", 1.0);
  Json out{{"family", family.name}, {"slope_bound_S", number_to_json(family.slope_bound_S)}};
  Json csvs = Json::object();
  auto emit = [&](const std::string& name, const std::string& csv, Json json) {
    const fs::path path = cmd.csv_path(family.name + "_" + name + ".csv");
    write_text(path, csv);
    csvs[name] = path.string();
    out[name] = std::move(json);
  };
  if (all || experiment == "resolvent") {
    const ResolventTable t = resolvent_convergence_table(family, cfg.value("tau", 0.5), family.probes);
    emit("resolvent", to_csv(t), to_json(t));
  }
  if (all || experiment == "liminf") {
    const LiminfReport r = slope_liminf_check(family, family.probes, cfg.value("drift", 0.0));
    emit("liminf", to_csv(r), to_json(r));
  }
  const MinimizeConfig mc = minimize_config_from_json(cfg.value("minimize", Json()), delta);
  std::optional<Path> limit_path;
  if (all || experiment == "value") {
    const ValueReport r = gamma_value_experiment(family, delta, mc);
    limit_path = r.limit_path;
    emit("value", to_csv(r), to_json(r));
  }
  if (all || experiment == "limsup") {
    const std::vector<double> taus = cfg.value("taus", std::vector<double>{0.2, 0.05});
    const std::string which = cfg.value("gamma", std::string("minimizer"));
    Path gamma = Path::straight(family.limit.x0, family.limit.x1, 0.0, 1.0, mc.intervals);
    if (which == "minimizer") {
      if (!limit_path) limit_path = minimize_action(family.limit.f, family.limit.x0, family.limit.x1, 1.0, mc).path;
      gamma = limit_path->rescaled(0.0, 1.0);
    } else if (which != "straight") {
      throw InvalidArgument("gamma must be 'minimizer' or 'straight'");
    }
    const LimsupReport r = gamma_limsup_experiment(family, gamma, taus);
    emit("limsup", to_csv(r), to_json(r));
  }
  out["csv"] = std::move(csvs);
  print(out);
  return 0;
}

int run_verify(const Command& cmd, const Json& cfg) {
  VerifyOptions options;
  options.scope = cfg.value("scope", options.scope);
  options.seed = cfg.value("seed", options.seed);
  options.samples = cfg.value("samples", options.samples);
  options.plant_lambda_fault = cfg.value("plant_lambda_fault", false);
  const VerifyReport report = verify_suite(options);
  std::ostringstream csv;
  csv << "module,invariant,trials,failures,worst_margin\n";
  for (const InvariantResult& r : report.results) {
    csv << r.module << ',' << r.name << ',' << r.trials << ',' << r.failures << ',' << format_double(r.worst_margin)
        << '\n';
  }
  write_text(cmd.csv_path("verify.csv"), csv.str());
  print(to_json(report));
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"λ-convex proximal calculus, action functionals and Γ-convergence experiments"};
  app.require_subcommand(1);
  std::string simd;
  app.add_option("--simd", simd, "kernel backend: auto, scalar or avx2");

  Command prox_cmd(app, "prox", "resolvent, envelope and envelope gradient");
  prox_cmd.json_flag("function", "function descriptor (JSON or @file)");
  prox_cmd.number_flag("tau", "step size");
  prox_cmd.vector_flag("x", "point");

  Command slope_cmd(app, "slope", "metric slope and minimal-norm subgradient");
  slope_cmd.json_flag("function", "function descriptor (JSON or @file)");
  slope_cmd.vector_flag("x", "point");

  Command interp_cmd(app, "interpolate", "resolvent interpolation path and its action bounds");
  interp_cmd.json_flag("function", "function descriptor (JSON or @file)");
  interp_cmd.number_flag("tau", "resolvent step");
  interp_cmd.number_flag("delta", "duration (default tau)");
  interp_cmd.vector_flag("x0", "start point");
  interp_cmd.vector_flag("xd", "end point");
  interp_cmd.number_flag("M", "number of intervals");

  Command min_cmd(app, "minimize", "approximate minimizer of the endpoint-constrained action");
  min_cmd.json_flag("function", "function descriptor (JSON or @file)");
  min_cmd.number_flag("delta", "duration");
  min_cmd.vector_flag("x0", "start point");
  min_cmd.vector_flag("xd", "end point");
  min_cmd.number_flag("N", "intervals");
  min_cmd.json_flag("minimize", "optimizer settings (JSON or @file)");
  min_cmd.string_flag("closed_form", "free | quadratic_1d reference value");

  Command gamma_cmd(app, "gamma", "convergence experiments along a family");
  gamma_cmd.json_flag("family", "family descriptor (JSON or @file)");
  gamma_cmd.string_flag("experiment", "resolvent | value | limsup | liminf | all");
  gamma_cmd.number_flag("tau", "resolvent step for the resolvent table");
  gamma_cmd.number_flag("delta", "duration for the value experiment");
  gamma_cmd.number_flag("drift", "endpoint drift for the slope check");
  gamma_cmd.vector_flag("taus", "recovery steps");
  gamma_cmd.string_flag("gamma", "minimizer | straight");
  gamma_cmd.json_flag("minimize", "optimizer settings (JSON or @file)");

  Command verify_cmd(app, "verify", "randomized invariant suites");
  verify_cmd.string_flag("scope", "all | convex_core | action_path | path_opt | gamma_lab");
  verify_cmd.number_flag("seed", "random seed");
  verify_cmd.number_flag("samples", "trials per kind and invariant");
  bool plant = false;
  verify_cmd.app()->add_flag("--plant-lambda-fault", plant, "report λ + 1 for every function");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!simd.empty()) kernels::select(simd);
    if (prox_cmd.app()->parsed()) return run_prox(prox_cmd.config());
    if (slope_cmd.app()->parsed()) return run_slope(slope_cmd.config());
    if (interp_cmd.app()->parsed()) return run_interpolate(interp_cmd, interp_cmd.config());
    if (min_cmd.app()->parsed()) return run_minimize(min_cmd, min_cmd.config());
    if (gamma_cmd.app()->parsed()) return run_gamma(gamma_cmd, gamma_cmd.config());
    if (verify_cmd.app()->parsed()) {
      Json cfg = verify_cmd.config();
      if (cfg.contains("seed")) cfg["seed"] = static_cast<std::uint64_t>(cfg["seed"].get<double>());
      if (cfg.contains("samples")) cfg["samples"] = static_cast<int>(cfg["samples"].get<double>());
      if (plant) cfg["plant_lambda_fault"] = true;
      return run_verify(verify_cmd, cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "gammalab: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
