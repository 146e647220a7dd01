#include "gammalab/experiments.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gammalab {
namespace {

std::string vector_cell(const Vector& v) {
  std::string out;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k > 0) out += ' ';
    out += format_double(v(k));
  }
  return out;
}

std::string bool_cell(bool b) { return b ? "1" : "0"; }

}  // namespace

bool eventually_decreasing(const std::vector<double>& seq, int window, double slack, double floor) {
  const auto n = static_cast<int>(seq.size());
  for (int i = std::max(1, n - window); i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (seq[u] > (1.0 + slack) * seq[u - 1] + floor) return false;
  }
  return true;
}

ResolventTable resolvent_convergence_table(const MoscoFamily& family, double tau, const std::vector<Vector>& probes) {
  if (!(tau > 0.0) || 1.0 + tau * family.uniform_lambda <= 0.0) {
    throw InadmissibleStep("resolvent table: tau not admissible for the family");
  }
  ResolventTable table;
  table.tau = tau;
  std::vector<Vector> limit_points;
  for (const Vector& p : probes) limit_points.push_back(prox(family.limit.f, tau, p).resolvent_point);
  std::vector<std::vector<double>> per_probe(probes.size());
  for (std::size_t h = 0; h < family.members.size(); ++h) {
    const FamilyMember& m = family.members[h];
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const double gap = (prox(m.f, tau, probes[k]).resolvent_point - limit_points[k]).norm();
      table.rows.push_back({h, m.parameter, k, probes[k], gap});
      per_probe[k].push_back(gap);
    }
  }
  for (const auto& gaps : per_probe) {
    table.final_gaps.push_back(gaps.empty() ? 0.0 : gaps.back());
    const bool ok = eventually_decreasing(gaps);
    table.probe_decreasing.push_back(ok);
    table.all_decreasing = table.all_decreasing && ok;
  }
  return table;
}

ValueReport gamma_value_experiment(const MoscoFamily& family, double delta, const MinimizeConfig& cfg) {
  const MinimizeResult limit = minimize_action(family.limit.f, family.limit.x0, family.limit.x1, delta, cfg);
  ValueReport report{delta, {}, limit.value_true, limit.converged, true, 0.0, limit.path};
  std::vector<double> gaps;
  for (std::size_t h = 0; h < family.members.size(); ++h) {
    const FamilyMember& m = family.members[h];
    const MinimizeResult r = minimize_action(m.f, m.x0, m.x1, delta, cfg);
    ValueRow row;
    row.member = h;
    row.parameter = m.parameter;
    row.value = r.value_true;
    row.gap = std::abs(r.value_true - limit.value_true);
    row.relative_gap = row.gap / std::max(1.0, std::abs(limit.value_true));
    row.iterations = r.iterations;
    row.converged = r.converged;
    row.flagged = !r.converged;
    gaps.push_back(row.gap);
    report.rows.push_back(row);
  }
  report.gaps_decreasing = eventually_decreasing(gaps);
  report.final_relative_gap = report.rows.empty() ? 0.0 : report.rows.back().relative_gap;
  return report;
}

LimsupReport gamma_limsup_experiment(const MoscoFamily& family, const Path& gamma, const std::vector<double>& taus) {
  LimsupReport report;
  report.gamma_action = discrete_action(family.limit.f, gamma).total;
  if (!std::isfinite(report.gamma_action)) throw DomainError("limsup experiment: gamma has infinite action");
  report.slope_bound_S = family.slope_bound_S;
  report.lambda = family.uniform_lambda;
  const double s2 = family.slope_bound_S * family.slope_bound_S;
  double tolerance = 0.0;
  for (double tau : taus) {
    const double contraction = 1.0 / (1.0 + tau * family.uniform_lambda);
    const double bound = contraction * contraction * (report.gamma_action + 472.0 * tau * s2);
    const double tol = 1e-9 * (1.0 + bound);
    tolerance = std::max(tolerance, tol);
    for (std::size_t h = 0; h < family.members.size(); ++h) {
      const FamilyMember& m = family.members[h];
      const int patch = default_patch_samples(tau, gamma.intervals());
      const RecoveryConstruction rc = recovery_construction(m.f, tau, gamma, m.x0, m.x1, patch);
      LimsupRow row;
      row.member = h;
      row.parameter = m.parameter;
      row.tau = tau;
      row.action_extended = discrete_action(m.f, rc.extended).total;
      row.action_rescaled = discrete_action(m.f, rc.rescaled).total;
      row.bound = bound;
      row.gap = row.action_extended - report.gamma_action;
      row.junction_gap = rc.junction_gap;
      row.satisfied = row.action_extended <= bound + tol;
      report.all_satisfied = report.all_satisfied && row.satisfied;
      report.rows.push_back(row);
    }
  }
  report.tolerance = tolerance;
  return report;
}

LiminfReport slope_liminf_check(const MoscoFamily& family, const std::vector<Vector>& probes, double drift,
                                int window) {
  LiminfReport report;
  report.drift = drift;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    LiminfRow row;
    row.probe = k;
    row.point = probes[k];
    row.limit_slope = slope(family.limit.f, probes[k]);
    for (const FamilyMember& m : family.members) {
      const Vector xh = probes[k] + Vector::Constant(probes[k].size(), drift * m.scale);
      row.member_slopes.push_back(slope(m.f, xh));
    }
    const auto n = row.member_slopes.size();
    const std::size_t first = n > static_cast<std::size_t>(window) ? n - static_cast<std::size_t>(window) : 0;
    row.tail_liminf = kInfinity;
    for (std::size_t i = first; i < n; ++i) row.tail_liminf = std::min(row.tail_liminf, row.member_slopes[i]);
    if (std::isinf(row.limit_slope)) {
      row.satisfied = n > 0;
      for (std::size_t i = std::max<std::size_t>(first, 1); i < n; ++i) {
        row.satisfied = row.satisfied && row.member_slopes[i] > row.member_slopes[i - 1];
      }
    } else {
      row.satisfied = row.tail_liminf >= row.limit_slope - 1e-6;
    }
    report.all_satisfied = report.all_satisfied && row.satisfied;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string to_csv(const ResolventTable& t) {
  std::ostringstream out;
  out << "member,parameter,probe,point,tau,gap\n";
  for (const ResolventRow& r : t.rows) {
    out << r.member << ',' << format_double(r.parameter) << ',' << r.probe << ',' << vector_cell(r.point) << ','
        << format_double(t.tau) << ',' << format_double(r.gap) << '\n';
  }
  return out.str();
}

std::string to_csv(const ValueReport& r) {
  std::ostringstream out;
  out << "member,parameter,value,gap,relative_gap,iterations,converged,flagged\n";
  for (const ValueRow& row : r.rows) {
    out << row.member << ',' << format_double(row.parameter) << ',' << format_double(row.value) << ','
        << format_double(row.gap) << ',' << format_double(row.relative_gap) << ',' << row.iterations << ','
        << bool_cell(row.converged) << ',' << bool_cell(row.flagged) << '\n';
  }
  out << "limit,," << format_double(r.limit_value) << ",0,0,," << bool_cell(r.limit_converged) << ","
      << bool_cell(!r.limit_converged) << '\n';
  return out.str();
}

std::string to_csv(const LimsupReport& r) {
  std::ostringstream out;
  out << "member,parameter,tau,action_extended,action_rescaled,bound,gap,junction_gap,satisfied\n";
  for (const LimsupRow& row : r.rows) {
    out << row.member << ',' << format_double(row.parameter) << ',' << format_double(row.tau) << ','
        << format_double(row.action_extended) << ',' << format_double(row.action_rescaled) << ','
        << format_double(row.bound) << ',' << format_double(row.gap) << ',' << format_double(row.junction_gap) << ','
        << bool_cell(row.satisfied) << '\n';
  }
  return out.str();
}

std::string to_csv(const LiminfReport& r) {
  std::ostringstream out;
  out << "probe,point,limit_slope,tail_liminf,satisfied,member_slopes\n";
  for (const LiminfRow& row : r.rows) {
    out << row.probe << ',' << vector_cell(row.point) << ',' << format_double(row.limit_slope) << ','
        << format_double(row.tail_liminf) << ',' << bool_cell(row.satisfied) << ',';
    for (std::size_t i = 0; i < row.member_slopes.size(); ++i) {
      out << (i > 0 ? " " : "") << format_double(row.member_slopes[i]);
    }
    out << '\n';
  }
  return out.str();
}

Json to_json(const ResolventTable& t) {
  Json rows = Json::array();
  for (const ResolventRow& r : t.rows) {
    rows.push_back({{"member", r.member}, {"parameter", r.parameter}, {"probe", r.probe},
                    {"point", to_json(r.point)}, {"gap", r.gap}});
  }
  return Json{{"tau", t.tau},
              {"rows", std::move(rows)},
              {"final_gaps", t.final_gaps},
              {"probe_decreasing", t.probe_decreasing},
              {"all_decreasing", t.all_decreasing}};
}

Json to_json(const ValueReport& r) {
  Json rows = Json::array();
  for (const ValueRow& row : r.rows) {
    rows.push_back({{"member", row.member},
                    {"parameter", row.parameter},
                    {"value", number_to_json(row.value)},
                    {"gap", number_to_json(row.gap)},
                    {"relative_gap", number_to_json(row.relative_gap)},
                    {"iterations", row.iterations},
                    {"converged", row.converged},
                    {"flagged", row.flagged}});
  }
  return Json{{"delta", r.delta},
              {"rows", std::move(rows)},
              {"limit_value", number_to_json(r.limit_value)},
              {"limit_converged", r.limit_converged},
              {"gaps_decreasing", r.gaps_decreasing},
              {"final_relative_gap", number_to_json(r.final_relative_gap)}};
}

Json to_json(const LimsupReport& r) {
  Json rows = Json::array();
  for (const LimsupRow& row : r.rows) {
    rows.push_back({{"member", row.member},
                    {"parameter", row.parameter},
                    {"tau", row.tau},
                    {"action_extended", number_to_json(row.action_extended)},
                    {"action_rescaled", number_to_json(row.action_rescaled)},
                    {"bound", number_to_json(row.bound)},
                    {"gap", number_to_json(row.gap)},
                    {"junction_gap", row.junction_gap},
                    {"satisfied", row.satisfied}});
  }
  return Json{{"gamma_action", number_to_json(r.gamma_action)},
              {"slope_bound_S", number_to_json(r.slope_bound_S)},
              {"lambda", r.lambda},
              {"tolerance", r.tolerance},
              {"rows", std::move(rows)},
              {"all_satisfied", r.all_satisfied}};
}

Json to_json(const LiminfReport& r) {
  Json rows = Json::array();
  for (const LiminfRow& row : r.rows) {
    Json slopes = Json::array();
    for (double s : row.member_slopes) slopes.push_back(number_to_json(s));
    rows.push_back({{"probe", row.probe},
                    {"point", to_json(row.point)},
                    {"limit_slope", number_to_json(row.limit_slope)},
                    {"member_slopes", std::move(slopes)},
                    {"tail_liminf", number_to_json(row.tail_liminf)},
                    {"satisfied", row.satisfied}});
  }
  return Json{{"drift", r.drift}, {"rows", std::move(rows)}, {"all_satisfied", r.all_satisfied}};
}

}  // namespace gammalab
