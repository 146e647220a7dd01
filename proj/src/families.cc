#include "gammalab/families.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gammalab {
namespace {

Vector drifted(const Vector& x, const EndpointDrift& drift, double scale) {
  return x + Vector::Constant(x.size(), drift.amount * scale);
}

double endpoint_slope_bound(const MoscoFamily& family) {
  double s = std::max(slope(family.limit.f, family.limit.x0), slope(family.limit.f, family.limit.x1));
  for (const FamilyMember& m : family.members) {
    s = std::max({s, slope(m.f, m.x0), slope(m.f, m.x1)});
  }
  return s;
}

std::vector<Vector> line_probes(Eigen::Index dim, std::initializer_list<double> values) {
  std::vector<Vector> probes;
  for (double v : values) probes.push_back(Vector::Constant(dim, v));
  return probes;
}

void require_schedule(const std::vector<double>& s, bool decreasing, const char* what) {
  if (s.empty()) throw InvalidArgument(std::string(what) + ": empty schedule");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.0) || !std::isfinite(s[i])) throw InvalidArgument(std::string(what) + ": entries must be positive");
    if (i > 0 && (decreasing ? !(s[i] < s[i - 1]) : !(s[i] > s[i - 1]))) {
      throw InvalidArgument(std::string(what) + ": schedule must be strictly monotone");
    }
  }
}

}  // namespace

std::vector<double> default_epsilon_schedule() { return {0.5, 0.2, 0.1, 0.05, 0.02, 0.01}; }
std::vector<double> default_penalty_schedule() { return {1.0, 4.0, 16.0, 64.0, 256.0, 1024.0}; }

MoscoFamily family_logsumexp_to_max(const Matrix& vectors, const std::vector<double>& epsilon_schedule,
                                    const Vector& x0, const Vector& x1, EndpointDrift drift) {
  require_schedule(epsilon_schedule, true, "logsumexp family");
  const LambdaConvexFunction limit = LambdaConvexFunction::max_linear(vectors);
  require_dim(x0, limit.dim(), "logsumexp family x0");
  require_dim(x1, limit.dim(), "logsumexp family x1");
  MoscoFamily family{"logsumexp_to_max", {}, {limit, x0, x1, 0.0, 0.0}, 0.0, 0.0, {}};
  for (double eps : epsilon_schedule) {
    family.members.push_back(
        {LambdaConvexFunction::log_sum_exp(vectors, eps), drifted(x0, drift, eps), drifted(x1, drift, eps), eps, eps});
  }
  family.slope_bound_S = endpoint_slope_bound(family);
  family.probes = line_probes(limit.dim(), {-2.0, -0.25, 0.0, 0.2, 1.0, 3.0});
  return family;
}

Matrix permutation_vectors(const Matrix& points) {
  const Eigen::Index n = points.rows();
  const Eigen::Index k = points.cols();
  if (n < 1 || k < 1) throw InvalidArgument("permutation_vectors: need at least one point");
  if (n > 8) throw InvalidArgument("permutation_vectors: at most 8 points");
  std::vector<Eigen::Index> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), Eigen::Index{0});
  std::vector<Vector> rows;
  do {
    Vector row(n * k);
    for (Eigen::Index i = 0; i < n; ++i) row.segment(i * k, k) = points.row(sigma[static_cast<std::size_t>(i)]).transpose();
    rows.push_back(std::move(row));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  Matrix out(static_cast<Eigen::Index>(rows.size()), n * k);
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  return out;
}

MoscoFamily family_penalty_to_indicator(const ConvexSet& set, const std::vector<double>& penalty_schedule,
                                        const Vector& x0, const Vector& x1, EndpointDrift drift) {
  require_schedule(penalty_schedule, false, "penalty family");
  const LambdaConvexFunction limit = LambdaConvexFunction::indicator(set);
  require_dim(x0, limit.dim(), "penalty family x0");
  require_dim(x1, limit.dim(), "penalty family x1");
  MoscoFamily family{"penalty_to_indicator", {}, {limit, x0, x1, 0.0, 0.0}, 0.0, 0.0, {}};
  for (double h : penalty_schedule) {
    FamilyMember m{LambdaConvexFunction::distance_penalty(set, h), drifted(x0, drift, 1.0 / h),
                   drifted(x1, drift, 1.0 / h), h, 1.0 / h};
    if (!contains(set, m.x0) || !contains(set, m.x1)) {
      throw DomainError("penalty family: endpoints must lie in the set");
    }
    family.members.push_back(std::move(m));
  }
  if (!contains(set, x0) || !contains(set, x1)) throw DomainError("penalty family: endpoints must lie in the set");
  family.slope_bound_S = endpoint_slope_bound(family);
  // Interior, boundary-adjacent and exterior probes along the chord direction.
  const Vector mid = 0.5 * (x0 + x1);
  Vector dir = x1 - x0;
  if (dir.norm() == 0.0) dir = Vector::Unit(limit.dim(), 0);
  dir.normalize();
  for (double s : {0.0, 0.5, 2.0, 4.0}) family.probes.push_back(mid + s * dir);
  for (double s : {-3.0, 6.0}) family.probes.push_back(mid + s * dir);
  return family;
}

MoscoFamily family_constant(const LambdaConvexFunction& f, const Vector& x0, const Vector& x1, int count) {
  if (count < 1) throw InvalidArgument("constant family: count must be positive");
  require_dim(x0, f.dim(), "constant family x0");
  require_dim(x1, f.dim(), "constant family x1");
  MoscoFamily family{"constant", {}, {f, x0, x1, 0.0, 0.0}, f.lambda(), 0.0, {}};
  for (int h = 0; h < count; ++h) {
    const double scale = std::ldexp(1.0, -h);
    family.members.push_back({f, x0, x1, static_cast<double>(h), scale});
  }
  family.slope_bound_S = endpoint_slope_bound(family);
  family.probes = {x0, x1, 0.5 * (x0 + x1), Vector(2.0 * x1 - x0)};
  return family;
}

FamilyAudit audit_family(const MoscoFamily& family) {
  FamilyAudit audit;
  constexpr double kSlack = 1e-12;
  audit.lambda_ok = family.limit.f.lambda() >= family.uniform_lambda - kSlack;
  double previous = kInfinity;
  for (const FamilyMember& m : family.members) {
    audit.lambda_ok = audit.lambda_ok && m.f.lambda() >= family.uniform_lambda - kSlack;
    const double s = std::max(slope(m.f, m.x0), slope(m.f, m.x1));
    audit.max_endpoint_slope = std::max(audit.max_endpoint_slope, s);
    audit.slope_bound_ok = audit.slope_bound_ok && s <= family.slope_bound_S * (1.0 + kSlack) + kSlack;
    const double gap = std::max((m.x0 - family.limit.x0).norm(), (m.x1 - family.limit.x1).norm());
    audit.endpoint_distances.push_back(gap);
    audit.endpoints_converge = audit.endpoints_converge && gap <= previous;
    previous = gap;
  }
  return audit;
}

Json to_json(const MoscoFamily& family) {
  auto member_json = [](const FamilyMember& m) {
    return Json{{"function", to_json(m.f)},
                {"x0", to_json(m.x0)},
                {"x1", to_json(m.x1)},
                {"parameter", m.parameter},
                {"scale", m.scale}};
  };
  Json members = Json::array();
  for (const FamilyMember& m : family.members) members.push_back(member_json(m));
  Json probes = Json::array();
  for (const Vector& p : family.probes) probes.push_back(to_json(p));
  return Json{{"name", family.name},
              {"members", std::move(members)},
              {"limit", member_json(family.limit)},
              {"uniform_lambda", family.uniform_lambda},
              {"slope_bound_S", number_to_json(family.slope_bound_S)},
              {"probes", std::move(probes)}};
}

MoscoFamily family_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  const Vector x0 = vector_from_json(j.at("x0"));
  const Vector x1 = vector_from_json(j.at("x1"));
  const EndpointDrift drift{j.value("drift", 0.0)};
  MoscoFamily family = [&] {
    if (type == "logsumexp_to_max") {
      const Matrix vectors = j.contains("points") ? permutation_vectors(matrix_from_json(j.at("points")))
                                                  : matrix_from_json(j.at("vectors"));
      const auto eps = j.contains("epsilons") ? j.at("epsilons").get<std::vector<double>>() : default_epsilon_schedule();
      return family_logsumexp_to_max(vectors, eps, x0, x1, drift);
    }
    if (type == "penalty_to_indicator") {
      const auto pen = j.contains("penalties") ? j.at("penalties").get<std::vector<double>>() : default_penalty_schedule();
      return family_penalty_to_indicator(set_from_json(j.at("set")), pen, x0, x1, drift);
    }
    if (type == "constant") {
      return family_constant(function_from_json(j.at("function")), x0, x1, j.value("count", 6));
    }
    throw InvalidArgument("unknown family type '" + type + "'");
  }();
  if (j.contains("probes")) {
    family.probes.clear();
    for (const Json& p : j.at("probes")) {
      family.probes.push_back(vector_from_json(p));
      require_dim(family.probes.back(), family.limit.f.dim(), "family probe");
    }
  }
  return family;
}

}  // namespace gammalab
