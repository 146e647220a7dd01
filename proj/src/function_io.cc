#include "gammalab/function_io.h"

#include <cmath>

namespace gammalab {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json number_to_json(double value) {
  if (std::isfinite(value)) return value;
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "Infinity") return kInfinity;
    if (s == "-inf" || s == "-Infinity") return -kInfinity;
  }
  throw InvalidArgument("expected a number, got " + j.dump());
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_to_json(v(i)));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  if (!j.is_array()) throw InvalidArgument("expected an array of numbers, got " + j.dump());
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from_json(j[i]);
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 1;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = vector_from_json(j[r]);
    if (static_cast<std::size_t>(row.size()) != cols) throw InvalidArgument("ragged matrix rows");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

Json to_json(const ConvexSet& set) {
  return std::visit(
      Overloaded{[](const Ball& b) { return Json{{"type", "ball"}, {"center", to_json(b.center)}, {"radius", b.radius}}; },
                 [](const Box& b) { return Json{{"type", "box"}, {"lo", to_json(b.lo)}, {"hi", to_json(b.hi)}}; },
                 [](const Halfspace& h) {
                   return Json{{"type", "halfspace"}, {"normal", to_json(h.normal)}, {"offset", h.offset}};
                 }},
      set);
}

ConvexSet set_from_json(const Json& j) {
  const auto type = require(j, "type").get<std::string>();
  if (type == "ball") return Ball{vector_from_json(require(j, "center")), number_from_json(require(j, "radius"))};
  if (type == "box") return Box{vector_from_json(require(j, "lo")), vector_from_json(require(j, "hi"))};
  if (type == "halfspace") {
    return Halfspace{vector_from_json(require(j, "normal")), number_from_json(require(j, "offset"))};
  }
  throw InvalidArgument("unknown set type '" + type + "'");
}

Json to_json(const LambdaConvexFunction& f) {
  Json params = std::visit(
      Overloaded{[](const QuadraticParams& p) { return Json{{"Q", to_json(p.Q)}, {"b", to_json(p.b)}, {"c", p.c}}; },
                 [](const MaxLinearParams& p) { return Json{{"vectors", to_json(p.vectors)}}; },
                 [](const LogSumExpParams& p) { return Json{{"vectors", to_json(p.vectors)}, {"epsilon", p.epsilon}}; },
                 [](const IndicatorParams& p) { return Json{{"set", to_json(p.set)}}; },
                 [](const DistancePenaltyParams& p) { return Json{{"set", to_json(p.set)}, {"weight", p.weight}}; }},
      f.params());
  return Json{{"kind", std::string(kind_name(f.kind()))}, {"lambda", f.lambda()}, {"params", std::move(params)}};
}

LambdaConvexFunction function_from_json(const Json& j) {
  const Kind kind = parse_kind(require(j, "kind").get<std::string>());
  const Json& params = require(j, "params");
  const bool has_lambda = j.contains("lambda");
  const double lambda = has_lambda ? number_from_json(j.at("lambda")) : 0.0;
  switch (kind) {
    case Kind::kQuadratic: {
      const Matrix Q = matrix_from_json(require(params, "Q"));
      const Vector b = params.contains("b") ? vector_from_json(params.at("b")) : Vector::Zero(Q.rows());
      const double c = params.contains("c") ? number_from_json(params.at("c")) : 0.0;
      auto f = LambdaConvexFunction::quadratic(Q, b, c);
      if (has_lambda && std::abs(lambda - f.lambda()) > 1e-9 * (1.0 + std::abs(f.lambda()))) {
        throw InvalidArgument("quadratic: declared lambda " + std::to_string(lambda) +
                              " differs from the smallest eigenvalue " + std::to_string(f.lambda()));
      }
      return f;
    }
    case Kind::kMaxLinear:
      return LambdaConvexFunction::max_linear(matrix_from_json(require(params, "vectors"))).with_lambda(lambda);
    case Kind::kLogSumExp:
      return LambdaConvexFunction::log_sum_exp(matrix_from_json(require(params, "vectors")),
                                               number_from_json(require(params, "epsilon")))
          .with_lambda(lambda);
    case Kind::kIndicator:
      return LambdaConvexFunction::indicator(set_from_json(require(params, "set"))).with_lambda(lambda);
    case Kind::kDistancePenalty:
      return LambdaConvexFunction::distance_penalty(set_from_json(require(params, "set")),
                                                    number_from_json(require(params, "weight")))
          .with_lambda(lambda);
  }
  throw InvalidArgument("unreachable kind");
}

Json to_json(const ProxResult& r) {
  return Json{{"resolvent_point", to_json(r.resolvent_point)},
              {"envelope_value", number_to_json(r.envelope_value)},
              {"moreau_gradient", to_json(r.moreau_gradient)},
              {"tau", r.tau},
              {"solver_residual", r.solver_residual}};
}

}  // namespace gammalab
