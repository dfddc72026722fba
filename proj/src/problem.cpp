#include "ckahler/problem.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ckahler {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

std::vector<std::string> names(const json& j, const char* key, bool required) {
  if (!j.contains(key)) {
    if (required) schema(std::string("missing key '") + key + "'");
    return {};
  }
  const json& v = j.at(key);
  if (!v.is_array()) schema(std::string("'") + key + "' must be an array of identifiers");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string() || !is_identifier(e.get<std::string>())) {
      schema(std::string("'") + key + "' entries must be identifier strings");
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

Rational rational_value(const json& v, bool allow_float, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const Error&) {
      schema(where + ": '" + v.get<std::string>() + "' is not a rational");
    }
  }
  if (v.is_number_float()) {
    if (!allow_float) schema(where + ": decimal values need the float backend");
    return Rational(mpq_class(v.get<double>()));
  }
  schema(where + ": expected a rational number");
}

int index_of(const std::string& token, const std::vector<std::string>& coords, const std::string& key) {
  const int n = static_cast<int>(coords.size());
  if (!token.empty() && std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    if (token.size() > 3) schema("index out of range in '" + key + "'");
    const int i = std::stoi(token);
    if (i >= n) schema("index out of range in '" + key + "'");
    return i;
  }
  for (int i = 0; i < n; ++i)
    if (coords[static_cast<std::size_t>(i)] == token) return i;
  schema("'" + key + "' does not name two coordinates");
}

std::pair<int, int> index_pair(const std::string& key, const std::vector<std::string>& coords) {
  const auto comma = key.find(',');
  if (comma == std::string::npos || key.find(',', comma + 1) != std::string::npos) {
    schema("key '" + key + "' is not of the form \"a,b\"");
  }
  auto trim = [](std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
  };
  return {index_of(trim(key.substr(0, comma)), coords, key), index_of(trim(key.substr(comma + 1)), coords, key)};
}

Expression expression_at(const json& v, const Identifiers& ids, const ParseOptions& opt, const std::string& where) {
  std::string text;
  if (v.is_string()) {
    text = v.get<std::string>();
  } else if (v.is_number_integer()) {
    text = std::to_string(v.get<long>());
  } else {
    schema(where + ": expected an expression string");
  }
  try {
    return parse_expression(text, ids, opt);
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + std::string(e.what()).substr(std::string(error_code_name(e.code())).size() + 2));
  }
}

Expression negated(const Expression& e) {
  if (e.kind() == Expression::Kind::Negate) return e.lhs();
  return Expression::negate(e);
}

// Fills an n x n array from "a,b" keys; the mirror entry is e (symmetric)
// or -e (antisymmetric). `given` records which entries were explicit.
template <class V, class Mirror>
std::vector<V> square_from_object(const json& obj, const std::string& key, int n, const std::vector<std::string>& coords,
                                  V zero, Mirror mirror, auto&& read, bool antisymmetric, std::vector<bool>& given) {
  if (!obj.is_object()) schema("'" + key + "' must be an object of \"a,b\" entries");
  std::vector<V> out(static_cast<std::size_t>(n * n), zero);
  given.assign(static_cast<std::size_t>(n * n), false);
  for (const auto& [k, v] : obj.items()) {
    const auto [a, b] = index_pair(k, coords);
    const std::string where = key + "[" + k + "]";
    V value = read(v, where);
    const auto ab = static_cast<std::size_t>(a * n + b);
    const auto ba = static_cast<std::size_t>(b * n + a);
    if (given[ab]) schema(where + ": entry given twice");
    if (antisymmetric && a == b) schema(where + ": diagonal entries of an antisymmetric array are not allowed");
    V mirrored = mirror(value);
    if (given[ba] && !(out[ba] == mirrored)) {
      throw Error(ErrorCode::AsymmetricInput, where + ": entry does not match its mirror");
    }
    out[ab] = value;
    out[ba] = std::move(mirrored);
    given[ab] = true;
  }
  return out;
}

void check_keys(const json& j) {
  static const std::set<std::string> known{"dimension", "coordinates", "parameters", "metric",   "point",
                                           "jet_order", "omega",       "bivector",   "conformal_factor",
                                           "backend",   "parameter_values", "description"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) schema("unknown key '" + k + "'");
  }
}

ScalarBackend read_backend(const json& j) {
  if (!j.contains("backend")) return ScalarBackend::exact();
  const json& b = j.at("backend");
  std::string mode;
  double eps = 1e-9;
  if (b.is_string()) {
    mode = b.get<std::string>();
  } else if (b.is_object()) {
    if (!b.contains("mode") || !b.at("mode").is_string()) schema("backend object needs a 'mode' string");
    mode = b.at("mode").get<std::string>();
    if (b.contains("epsilon")) {
      if (!b.at("epsilon").is_number() || !(b.at("epsilon").get<double>() > 0)) schema("backend epsilon must be positive");
      eps = b.at("epsilon").get<double>();
    }
  } else {
    schema("'backend' must be \"exact\", \"float\" or an object");
  }
  if (mode == "exact") return ScalarBackend::exact();
  if (mode == "float") return ScalarBackend::floating(eps);
  schema("unknown backend '" + mode + "'");
}

}  // namespace

template <>
std::vector<ParamPoly> parameter_bindings<ParamPoly>(const ProblemSpec& p) {
  std::vector<ParamPoly> out;
  for (std::size_t i = 0; i < p.ids.parameters.size(); ++i) out.push_back(ParamPoly::variable(i));
  return out;
}

template <>
std::vector<double> parameter_bindings<double>(const ProblemSpec& p) {
  return p.parameter_values;
}

JetSpacePtr make_space(const ProblemSpec& p, int order) { return JetSpace::create(p.dimension, order, p.point); }

ProblemSpec load_problem(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    schema(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) schema("problem must be a JSON object");
  check_keys(j);

  ProblemSpec p;
  if (!j.contains("dimension")) schema("missing key 'dimension'");
  if (!j.at("dimension").is_number_integer()) schema("'dimension' must be an integer");
  const long n = j.at("dimension").get<long>();
  if (n % 2 != 0) throw Error(ErrorCode::OddDimension, "dimension " + std::to_string(n) + " is odd");
  if (n < 4) throw Error(ErrorCode::DimensionTooSmall, "dimension must be at least 4");
  if (n > 12) schema("dimension above 12 is not supported");
  p.dimension = static_cast<int>(n);
  p.backend = read_backend(j);
  const bool fl = !p.backend.is_exact();

  p.ids.coordinates = names(j, "coordinates", true);
  p.ids.parameters = names(j, "parameters", false);
  if (static_cast<long>(p.ids.coordinates.size()) != n) schema("need exactly one coordinate name per dimension");
  std::set<std::string> seen;
  for (const auto& s : p.ids.coordinates) {
    if (!seen.insert(s).second) schema("identifier '" + s + "' declared twice");
  }
  for (const auto& s : p.ids.parameters) {
    if (!seen.insert(s).second) schema("identifier '" + s + "' declared twice");
  }

  if (j.contains("jet_order")) {
    const json& o = j.at("jet_order");
    if (!o.is_number_integer() || o.get<long>() < 0 || o.get<long>() > 8) schema("'jet_order' must be an integer in [0, 8]");
    p.jet_order = static_cast<int>(o.get<long>());
  }

  if (!j.contains("point")) schema("missing key 'point'");
  const json& pt = j.at("point");
  if (!pt.is_array() || static_cast<long>(pt.size()) != n) schema("'point' must list one value per coordinate");
  for (std::size_t i = 0; i < pt.size(); ++i) p.point.push_back(rational_value(pt[i], fl, "point[" + std::to_string(i) + "]"));

  const ParseOptions opt{fl, 1};
  const auto read_expr = [&](const json& v, const std::string& where) { return expression_at(v, p.ids, opt, where); };
  const Expression zero = Expression::literal(Rational(0));

  std::vector<bool> given;
  if (!j.contains("metric")) schema("missing key 'metric'");
  p.metric = square_from_object<Expression>(
      j.at("metric"), "metric", p.dimension, p.ids.coordinates, zero, [](const Expression& e) { return e; }, read_expr,
      false, given);
  // a cross term listed once is the coefficient of dx^a dx^b in the line
  // element and is split evenly between g_ab and g_ba
  const Expression half = Expression::literal(Rational(1, 2));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto ab = static_cast<std::size_t>(a * n + b), ba = static_cast<std::size_t>(b * n + a);
      if (a != b && given[ab] != given[ba]) p.metric[ab] = Expression::binary(Expression::Kind::Mul, half, p.metric[ab]);
    }
  if (j.contains("omega")) {
    p.omega = square_from_object<Expression>(j.at("omega"), "omega", p.dimension, p.ids.coordinates, zero, negated,
                                             read_expr, true, given);
  }
  if (j.contains("bivector")) {
    p.bivector = square_from_object<Rational>(
        j.at("bivector"), "bivector", p.dimension, p.ids.coordinates, Rational(0), [](const Rational& r) { return -r; },
        [&](const json& v, const std::string& where) { return rational_value(v, fl, where); }, true, given);
  }
  if (j.contains("conformal_factor")) p.conformal_factor = read_expr(j.at("conformal_factor"), "conformal_factor");

  if (j.contains("parameter_values")) {
    const json& pv = j.at("parameter_values");
    if (!pv.is_object()) schema("'parameter_values' must map parameter names to numbers");
    p.parameter_values.assign(p.ids.parameters.size(), 0.0);
    std::vector<bool> set(p.ids.parameters.size(), false);
    for (const auto& [k, v] : pv.items()) {
      auto it = std::find(p.ids.parameters.begin(), p.ids.parameters.end(), k);
      if (it == p.ids.parameters.end()) schema("'parameter_values' names unknown parameter '" + k + "'");
      if (!v.is_number()) schema("parameter value for '" + k + "' must be a number");
      const auto i = static_cast<std::size_t>(it - p.ids.parameters.begin());
      p.parameter_values[i] = v.get<double>();
      set[i] = true;
    }
    if (std::find(set.begin(), set.end(), false) != set.end()) schema("'parameter_values' must cover every parameter");
  }
  if (fl && p.parameter_values.size() != p.ids.parameters.size()) {
    schema("the float backend needs 'parameter_values' for every parameter");
  }

  // point checks on the constant terms
  auto space = make_space(p, 0);
  if (p.backend.is_exact()) {
    const auto params = parameter_bindings<ParamPoly>(p);
    Matrix<ParamPoly> g0(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        g0(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) = to_jet<ParamPoly>(p.g(a, b), space, 0, params).constant_term();
    if (determinant_bareiss(g0).is_zero()) {
      throw Error(ErrorCode::DegenerateMetricAtPoint, "metric is degenerate at the point");
    }
    if (p.conformal_factor &&
        !ScalarTraits<ParamPoly>::is_positive_constant(to_jet<ParamPoly>(*p.conformal_factor, space, 0, params).constant_term())) {
      throw Error(ErrorCode::NonPositiveConformalFactor, "conformal factor must be a positive rational at the point");
    }
  } else {
    const auto params = parameter_bindings<double>(p);
    Matrix<double> g0(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    double scale = 0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double v = to_jet<double>(p.g(a, b), space, 0, params).constant_term();
        g0(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) = v;
        scale = std::max(scale, std::fabs(v));
      }
    if (std::fabs(determinant_bareiss(g0)) <= p.backend.epsilon * std::pow(std::max(scale, 1.0), static_cast<double>(n))) {
      throw Error(ErrorCode::DegenerateMetricAtPoint, "metric is degenerate at the point");
    }
    if (p.conformal_factor && !(to_jet<double>(*p.conformal_factor, space, 0, params).constant_term() > 0)) {
      throw Error(ErrorCode::NonPositiveConformalFactor, "conformal factor must be positive at the point");
    }
  }
  return p;
}

ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) schema("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_problem(ss.str());
}

template <class S>
MetricJet<S> build_metric(const ProblemSpec& p, const JetSpacePtr& space, int order) {
  const auto params = parameter_bindings<S>(p);
  return MetricJet<S>(Tensor<S>::generate(space, down(2), order, [&](std::span<const int> i) {
    return to_jet<S>(p.g(i[0], i[1]), space, order, params);
  }));
}

template <class S>
Tensor<S> build_omega(const ProblemSpec& p, const JetSpacePtr& space, int order) {
  if (!p.omega) schema("the problem has no 'omega'");
  const auto params = parameter_bindings<S>(p);
  const int n = p.dimension;
  return Tensor<S>::generate(space, down(2), order, [&](std::span<const int> i) {
    return to_jet<S>((*p.omega)[static_cast<std::size_t>(i[0] * n + i[1])], space, order, params);
  });
}

template <class S>
Jet<S> build_conformal_factor(const ProblemSpec& p, const JetSpacePtr& space, int order) {
  if (!p.conformal_factor) return Jet<S>::constant(space, order, Rational(1));
  return to_jet<S>(*p.conformal_factor, space, order, parameter_bindings<S>(p));
}

template <class S>
Matrix<S> build_bivector(const ProblemSpec& p) {
  if (!p.bivector) schema("the problem has no 'bivector'");
  const auto n = static_cast<std::size_t>(p.dimension);
  Matrix<S> X(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) X(a, b) = ScalarTraits<S>::from_rational((*p.bivector)[a * n + b]);
  return X;
}

#define CKAHLER_INSTANTIATE(S)                                                            \
  template MetricJet<S> build_metric(const ProblemSpec&, const JetSpacePtr&, int);        \
  template Tensor<S> build_omega(const ProblemSpec&, const JetSpacePtr&, int);            \
  template Jet<S> build_conformal_factor(const ProblemSpec&, const JetSpacePtr&, int);    \
  template Matrix<S> build_bivector(const ProblemSpec&);

CKAHLER_INSTANTIATE(ParamPoly)
CKAHLER_INSTANTIATE(double)

#undef CKAHLER_INSTANTIATE

}  // namespace ckahler
