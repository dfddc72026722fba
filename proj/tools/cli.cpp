#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "ckahler/constraints.hpp"
#include "ckahler/expression.hpp"
#include "ckahler/obstruction.hpp"
#include "ckahler/problem.hpp"
#include "ckahler/tractor.hpp"

namespace ckahler::cli {

namespace {

using json = nlohmann::json;

struct Options {
  std::string command;
  std::string file;
  std::string backend;
  std::string point;
  int jet_order = -1;
  int random_bivectors = 0;
  std::uint64_t seed = 1;
  std::string sigma;
  std::vector<std::string> params;
  std::string format = "json";
};

constexpr std::size_t kListedCoefficients = 8;

[[noreturn]] void input_error(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

int minimum_order(const std::string& command) { return command == "obstruction" ? 2 : 3; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::pair<std::string, std::string> key_value(const std::string& s, const std::string& flag) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) input_error(flag + " expects name=value, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

// Applies command-line overrides to the raw file before validation, so the
// loader checks the problem that is actually analysed.
ProblemSpec load(const Options& o) {
  std::ifstream in(o.file, std::ios::binary);
  if (!in) input_error("cannot read '" + o.file + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const bool patch = !o.backend.empty() || !o.point.empty() || o.jet_order >= 0 || !o.params.empty();
  if (!patch) return load_problem(text);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return load_problem(text);
  if (!o.backend.empty()) {
    if (o.backend != "exact" && o.backend != "float") input_error("--backend must be exact or float");
    j["backend"] = o.backend;
  }
  if (o.jet_order >= 0) j["jet_order"] = o.jet_order;
  if (!o.point.empty()) {
    if (!j.contains("coordinates") || !j["coordinates"].is_array()) return load_problem(text);
    const auto coords = j["coordinates"].get<std::vector<std::string>>();
    if (!j.contains("point") || !j["point"].is_array() || j["point"].size() != coords.size()) {
      j["point"] = json::array();
      for (std::size_t i = 0; i < coords.size(); ++i) j["point"].push_back(0);
    }
    for (const auto& item : split(o.point, ',')) {
      const auto [name, value] = key_value(item, "--point");
      const auto it = std::find(coords.begin(), coords.end(), name);
      if (it == coords.end()) throw Error(ErrorCode::UndeclaredIdentifier, "--point names unknown coordinate '" + name + "'");
      j["point"][static_cast<std::size_t>(it - coords.begin())] = value;
    }
  }
  for (const auto& item : o.params) {
    for (const auto& kv : split(item, ',')) {
      const auto [name, value] = key_value(kv, "--param");
      double v = 0;
      try {
        v = Rational::parse(value).to_double();
      } catch (const Error&) {
        try {
          std::size_t used = 0;
          v = std::stod(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          input_error("--param value '" + value + "' is not a number");
        }
      }
      j["parameter_values"][name] = v;
    }
  }
  return load_problem(j.dump());
}

template <class S>
struct Ctx {
  const ProblemSpec& p;
  int order;
  JetSpacePtr space;
  double eps;

  std::span<const std::string> names() const { return p.ids.parameters; }
};

template <class S>
json scalar(const S& v, const Ctx<S>& c) {
  if constexpr (ScalarTraits<S>::exact) {
    return ScalarTraits<S>::to_string(v, c.names());
  } else {
    return json{{"float", v}, {"epsilon", c.eps}};
  }
}

std::string monomial(const JetSpace& space, std::size_t index, const std::vector<std::string>& coords) {
  const auto e = space.exponents(index);
  std::string out;
  for (std::size_t d = 0; d < e.size(); ++d) {
    if (e[d] == 0) continue;
    if (!out.empty()) out += "*";
    out += coords[d];
    if (e[d] > 1) out += "^" + std::to_string(e[d]);
  }
  return out.empty() ? "1" : out;
}

template <class S>
json jet_summary(const Jet<S>& j, const Ctx<S>& c, double scale = 1.0) {
  json r;
  r["at_point"] = scalar(j.constant_term(), c);
  r["order"] = j.order();
  r["zero"] = vanishes(j, scale, c.eps);
  return r;
}

template <class S>
json tensor_summary(const Tensor<S>& t, const Ctx<S>& c, double scale = 1.0) {
  json r;
  r["order"] = t.order();
  r["zero"] = vanishes(t, scale, c.eps);
  if constexpr (ScalarTraits<S>::exact) {
    std::size_t count = 0;
    json listed = json::array();
    const int n = t.dim();
    const auto& comps = t.components();
    for (std::size_t f = 0; f < comps.size(); ++f) {
      const auto& jet = comps[f];
      for (std::size_t i = 0; i < jet.size(); ++i) {
        if (jet[i].is_zero()) continue;
        if (listed.size() < kListedCoefficients) {
          std::string comp;
          std::size_t rest = f;
          std::vector<std::string> parts(static_cast<std::size_t>(t.rank()));
          for (int k = t.rank() - 1; k >= 0; --k) {
            parts[static_cast<std::size_t>(k)] = c.p.ids.coordinates[rest % static_cast<std::size_t>(n)];
            rest /= static_cast<std::size_t>(n);
          }
          for (const auto& s : parts) comp += (comp.empty() ? "" : ",") + s;
          listed.push_back({{"component", comp},
                            {"monomial", monomial(*t.space(), i, c.p.ids.coordinates)},
                            {"coefficient", ScalarTraits<S>::to_string(jet[i], c.names())}});
        }
        ++count;
      }
    }
    r["nonzero_coefficients"] = count;
    r["listed"] = listed;
  } else {
    r["magnitude"] = json{{"float", t.magnitude()}, {"epsilon", c.eps}};
  }
  return r;
}

template <class S>
json matrix_at_point(const Tensor<S>& t, const Ctx<S>& c) {
  json rows = json::array();
  for (int a = 0; a < t.dim(); ++a) {
    json row = json::array();
    for (int b = 0; b < t.dim(); ++b) row.push_back(scalar(t(a, b).constant_term(), c));
    rows.push_back(row);
  }
  return rows;
}

struct Finding {
  std::string residual;
  std::string equation;
};

struct Verdict {
  std::vector<Finding> obstruction;
  std::vector<Finding> residuals;
  bool witness = false;
  std::string note;

  json to_json() const {
    json v;
    auto list = [](const std::vector<Finding>& f) {
      json a = json::array();
      for (const auto& x : f) a.push_back({{"residual", x.residual}, {"equation", x.equation}});
      return a;
    };
    if (!obstruction.empty()) {
      v["status"] = "ObstructionNonzero";
      v["details"] = list(obstruction);
    } else if (!residuals.empty()) {
      v["status"] = "ResidualsNonzero";
      v["details"] = list(residuals);
    } else if (witness) {
      v["status"] = "ConformallyKahlerWitnessVerified";
      v["details"] = json::array();
    } else {
      v["status"] = "Inconclusive";
      v["details"] = json::array();
    }
    if (!note.empty()) v["note"] = note;
    return v;
  }
};

// The analysed geometry: with a conformal factor the file holds the Kahler
// pair and the analysed metric is Omega^-2 ghat with omega = Omega^-3 omegahat.
template <class S>
struct Geometry {
  MetricJet<S> g;
  CurvaturePack<S> pack;
  std::optional<Tensor<S>> omega;
  std::optional<ProlongationSection<S>> psi;
  std::string origin;
};

template <class S>
Geometry<S> geometry(const Ctx<S>& c) {
  const auto& p = c.p;
  const auto file_metric = build_metric<S>(p, c.space, c.order);
  if (p.conformal_factor) {
    const auto Omega = build_conformal_factor<S>(p, c.space, c.order);
    if (p.omega) {
      auto w = build_witness(file_metric, build_omega<S>(p, c.space, c.order), Omega);
      return {w.metric, std::move(w.pack), w.psi.omega, w.psi, "witness from the Kahler pair and conformal factor"};
    }
    const auto inv = Omega.inverse();
    MetricJet<S> g(file_metric.g().multiplied(inv * inv));
    auto pack = curvature_pack(g);
    return {g, std::move(pack), std::nullopt, std::nullopt, "metric rescaled by the conformal factor"};
  }
  auto pack = curvature_pack(file_metric);
  if (!p.omega) return {file_metric, std::move(pack), std::nullopt, std::nullopt, "metric from file"};
  const auto omega = build_omega<S>(p, c.space, c.order);
  auto psi = section_from_form(omega, pack, file_metric);
  return {file_metric, std::move(pack), omega, psi, "section derived from omega"};
}

json bivector_json(const Matrix<Rational>& X, const std::vector<std::string>& coords) {
  json b = json::object();
  for (std::size_t a = 0; a < X.rows(); ++a)
    for (std::size_t d = a + 1; d < X.cols(); ++d)
      if (!X(a, d).is_zero()) b[coords[a] + "," + coords[d]] = X(a, d).to_string();
  return b;
}

template <class S>
Matrix<S> convert(const Matrix<Rational>& X) {
  Matrix<S> r(X.rows(), X.cols());
  for (std::size_t a = 0; a < X.rows(); ++a)
    for (std::size_t b = 0; b < X.cols(); ++b) r(a, b) = ScalarTraits<S>::from_rational(X(a, b));
  return r;
}

std::vector<Matrix<Rational>> random_bivectors(int n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(-3, 3);
  std::vector<Matrix<Rational>> out;
  while (static_cast<int>(out.size()) < count) {
    Matrix<Rational> X(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    bool any = false;
    for (std::size_t a = 0; a < X.rows(); ++a)
      for (std::size_t b = a + 1; b < X.cols(); ++b) {
        const Rational v(d(rng));
        X(a, b) = v;
        X(b, a) = -v;
        any = any || !v.is_zero();
      }
    if (any) out.push_back(X);
  }
  return out;
}

template <class S>
json obstruction_section(const Ctx<S>& c, const Geometry<S>& geo, const Options& o, Verdict& v) {
  const auto& p = c.p;
  std::vector<std::pair<std::string, Matrix<Rational>>> list;
  if (p.bivector) {
    const auto n = static_cast<std::size_t>(p.dimension);
    Matrix<Rational> X(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) X(a, b) = (*p.bivector)[a * n + b];
    list.emplace_back("file", X);
  }
  int k = 0;
  for (auto& X : random_bivectors(p.dimension, o.random_bivectors, o.seed)) list.emplace_back("random " + std::to_string(++k), X);
  if (list.empty()) input_error("no bivector: add 'bivector' to the problem or pass --random-bivectors");

  const auto w = weyl_at_point(geo.pack.weyl, geo.g);
  json s;
  s["seed"] = o.seed;
  s["weyl_zero_at_point"] = vanishes(geo.pack.weyl.constant_part(), 1.0, c.eps);
  json entries = json::array();
  for (const auto& [source, X] : list) {
    const auto r = obstruction_report(w, convert<S>(X), c.eps);
    json e;
    e["source"] = source;
    e["bivector"] = bivector_json(X, p.ids.coordinates);
    e["N"] = r.N;
    e["det"] = scalar(r.det_trace, c);
    e["trace_free"] = r.trace_free;
    json tr = json::array();
    for (const auto& t : r.traces) tr.push_back(scalar(t, c));
    e["traces"] = tr;
    const bool zero = ScalarTraits<S>::exact ? ScalarTraits<S>::is_zero(r.det_trace)
                                              : ScalarTraits<S>::magnitude(r.det_trace) <= c.eps;
    e["det_zero"] = zero;
    if (!zero) v.obstruction.push_back({"obstruction determinant (" + source + " bivector)", "det(X^ef beta_ef..^..) = 0"});
    entries.push_back(e);
  }
  s["bivectors"] = entries;
  return s;
}

template <class S>
json connection_section(const Ctx<S>& c, const Geometry<S>& geo, Verdict& v) {
  const auto r = apply_connection(*geo.psi, geo.pack, geo.g);
  const double scale = geo.omega->magnitude();
  const std::vector<std::tuple<std::string, std::string, const Tensor<S>*>> slots{
      {"slot1", "nabla_a omega_bc - mu_abc - 2 g_a[b K_c]", &r.slot1},
      {"slot2a", "nabla_a K_b - P_a^c omega_bc - Sigma_ab", &r.slot2a},
      {"slot2b", "nabla_a mu_bcd + 3 g_a[b Sigma_cd] + 3 P_a[b omega_cd] + 3/2 C_[bc|a^p omega_p|d]", &r.slot2b},
      {"slot3",
       "nabla_a Sigma_bc + 2 P_a[b K_c] - P_a^e mu_ebc + 1/2 A^p_bc omega_pa + A^p_a[b omega_c]p + C_bca^p K_p",
       &r.slot3}};
  json s;
  for (const auto& [name, eq, t] : slots) {
    json e = tensor_summary(*t, c, scale);
    e["equation"] = eq;
    if (!e["zero"].get<bool>()) v.residuals.push_back({"connection " + name, eq});
    s[name] = e;
  }
  return s;
}

template <class S>
json constraints_section(const Ctx<S>& c, const Geometry<S>& geo, Verdict& v) {
  const auto rep = q_residuals(*geo.psi, geo.pack, geo.g, c.eps);
  const double scale = geo.omega->magnitude();
  json s;
  json res;
  for (const auto& r : rep.residuals) {
    json e = tensor_summary(r.value, c, scale);
    e["equation"] = r.equation;
    e["zero"] = r.zero;
    if (!r.zero) v.residuals.push_back({r.name, r.equation});
    res[r.name] = e;
  }
  s["residuals"] = res;
  if (rep.notice) s["notice"] = *rep.notice;
  const auto wr = weyl_constraint_residual(geo.pack.weyl, *geo.omega, geo.g);
  json we = tensor_summary(wr, c, scale);
  const std::string weq = "C_bc[a^e omega_d]e + C_ad[b^e omega_c]e";
  we["equation"] = weq;
  if (!we["zero"].get<bool>()) v.residuals.push_back({"weyl_constraint", weq});
  s["weyl_constraint"] = we;
  return s;
}

template <class S>
json curvature_section(const Ctx<S>& c, const Geometry<S>& geo) {
  json s;
  s["scalar_curvature"] = jet_summary(geo.pack.scalar, c);
  s["schouten_trace"] = jet_summary(geo.pack.schouten_trace, c);
  s["metric_at_point"] = matrix_at_point(geo.g.g(), c);
  s["ricci_at_point"] = matrix_at_point(geo.pack.ricci, c);
  s["weyl"] = tensor_summary(geo.pack.weyl, c);
  if (geo.pack.cotton) s["cotton"] = tensor_summary(*geo.pack.cotton, c);
  s["source"] = geo.origin;
  return s;
}

template <class S>
json tractor_section(const Ctx<S>& c, const Geometry<S>& geo, const Options& o, Verdict& v) {
  if (!geo.omega) input_error("tractor-check needs 'omega' in the problem");
  std::optional<Density<S>> sigma;
  if (!o.sigma.empty()) {
    const auto e = parse_expression(o.sigma, c.p.ids, ParseOptions{!c.p.backend.is_exact(), 1});
    const auto params = parameter_bindings<S>(c.p);
    sigma = Density<S>{to_jet<S>(e, c.space, c.order, params), 1};
    if (!ScalarTraits<S>::is_positive_constant(sigma->value.constant_term())) {
      throw Error(ErrorCode::NonPositive, "--sigma must be positive at the point");
    }
  }
  const auto ev = einstein_variants_check(*geo.omega, geo.pack, geo.g, sigma, c.eps);
  const auto& k = ev.kahler;
  const double scale = geo.omega->magnitude();
  json s;
  s["sigma"] = {{"source", sigma ? "--sigma" : "sqrt(|omega|^2 / n)"}, {"value", jet_summary(k.sigma.value, c)}};
  auto form_zero = [&](const TractorForm<S>& f) {
    if constexpr (ScalarTraits<S>::exact) {
      return f.is_zero();
    } else {
      return f.magnitude() <= c.eps * std::max(1.0, scale);
    }
  };
  json checks;
  json herm = tensor_summary(k.herm, c, scale * scale);
  herm["equation"] = "omega_a^c omega_cb + sigma^2 g_ab";
  checks["hermitian"] = herm;
  checks["x_wedge_i_wedge_phi"] = {{"equation", "X ^ I ^ Phi"}, {"zero", form_zero(k.x_i_phi)}};
  checks["x_i_phi_contraction"] = {{"equation", "X^A I^B Phi_ABC"}, {"zero", form_zero(k.x_i_phi_inner)}};
  json ky = tensor_summary(k.ky, c, scale);
  ky["equation"] = "nabla_a omega_bc - nabla_[a omega_bc] + 2/(n-1) g_a[b nabla^p omega_c]p";
  checks["killing_yano"] = ky;
  s["checks"] = checks;
  s["phi_norm"] = jet_summary(k.phi_norm, c);
  s["I_norm"] = jet_summary(ev.I_norm, c);
  s["einstein"] = {{"I_parallel", ev.parallel},
                   {"I_null", ev.null},
                   {"I_wedge_phi_zero", ev.i_phi_zero},
                   {"kahler_einstein", ev.kahler_einstein()},
                   {"ricci_flat_kahler", ev.ricci_flat_kahler()}};
  if (!k.herm_zero) v.residuals.push_back({"hermitian", "omega_a^c omega_cb + sigma^2 g_ab"});
  if (!k.wedge_zero) v.residuals.push_back({"x_wedge_i_wedge_phi", "X ^ I ^ Phi"});
  if (!k.inner_zero) v.residuals.push_back({"x_i_phi_contraction", "X^A I^B Phi_ABC"});
  v.witness = k.holds();
  return s;
}

template <class S>
json analyse(const ProblemSpec& p, const Options& o, int order) {
  const double eps = p.backend.is_exact() ? 0.0 : p.backend.epsilon;
  Ctx<S> c{p, order, make_space(p, order), eps};
  const auto geo = geometry(c);
  Verdict v;
  json sections;
  if (o.command == "report") {
    sections["curvature"] = curvature_section(c, geo);
    v.note = "report only; no conformally Kahler test was run";
  } else if (o.command == "obstruction") {
    sections["obstruction"] = obstruction_section(c, geo, o, v);
    if (v.obstruction.empty()) v.note = "all computed obstructions vanish; this is necessary, not sufficient";
  } else if (o.command == "cky-check") {
    if (!geo.psi) input_error("cky-check needs 'omega' in the problem");
    sections["connection"] = connection_section(c, geo, v);
    if (v.residuals.empty()) v.note = "omega extends to a parallel section; the Kahler constraints were not checked";
  } else if (o.command == "kahler-check") {
    if (p.bivector || o.random_bivectors > 0) sections["obstruction"] = obstruction_section(c, geo, o, v);
    if (geo.psi) {
      sections["connection"] = connection_section(c, geo, v);
      sections["constraints"] = constraints_section(c, geo, v);
      v.witness = true;
    } else {
      v.note = "no omega supplied, so no witness section could be checked";
    }
  } else if (o.command == "tractor-check") {
    sections["tractor"] = tractor_section(c, geo, o, v);
  }
  json report;
  report["sections"] = sections;
  report["verdict"] = v.to_json();
  return report;
}

json problem_echo(const ProblemSpec& p, const Options& o, int used) {
  json e;
  e["file"] = o.file;
  e["dimension"] = p.dimension;
  e["coordinates"] = p.ids.coordinates;
  e["parameters"] = p.ids.parameters;
  json pt = json::array();
  for (const auto& x : p.point) pt.push_back(x.to_string());
  e["point"] = pt;
  e["backend"] = p.backend.name();
  if (!p.backend.is_exact()) e["epsilon"] = p.backend.epsilon;
  e["jet_order_requested"] = p.jet_order;
  e["jet_order_used"] = used;
  e["conformal_factor"] = p.conformal_factor ? json(to_string(*p.conformal_factor, p.ids)) : json(nullptr);
  e["has_omega"] = p.omega.has_value();
  return e;
}

void print_entries(const json& obj, std::ostream& out, const std::string& indent) {
  for (const auto& [key, val] : obj.items()) {
    if (val.is_object() && val.contains("zero")) {
      out << indent << key << ": " << (val["zero"].get<bool>() ? "zero" : "NONZERO") << "\n";
    } else if (key == "bivectors") {
      for (const auto& b : val) out << indent << "det (" << b["source"].get<std::string>() << "): " << b["det"].dump() << "\n";
    } else if (val.is_object()) {
      out << indent << key << ":\n";
      print_entries(val, out, indent + "  ");
    } else if (val.is_primitive()) {
      out << indent << key << ": " << val.dump() << "\n";
    }
  }
}

void print_text(const json& report, std::ostream& out) {
  const auto& pr = report["problem"];
  out << report["command"].get<std::string>() << " " << pr["file"].get<std::string>() << " (n = " << pr["dimension"]
      << ", backend " << pr["backend"].get<std::string>() << ", jet order " << pr["jet_order_used"] << ")\n";
  for (const auto& [name, sec] : report["sections"].items()) {
    out << "[" << name << "]\n";
    print_entries(sec, out, "  ");
  }
  const auto& v = report["verdict"];
  out << "verdict: " << v["status"].get<std::string>() << "\n";
  for (const auto& d : v["details"]) {
    out << "  " << d["residual"].get<std::string>() << ": " << d["equation"].get<std::string>() << "\n";
  }
  if (v.contains("note")) out << "  note: " << v["note"].get<std::string>() << "\n";
}

int execute(const Options& o, std::ostream& out) {
  const ProblemSpec p = load(o);
  const int used = std::max(p.jet_order, minimum_order(o.command));
  json report = p.backend.is_exact() ? analyse<ParamPoly>(p, o, used) : analyse<double>(p, o, used);
  report["command"] = o.command;
  report["problem"] = problem_echo(p, o, used);
  if (o.format == "text") {
    print_text(report, out);
  } else {
    out << report.dump(2) << "\n";
  }
  return kOk;
}

bool is_bug(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvariantViolation:
    case ErrorCode::OrderMismatch:
    case ErrorCode::BasePointMismatch:
    case ErrorCode::SlotMismatch:
    case ErrorCode::SymmetryViolation:
    case ErrorCode::InconsistentTraceCount:
      return true;
    default:
      return false;
  }
}

void print_error(std::ostream& out, const std::string& code, const std::string& message) {
  json e;
  e["error"] = {{"code", code}, {"message", message}};
  out << e.dump(2) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformally Kahler metric checks on jets at a point"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"report", "curvature summary of the metric"},
      {"obstruction", "Weyl obstruction determinants for bivectors"},
      {"cky-check", "prolongation connection residuals for omega"},
      {"kahler-check", "obstructions, connection and constraint residuals with one verdict"},
      {"tractor-check", "tractor characterisation of the Kahler and Einstein conditions"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("problem", o.file, "problem file (JSON)")->required();
    sub->add_option("--backend", o.backend, "exact or float");
    sub->add_option("--point", o.point, "base point override, e.g. x=1/2,y=0");
    sub->add_option("--jet-order", o.jet_order, "jet order; raised to the minimum the command needs");
    sub->add_option("--random-bivectors", o.random_bivectors, "number of random integer bivectors to test");
    sub->add_option("--seed", o.seed, "seed for --random-bivectors");
    sub->add_option("--sigma", o.sigma, "scale density for tractor-check, as an expression");
    sub->add_option("--param", o.params, "parameter values for the float backend, e.g. c=1");
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->callback([&o, name = name] { o.command = name; });
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    print_error(out, "UsageError", e.what());
    return kInputError;
  }
  if (o.random_bivectors < 0) {
    print_error(out, "UsageError", "--random-bivectors must be non-negative");
    return kInputError;
  }
  try {
    return execute(o, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    print_error(out, std::string(error_code_name(e.code())), e.what());
    return is_bug(e.code()) ? kInvariantViolation : kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    print_error(out, "InternalError", e.what());
    return kInvariantViolation;
  }
}

}  // namespace ckahler::cli
