#include "ckahler/param_poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ckahler/error.hpp"

namespace ckahler {

namespace {

unsigned degree_of(const ParamMonomial& m) { return std::accumulate(m.begin(), m.end(), 0u); }

void trim(ParamMonomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

ParamMonomial multiply(const ParamMonomial& a, const ParamMonomial& b) {
  ParamMonomial r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

std::uint32_t exponent(const ParamMonomial& m, std::size_t i) { return i < m.size() ? m[i] : 0; }

bool divides(const ParamMonomial& d, const ParamMonomial& m) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > exponent(m, i)) return false;
  }
  return true;
}

ParamMonomial quotient(const ParamMonomial& m, const ParamMonomial& d) {
  ParamMonomial r = m;
  for (std::size_t i = 0; i < d.size(); ++i) r[i] -= d[i];
  trim(r);
  return r;
}

struct MonomialLess {
  bool operator()(const ParamMonomial& a, const ParamMonomial& b) const { return monomial_less(a, b); }
};

}  // namespace

bool monomial_less(const ParamMonomial& a, const ParamMonomial& b) {
  unsigned da = degree_of(a);
  unsigned db = degree_of(b);
  if (da != db) return da < db;
  std::size_t len = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < len; ++i) {
    auto ea = exponent(a, i);
    auto eb = exponent(b, i);
    if (ea != eb) return ea < eb;
  }
  return false;
}

ParamPoly::ParamPoly(const Rational& constant) {
  if (!constant.is_zero()) terms_.emplace_back(ParamMonomial{}, constant);
}

ParamPoly ParamPoly::variable(std::size_t index) {
  ParamMonomial m(index + 1, 0);
  m[index] = 1;
  ParamPoly p;
  p.terms_.emplace_back(std::move(m), Rational(1));
  return p;
}

ParamPoly ParamPoly::from_terms(std::vector<Term> terms) {
  std::map<ParamMonomial, Rational, MonomialLess> acc;
  for (auto& [m, c] : terms) {
    trim(m);
    acc[m] += c;
  }
  ParamPoly p;
  for (auto& [m, c] : acc) {
    if (!c.is_zero()) p.terms_.emplace_back(m, c);
  }
  return p;
}

std::optional<Rational> ParamPoly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_[0].first.empty()) return terms_[0].second;
  return std::nullopt;
}

Rational ParamPoly::constant_term() const {
  if (!terms_.empty() && terms_[0].first.empty()) return terms_[0].second;
  return Rational(0);
}

unsigned ParamPoly::total_degree() const { return terms_.empty() ? 0 : degree_of(terms_.back().first); }

std::size_t ParamPoly::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [m, c] : terms_) n = std::max(n, m.size());
  return n;
}

ParamPoly ParamPoly::operator-() const {
  ParamPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && monomial_less(a->first, b->first))) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || monomial_less(b->first, a->first)) {
      merged.push_back(*b++);
    } else {
      Rational c = a->second + b->second;
      if (!c.is_zero()) merged.emplace_back(std::move(a->first), std::move(c));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& o) { return *this += -o; }

ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
  if (a.terms_.empty() || b.terms_.empty()) return ParamPoly();
  if (auto ca = a.constant_value()) return b.scaled(*ca);
  if (auto cb = b.constant_value()) return a.scaled(*cb);
  std::map<ParamMonomial, Rational, MonomialLess> acc;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) acc[multiply(ma, mb)] += ca * cb;
  }
  ParamPoly r;
  for (auto& [m, c] : acc) {
    if (!c.is_zero()) r.terms_.emplace_back(m, c);
  }
  return r;
}

ParamPoly ParamPoly::scaled(const Rational& r) const {
  if (r.is_zero()) return ParamPoly();
  ParamPoly p = *this;
  for (auto& [m, c] : p.terms_) c *= r;
  return p;
}

ParamPoly ParamPoly::pow(unsigned k) const {
  ParamPoly result(Rational(1));
  ParamPoly base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

ParamPoly ParamPoly::divide_exact(const ParamPoly& divisor) const {
  if (divisor.is_zero()) throw Error(ErrorCode::DivisionByNonUnit, "division by the zero polynomial");
  if (auto c = divisor.constant_value()) return scaled(c->inverse());
  const auto& [lead_m, lead_c] = divisor.terms_.back();
  ParamPoly rest = *this;
  std::vector<Term> q;
  while (!rest.is_zero()) {
    const auto& [m, c] = rest.terms_.back();
    if (!divides(lead_m, m)) {
      throw Error(ErrorCode::NotDivisible, "polynomial division leaves a remainder");
    }
    ParamPoly step;
    step.terms_.emplace_back(quotient(m, lead_m), c / lead_c);
    rest -= step * divisor;
    q.push_back(std::move(step.terms_.front()));
  }
  return from_terms(std::move(q));
}

double ParamPoly::evaluate(std::span<const double> values) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c.to_double();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (i >= values.size()) throw Error(ErrorCode::SchemaError, "missing numeric value for a parameter");
      t *= std::pow(values[i], static_cast<double>(m[i]));
    }
    sum += t;
  }
  return sum;
}

double ParamPoly::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [mono, c] : terms_) m = std::max(m, std::fabs(c.to_double()));
  return m;
}

std::string ParamPoly::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    bool first = it == terms_.rbegin();
    Rational mag = c;
    if (first) {
      if (c.sign() < 0) {
        out += "-";
        mag = -c;
      }
    } else {
      out += c.sign() < 0 ? " - " : " + ";
      if (c.sign() < 0) mag = -c;
    }
    std::string mono;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += " * ";
      mono += i < names.size() ? names[i] : "p" + std::to_string(i);
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    if (mono.empty()) {
      out += mag.to_string();
    } else if (mag.is_one()) {
      out += mono;
    } else {
      out += mag.to_string() + " * " + mono;
    }
  }
  return out;
}

}  // namespace ckahler
