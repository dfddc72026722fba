#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ckahler/rational.hpp"

namespace ckahler {

/// Exponent vector over the problem's parameters. Trailing zeros are
/// trimmed so that polynomials built against different parameter counts
/// combine without padding.
using ParamMonomial = std::vector<std::uint32_t>;

/// Multivariate polynomial with rational coefficients in the symbolic
/// parameters of a problem (e.g. the constant `c`). Parameter names are
/// not stored; callers pass them when printing.
///
/// Terms are kept sorted by graded-lex order of the exponent vector and
/// never carry a zero coefficient.
class ParamPoly {
 public:
  using Term = std::pair<ParamMonomial, Rational>;

  ParamPoly() = default;
  ParamPoly(const Rational& constant);  // NOLINT(google-explicit-constructor)
  ParamPoly(long constant) : ParamPoly(Rational(constant)) {}  // NOLINT

  static ParamPoly variable(std::size_t index);
  static ParamPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.empty()); }
  /// The value when the polynomial is constant.
  std::optional<Rational> constant_value() const;
  /// Coefficient of the empty monomial.
  Rational constant_term() const;
  unsigned total_degree() const;
  std::size_t parameter_count() const;

  ParamPoly operator-() const;
  ParamPoly& operator+=(const ParamPoly& o);
  ParamPoly& operator-=(const ParamPoly& o);
  ParamPoly& operator*=(const ParamPoly& o) { return *this = *this * o; }
  friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
  friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
  friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b);
  friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return a.terms_ == b.terms_; }

  ParamPoly scaled(const Rational& r) const;
  ParamPoly pow(unsigned k) const;

  /// Exact quotient; throws Error(NotDivisible) if `divisor` does not
  /// divide this polynomial.
  ParamPoly divide_exact(const ParamPoly& divisor) const;

  double evaluate(std::span<const double> values) const;
  double max_abs_coefficient() const;

  /// Canonical form "p/q * c^k + ..." with monomials in descending graded
  /// order; "0" for the zero polynomial.
  std::string to_string(std::span<const std::string> names) const;

 private:
  std::vector<Term> terms_;
};

/// Graded-lex comparison used for term ordering.
bool monomial_less(const ParamMonomial& a, const ParamMonomial& b);

}  // namespace ckahler
