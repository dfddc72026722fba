#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ckahler/error.hpp"
#include "ckahler/param_poly.hpp"
#include "ckahler/rational.hpp"

namespace ckahler {

/// Which arithmetic a computation runs on. Exact mode never tolerates a
/// residual; Float mode declares its zero tolerance up front.
struct ScalarBackend {
  enum class Mode { Exact, Float };

  Mode mode = Mode::Exact;
  double epsilon = 0.0;

  static ScalarBackend exact() { return {Mode::Exact, 0.0}; }
  static ScalarBackend floating(double eps = 1e-9) { return {Mode::Float, eps}; }
  bool is_exact() const { return mode == Mode::Exact; }
  std::string name() const { return is_exact() ? "exact" : "float"; }
};

/// The scalar contract every coefficient type satisfies. `ParamPoly` is
/// the exact backend, `double` the floating one.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<ParamPoly> {
  static constexpr bool exact = true;

  static ParamPoly from_rational(const Rational& r) { return ParamPoly(r); }
  static ParamPoly scale(const ParamPoly& x, const Rational& r) { return x.scaled(r); }
  static bool is_zero(const ParamPoly& x) { return x.is_zero(); }
  static double magnitude(const ParamPoly& x) { return x.max_abs_coefficient(); }

  /// Only nonzero rational constants are units; parameter division is
  /// never performed.
  static ParamPoly inverse(const ParamPoly& x) {
    auto c = x.constant_value();
    if (!c || c->is_zero()) {
      throw Error(ErrorCode::DivisionByNonUnit,
                  x.is_zero() ? "constant term is zero" : "constant term depends on parameters");
    }
    return ParamPoly(c->inverse());
  }

  static ParamPoly sqrt(const ParamPoly& x) {
    auto c = x.constant_value();
    std::optional<Rational> root = c ? c->sqrt_exact() : std::nullopt;
    if (!root || root->is_zero()) {
      throw Error(ErrorCode::NonPerfectSquareConstantTerm,
                  "constant term is not the square of a nonzero rational; supply the scale explicitly "
                  "or use the float backend");
    }
    return ParamPoly(*root);
  }

  static ParamPoly exact_quotient(const ParamPoly& a, const ParamPoly& b) { return a.divide_exact(b); }
  static bool is_positive_constant(const ParamPoly& x) {
    auto c = x.constant_value();
    return c && c->sign() > 0;
  }
  static std::string to_string(const ParamPoly& x, std::span<const std::string> names) {
    return x.to_string(names);
  }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;

  static double from_rational(const Rational& r) { return r.to_double(); }
  static double scale(double x, const Rational& r) { return x * r.to_double(); }
  static bool is_zero(double x) { return x == 0.0; }
  static double magnitude(double x) { return std::fabs(x); }

  static double inverse(double x) {
    if (x == 0.0) throw Error(ErrorCode::DivisionByNonUnit, "constant term is zero");
    return 1.0 / x;
  }

  static double sqrt(double x) {
    if (!(x > 0.0)) throw Error(ErrorCode::NonPositive, "square root of a non-positive constant term");
    return std::sqrt(x);
  }

  static double exact_quotient(double a, double b) { return a / b; }
  static bool is_positive_constant(double x) { return x > 0.0; }
  static std::string to_string(double x, std::span<const std::string>);
};

}  // namespace ckahler
