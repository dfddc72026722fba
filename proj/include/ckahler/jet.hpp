#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ckahler/rational.hpp"
#include "ckahler/scalar.hpp"

namespace ckahler {

/// Shared, immutable description of where and how deep jets are expanded:
/// the coordinate dimension, the maximal truncation order, the base point
/// and the monomial bookkeeping tables.
///
/// Monomials are ordered by total degree first, so the monomials of degree
/// at most k form a prefix of length `size(k)`; truncation is a resize.
class JetSpace {
 public:
  static std::shared_ptr<const JetSpace> create(int dim, int max_order, std::vector<Rational> base_point);

  int dim() const { return dim_; }
  int max_order() const { return max_order_; }
  const std::vector<Rational>& base_point() const { return base_point_; }

  std::size_t size(int order) const { return prefix_[static_cast<std::size_t>(order)]; }
  std::span<const std::uint8_t> exponents(std::size_t index) const {
    return {exponents_.data() + index * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  int degree(std::size_t index) const { return degrees_[index]; }
  /// Index of the product monomial; valid when the degrees sum to at most
  /// max_order.
  std::int32_t product(std::size_t i, std::size_t j) const { return products_[i][j]; }
  const std::vector<std::int32_t>& products_row(std::size_t i) const { return products_[i]; }
  /// Index of monomial i times x_dir, or -1 past max_order.
  std::int32_t shifted(std::size_t i, int dir) const {
    return shifted_[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(dir)];
  }
  std::int32_t index_of(std::span<const std::uint8_t> exps) const;

  bool same_expansion(const JetSpace& other) const {
    return this == &other || (dim_ == other.dim_ && base_point_ == other.base_point_);
  }

 private:
  JetSpace() = default;

  int dim_ = 0;
  int max_order_ = 0;
  std::vector<Rational> base_point_;
  std::vector<std::size_t> prefix_;
  std::vector<std::uint8_t> exponents_;
  std::vector<int> degrees_;
  std::vector<std::vector<std::int32_t>> products_;
  std::vector<std::int32_t> shifted_;
};

using JetSpacePtr = std::shared_ptr<const JetSpace>;

/// Truncated multivariate Taylor expansion at the space's base point,
/// f = sum_alpha a_alpha (x - p)^alpha over |alpha| <= order.
template <class S>
class Jet {
 public:
  using Traits = ScalarTraits<S>;

  Jet() = default;
  Jet(JetSpacePtr space, int order);

  static Jet constant(JetSpacePtr space, int order, const S& value);
  static Jet constant(JetSpacePtr space, int order, const Rational& value) {
    return constant(std::move(space), order, Traits::from_rational(value));
  }
  /// The coordinate function x_dir = p_dir + (x_dir - p_dir).
  static Jet coordinate(JetSpacePtr space, int order, int dir);

  const JetSpacePtr& space() const { return space_; }
  int order() const { return order_; }
  std::size_t size() const { return coeffs_.size(); }
  const S& operator[](std::size_t index) const { return coeffs_[index]; }
  const std::vector<S>& coefficients() const { return coeffs_; }
  const S& constant_term() const { return coeffs_.front(); }
  /// Taylor coefficient of (x - p)^exps.
  S coefficient(std::span<const std::uint8_t> exps) const;
  void set(std::size_t index, S value) { coeffs_[index] = std::move(value); }

  bool is_zero() const;
  double magnitude() const;

  Jet truncated(int order) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b) { return a.multiply(b); }
  friend Jet operator/(const Jet& a, const Jet& b) { return a.multiply(b.inverse()); }
  friend bool operator==(const Jet& a, const Jet& b) { return a.order_ == b.order_ && a.coeffs_ == b.coeffs_; }

  Jet scaled(const Rational& r) const;
  Jet scaled(const S& s) const;
  Jet multiply(const Jet& o) const;
  Jet inverse() const;
  Jet sqrt() const;
  Jet pow(unsigned k) const;
  /// Derivative in direction `dir`; the result has order one lower.
  Jet partial(int dir) const;

 private:
  void check_compatible(const Jet& o) const;

  JetSpacePtr space_;
  int order_ = 0;
  std::vector<S> coeffs_;
};

using ExactJet = Jet<ParamPoly>;
using FloatJet = Jet<double>;

extern template class Jet<ParamPoly>;
extern template class Jet<double>;

}  // namespace ckahler
