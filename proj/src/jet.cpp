#include "ckahler/jet.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "ckahler/error.hpp"

namespace ckahler {

namespace {

// All exponent vectors of total degree `degree` in `dim` variables, with
// x_0 varying slowest (x_0^d first).
void enumerate_degree(int dim, int degree, std::vector<std::uint8_t>& current, int pos,
                      std::vector<std::vector<std::uint8_t>>& out) {
  if (pos == dim - 1) {
    current[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(degree);
    out.push_back(current);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(e);
    enumerate_degree(dim, degree - e, current, pos + 1, out);
  }
}

}  // namespace

std::shared_ptr<const JetSpace> JetSpace::create(int dim, int max_order, std::vector<Rational> base_point) {
  if (dim <= 0 || max_order < 0) throw Error(ErrorCode::SchemaError, "jet space needs dim > 0 and order >= 0");
  if (static_cast<int>(base_point.size()) != dim) {
    throw Error(ErrorCode::BasePointMismatch, "base point length differs from dimension");
  }
  std::shared_ptr<JetSpace> s(new JetSpace());
  s->dim_ = dim;
  s->max_order_ = max_order;
  s->base_point_ = std::move(base_point);

  std::vector<std::vector<std::uint8_t>> monomials;
  std::vector<std::uint8_t> current(static_cast<std::size_t>(dim), 0);
  for (int d = 0; d <= max_order; ++d) {
    enumerate_degree(dim, d, current, 0, monomials);
    s->prefix_.push_back(monomials.size());
  }
  std::map<std::vector<std::uint8_t>, std::int32_t> index;
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    index.emplace(monomials[i], static_cast<std::int32_t>(i));
    s->exponents_.insert(s->exponents_.end(), monomials[i].begin(), monomials[i].end());
    int deg = 0;
    for (auto e : monomials[i]) deg += e;
    s->degrees_.push_back(deg);
  }

  s->products_.resize(monomials.size());
  std::vector<std::uint8_t> sum(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    std::size_t count = s->prefix_[static_cast<std::size_t>(max_order - s->degrees_[i])];
    auto& row = s->products_[i];
    row.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = monomials[i][k] + monomials[j][k];
      row[j] = index.at(sum);
    }
  }

  s->shifted_.assign(monomials.size() * static_cast<std::size_t>(dim), -1);
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    if (s->degrees_[i] == max_order) continue;
    for (int dir = 0; dir < dim; ++dir) {
      auto m = monomials[i];
      m[static_cast<std::size_t>(dir)] += 1;
      s->shifted_[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(dir)] = index.at(m);
    }
  }
  return s;
}

std::int32_t JetSpace::index_of(std::span<const std::uint8_t> exps) const {
  if (static_cast<int>(exps.size()) != dim_) return -1;
  int deg = 0;
  for (auto e : exps) deg += e;
  if (deg > max_order_) return -1;
  std::size_t begin = deg == 0 ? 0 : prefix_[static_cast<std::size_t>(deg - 1)];
  for (std::size_t i = begin; i < prefix_[static_cast<std::size_t>(deg)]; ++i) {
    auto m = exponents(i);
    if (std::equal(m.begin(), m.end(), exps.begin())) return static_cast<std::int32_t>(i);
  }
  return -1;
}

template <class S>
Jet<S>::Jet(JetSpacePtr space, int order) : space_(std::move(space)), order_(order) {
  if (!space_) throw Error(ErrorCode::SchemaError, "jet without a space");
  if (order < 0 || order > space_->max_order()) {
    throw Error(ErrorCode::OrderMismatch, "jet order " + std::to_string(order) + " outside the space");
  }
  coeffs_.assign(space_->size(order), S{});
}

template <class S>
Jet<S> Jet<S>::constant(JetSpacePtr space, int order, const S& value) {
  Jet j(std::move(space), order);
  j.coeffs_[0] = value;
  return j;
}

template <class S>
Jet<S> Jet<S>::coordinate(JetSpacePtr space, int order, int dir) {
  const Rational p = space->base_point()[static_cast<std::size_t>(dir)];
  Jet j = constant(space, order, Traits::from_rational(p));
  if (order >= 1) j.coeffs_[static_cast<std::size_t>(1 + dir)] = Traits::from_rational(Rational(1));
  return j;
}

template <class S>
S Jet<S>::coefficient(std::span<const std::uint8_t> exps) const {
  auto idx = space_->index_of(exps);
  if (idx < 0 || static_cast<std::size_t>(idx) >= coeffs_.size()) return S{};
  return coeffs_[static_cast<std::size_t>(idx)];
}

template <class S>
bool Jet<S>::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const S& c) { return Traits::is_zero(c); });
}

template <class S>
double Jet<S>::magnitude() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, Traits::magnitude(c));
  return m;
}

template <class S>
Jet<S> Jet<S>::truncated(int order) const {
  if (order > order_) {
    throw Error(ErrorCode::OrderExhausted,
                "cannot raise jet order from " + std::to_string(order_) + " to " + std::to_string(order));
  }
  if (order < 0) throw Error(ErrorCode::OrderExhausted, "negative jet order");
  Jet r = *this;
  r.order_ = order;
  r.coeffs_.resize(space_->size(order));
  return r;
}

template <class S>
void Jet<S>::check_compatible(const Jet& o) const {
  if (!space_->same_expansion(*o.space_)) {
    throw Error(ErrorCode::BasePointMismatch, "jets expanded at different base points");
  }
  if (order_ != o.order_) {
    throw Error(ErrorCode::OrderMismatch,
                "jet orders " + std::to_string(order_) + " and " + std::to_string(o.order_));
  }
}

template <class S>
Jet<S> Jet<S>::operator-() const {
  Jet r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

template <class S>
Jet<S>& Jet<S>::operator+=(const Jet& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!Traits::is_zero(o.coeffs_[i])) coeffs_[i] += o.coeffs_[i];
  }
  return *this;
}

template <class S>
Jet<S>& Jet<S>::operator-=(const Jet& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!Traits::is_zero(o.coeffs_[i])) coeffs_[i] -= o.coeffs_[i];
  }
  return *this;
}

template <class S>
Jet<S> Jet<S>::scaled(const Rational& r) const {
  Jet out = *this;
  for (auto& c : out.coeffs_) {
    if (!Traits::is_zero(c)) c = Traits::scale(c, r);
  }
  return out;
}

template <class S>
Jet<S> Jet<S>::scaled(const S& s) const {
  Jet out = *this;
  for (auto& c : out.coeffs_) {
    if (!Traits::is_zero(c)) c = c * s;
  }
  return out;
}

template <class S>
Jet<S> Jet<S>::multiply(const Jet& o) const {
  check_compatible(o);
  Jet r(space_, order_);
  std::vector<std::size_t> nz;
  for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
    if (!Traits::is_zero(o.coeffs_[j])) nz.push_back(j);
  }
  if (nz.empty()) return r;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (Traits::is_zero(coeffs_[i])) continue;
    const auto& row = space_->products_row(i);
    std::size_t limit = space_->size(order_ - space_->degree(i));
    for (std::size_t j : nz) {
      if (j >= limit) break;
      r.coeffs_[static_cast<std::size_t>(row[j])] += coeffs_[i] * o.coeffs_[j];
    }
  }
  return r;
}

template <class S>
Jet<S> Jet<S>::inverse() const {
  // 1/(a0 (1 + u)) = a0^{-1} sum_k (-u)^k, u nilpotent at this order.
  S inv0 = Traits::inverse(coeffs_[0]);
  Jet u = scaled(inv0);
  u.coeffs_[0] = S{};
  Jet one = constant(space_, order_, Traits::from_rational(Rational(1)));
  Jet result = one;
  for (int k = 0; k < order_; ++k) result = one - u * result;
  return result.scaled(inv0);
}

template <class S>
Jet<S> Jet<S>::sqrt() const {
  S root0 = Traits::sqrt(coeffs_[0]);
  S inv0 = Traits::inverse(coeffs_[0]);
  Jet u = scaled(inv0);
  u.coeffs_[0] = S{};
  // binomial(1/2, k) for k = 0..order
  std::vector<Rational> binom{Rational(1)};
  for (int k = 1; k <= order_; ++k) {
    binom.push_back(binom.back() * (Rational(1, 2) - Rational(k - 1)) / Rational(k));
  }
  Jet result = constant(space_, order_, Traits::from_rational(binom[static_cast<std::size_t>(order_)]));
  for (int k = order_ - 1; k >= 0; --k) {
    result = u * result;
    result.coeffs_[0] += Traits::from_rational(binom[static_cast<std::size_t>(k)]);
  }
  return result.scaled(root0);
}

template <class S>
Jet<S> Jet<S>::pow(unsigned k) const {
  Jet result = constant(space_, order_, Traits::from_rational(Rational(1)));
  Jet base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

template <class S>
Jet<S> Jet<S>::partial(int dir) const {
  if (order_ == 0) throw Error(ErrorCode::OrderExhausted, "derivative of an order-0 jet");
  if (dir < 0 || dir >= space_->dim()) throw Error(ErrorCode::SlotMismatch, "derivative direction out of range");
  Jet r(space_, order_ - 1);
  for (std::size_t i = 0; i < r.coeffs_.size(); ++i) {
    auto src = space_->shifted(i, dir);
    const S& c = coeffs_[static_cast<std::size_t>(src)];
    if (Traits::is_zero(c)) continue;
    unsigned e = space_->exponents(i)[static_cast<std::size_t>(dir)] + 1u;
    r.coeffs_[i] = Traits::scale(c, Rational(static_cast<long>(e)));
  }
  return r;
}

template class Jet<ParamPoly>;
template class Jet<double>;

std::string ScalarTraits<double>::to_string(double x, std::span<const std::string>) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace ckahler
