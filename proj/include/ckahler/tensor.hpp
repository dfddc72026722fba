#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <variant>
#include <vector>

#include "ckahler/error.hpp"
#include "ckahler/jet.hpp"

namespace ckahler {

enum class Variance : std::uint8_t { Up, Down };
using Valence = std::vector<Variance>;

inline Valence down(int rank) { return Valence(static_cast<std::size_t>(rank), Variance::Down); }
inline Valence up(int rank) { return Valence(static_cast<std::size_t>(rank), Variance::Up); }

/// A declared (anti)symmetry between two slots, checked when attached.
struct SymmetryAnnotation {
  int first = 0;
  int second = 1;
  bool antisymmetric = true;
};

/// Calls fn(span of indices) for every multi-index in [0, dim)^rank, last
/// index fastest.
template <class F>
void for_each_index(int dim, int rank, F&& fn) {
  std::array<int, 12> idx{};
  const std::span<const int> view(idx.data(), static_cast<std::size_t>(rank));
  if (rank == 0) {
    fn(view);
    return;
  }
  while (true) {
    fn(view);
    int pos = rank - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == dim) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

/// Dense coordinate-component tensor with jet-valued entries. Components
/// are stored row-major over the slots; every entry has the same order.
/// The weight is bookkeeping for conformal densities only.
template <class S>
class Tensor {
 public:
  using JetT = Jet<S>;

  Tensor() = default;
  Tensor(JetSpacePtr space, Valence valence, int order, int weight = 0);
  Tensor(JetSpacePtr space, Valence valence, std::vector<JetT> components, int weight = 0);

  template <class F>
  static Tensor generate(JetSpacePtr space, Valence valence, int order, F&& fn, int weight = 0) {
    const int dim = space->dim();
    const int rank = static_cast<int>(valence.size());
    std::vector<JetT> comps;
    comps.reserve(power(dim, rank));
    for_each_index(dim, rank, [&](std::span<const int> idx) {
      JetT value = fn(idx);
      comps.push_back(value.order() == order ? std::move(value) : value.truncated(order));
    });
    return Tensor(std::move(space), std::move(valence), std::move(comps), weight);
  }

  const JetSpacePtr& space() const { return space_; }
  int dim() const { return space_->dim(); }
  int rank() const { return static_cast<int>(valence_.size()); }
  const Valence& valence() const { return valence_; }
  int weight() const { return weight_; }
  int order() const { return order_; }
  const std::vector<SymmetryAnnotation>& symmetries() const { return symmetries_; }

  std::size_t flat_index(std::span<const int> idx) const {
    std::size_t f = 0;
    for (int i : idx) f = f * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(i);
    return f;
  }
  const JetT& at(std::span<const int> idx) const { return comps_[flat_index(idx)]; }
  template <class... I>
  const JetT& operator()(I... idx) const {
    const std::array<int, sizeof...(I)> a{static_cast<int>(idx)...};
    return at(a);
  }
  const std::vector<JetT>& components() const { return comps_; }

  /// Attaches annotations after verifying them component by component;
  /// throws Error(SymmetryViolation) on the first mismatch.
  Tensor with_symmetries(std::vector<SymmetryAnnotation> annotations) const;
  Tensor with_weight(int weight) const;

  Tensor truncated(int order) const;
  Tensor constant_part() const { return truncated(0); }

  Tensor operator-() const;
  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  Tensor scaled(const Rational& r) const;
  Tensor multiplied(const JetT& f) const;

  bool is_zero() const;
  double magnitude() const;
  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.valence_ == b.valence_ && a.comps_ == b.comps_;
  }

  static std::size_t power(int base, int exp) {
    std::size_t p = 1;
    for (int i = 0; i < exp; ++i) p *= static_cast<std::size_t>(base);
    return p;
  }

 private:
  void check_same_shape(const Tensor& o) const;

  JetSpacePtr space_;
  Valence valence_;
  std::vector<JetT> comps_;
  int order_ = 0;
  int weight_ = 0;
  std::vector<SymmetryAnnotation> symmetries_;
};

template <class S>
class MetricJet;

/// Christoffel symbols Gamma^a_bc stored as an (up, down, down) tensor.
template <class S>
using Christoffel = Tensor<S>;

// Index steps for move_and_contract. Slot numbers refer to the tensor as it
// is after the preceding steps.
struct Raise {
  int slot;
};
struct Lower {
  int slot;
};
struct Contract {
  int first;
  int second;
};
using PlanStep = std::variant<Raise, Lower, Contract>;

template <class S>
Tensor<S> outer(const Tensor<S>& a, const Tensor<S>& b);
/// Traces an up slot against a down slot.
template <class S>
Tensor<S> contract(const Tensor<S>& t, int first, int second);
template <class S>
Tensor<S> raise(const Tensor<S>& t, int slot, const MetricJet<S>& m);
template <class S>
Tensor<S> lower(const Tensor<S>& t, int slot, const MetricJet<S>& m);
template <class S>
Tensor<S> move_and_contract(const Tensor<S>& t, std::span<const PlanStep> plan, const MetricJet<S>& m);
/// Result slot k is input slot order[k].
template <class S>
Tensor<S> permute(const Tensor<S>& t, std::span<const int> order);
/// Normalized antisymmetrization over the listed slots (divides by k!).
template <class S>
Tensor<S> alternate(const Tensor<S>& t, std::span<const int> slots);
template <class S>
Tensor<S> symmetrize(const Tensor<S>& t, std::span<const int> slots);
/// Coordinate derivative, prepended as a new first down slot.
template <class S>
Tensor<S> partial_derivative(const Tensor<S>& t);
/// Levi-Civita covariant derivative, prepended as a new first down slot.
template <class S>
Tensor<S> covariant_derivative(const Tensor<S>& t, const Christoffel<S>& gamma);

template <class S>
Tensor<S> alternate(const Tensor<S>& t, std::initializer_list<int> slots) {
  return alternate(t, std::span<const int>(slots.begin(), slots.size()));
}
template <class S>
Tensor<S> symmetrize(const Tensor<S>& t, std::initializer_list<int> slots) {
  return symmetrize(t, std::span<const int>(slots.begin(), slots.size()));
}
template <class S>
Tensor<S> permute(const Tensor<S>& t, std::initializer_list<int> order) {
  return permute(t, std::span<const int>(order.begin(), order.size()));
}

/// Metric together with its jet inverse and determinant.
template <class S>
class MetricJet {
 public:
  /// Validates symmetry and invertibility at the base point. In the exact
  /// backend the determinant at the point must be a nonzero rational.
  explicit MetricJet(Tensor<S> g);

  const Tensor<S>& g() const { return g_; }
  const Tensor<S>& g_inv() const { return g_inv_; }
  const Jet<S>& det() const { return det_; }
  const JetSpacePtr& space() const { return g_.space(); }
  int dim() const { return g_.dim(); }
  int order() const { return g_.order(); }

  /// Same metric truncated to a lower order.
  MetricJet truncated(int order) const;

 private:
  MetricJet() = default;

  Tensor<S> g_;
  Tensor<S> g_inv_;
  Jet<S> det_;
};

/// Gamma^a_bc = 1/2 g^ad (d_b g_dc + d_c g_db - d_d g_bc).
template <class S>
Christoffel<S> christoffel(const MetricJet<S>& m);

/// The Euclidean metric as constant jets.
template <class S>
Tensor<S> identity_metric(JetSpacePtr space, int order);

/// Exact zero test in the exact backend; relative to `scale` in float.
template <class S>
bool vanishes(const Tensor<S>& t, double scale = 1.0, double eps = 1e-9) {
  if constexpr (ScalarTraits<S>::exact) {
    return t.is_zero();
  } else {
    return t.magnitude() <= eps * std::max(1.0, scale);
  }
}

template <class S>
bool vanishes(const Jet<S>& j, double scale = 1.0, double eps = 1e-9) {
  if constexpr (ScalarTraits<S>::exact) {
    return j.is_zero();
  } else {
    return j.magnitude() <= eps * std::max(1.0, scale);
  }
}

/// Substitutes parameter values, producing the float-backend tensor.
Tensor<double> evaluate_parameters(const Tensor<ParamPoly>& t, std::span<const double> params);
Jet<double> evaluate_parameters(const Jet<ParamPoly>& j, std::span<const double> params);

extern template class Tensor<ParamPoly>;
extern template class Tensor<double>;
extern template class MetricJet<ParamPoly>;
extern template class MetricJet<double>;

}  // namespace ckahler
