#include "ckahler/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ckahler/matrix.hpp"

namespace ckahler {

namespace {

template <class S>
bool jets_agree(const Jet<S>& a, const Jet<S>& b, bool negate) {
  if constexpr (ScalarTraits<S>::exact) {
    return negate ? a == -b : a == b;
  } else {
    const double scale = std::max({1.0, a.magnitude(), b.magnitude()});
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = negate ? a[i] + b[i] : a[i] - b[i];
      if (std::fabs(d) > 1e-9 * scale) return false;
    }
    return true;
  }
}

template <class S>
Jet<S> aligned(const Jet<S>& j, int order) {
  return j.order() == order ? j : j.truncated(order);
}

// Permutations of 0..k-1 with their signs.
std::vector<std::pair<std::vector<int>, int>> permutations_with_sign(int k) {
  std::vector<int> p(static_cast<std::size_t>(k));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::pair<std::vector<int>, int>> out;
  do {
    int inversions = 0;
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)]) ++inversions;
      }
    }
    out.emplace_back(p, inversions % 2 == 0 ? 1 : -1);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

template <class S>
Tensor<S> average_over_slots(const Tensor<S>& t, std::span<const int> slots, bool alternating) {
  const int k = static_cast<int>(slots.size());
  for (int s : slots) {
    if (s < 0 || s >= t.rank()) throw Error(ErrorCode::SlotMismatch, "slot out of range");
    if (t.valence()[static_cast<std::size_t>(s)] != t.valence()[static_cast<std::size_t>(slots[0])]) {
      throw Error(ErrorCode::SlotMismatch, "(anti)symmetrization over slots of mixed variance");
    }
  }
  if (k <= 1) return t;
  const auto perms = permutations_with_sign(k);
  Rational norm(1);
  for (int i = 2; i <= k; ++i) norm = norm * Rational(i);
  const Rational inv = norm.inverse();
  std::array<int, 12> j{};
  return Tensor<S>::generate(
      t.space(), t.valence(), t.order(),
      [&](std::span<const int> idx) {
        Jet<S> acc(t.space(), t.order());
        for (const auto& [p, sign] : perms) {
          std::copy(idx.begin(), idx.end(), j.begin());
          for (int q = 0; q < k; ++q) {
            j[static_cast<std::size_t>(slots[static_cast<std::size_t>(q)])] =
                idx[static_cast<std::size_t>(slots[static_cast<std::size_t>(p[static_cast<std::size_t>(q)])])];
          }
          const auto& c = t.at(std::span<const int>(j.data(), idx.size()));
          if (alternating && sign < 0) {
            acc -= c;
          } else {
            acc += c;
          }
        }
        return acc.scaled(inv);
      },
      t.weight());
}

}  // namespace

template <class S>
Tensor<S>::Tensor(JetSpacePtr space, Valence valence, int order, int weight)
    : space_(std::move(space)), valence_(std::move(valence)), order_(order), weight_(weight) {
  comps_.assign(power(dim(), rank()), JetT(space_, order));
}

template <class S>
Tensor<S>::Tensor(JetSpacePtr space, Valence valence, std::vector<JetT> components, int weight)
    : space_(std::move(space)), valence_(std::move(valence)), comps_(std::move(components)), weight_(weight) {
  if (comps_.size() != power(dim(), rank())) {
    throw Error(ErrorCode::SlotMismatch, "component count does not match dimension and rank");
  }
  order_ = comps_.front().order();
  for (const auto& c : comps_) {
    if (c.order() != order_) throw Error(ErrorCode::OrderMismatch, "tensor components of mixed order");
  }
}

template <class S>
Tensor<S> Tensor<S>::with_symmetries(std::vector<SymmetryAnnotation> annotations) const {
  std::array<int, 12> swapped{};
  for (const auto& a : annotations) {
    if (a.first < 0 || a.second < 0 || a.first >= rank() || a.second >= rank() || a.first == a.second) {
      throw Error(ErrorCode::SlotMismatch, "symmetry annotation names invalid slots");
    }
    bool ok = true;
    for_each_index(dim(), rank(), [&](std::span<const int> idx) {
      if (!ok) return;
      std::copy(idx.begin(), idx.end(), swapped.begin());
      std::swap(swapped[static_cast<std::size_t>(a.first)], swapped[static_cast<std::size_t>(a.second)]);
      if (!jets_agree(at(idx), at(std::span<const int>(swapped.data(), idx.size())), a.antisymmetric)) ok = false;
    });
    if (!ok) {
      throw Error(ErrorCode::SymmetryViolation, std::string("slots ") + std::to_string(a.first) + " and " +
                                                    std::to_string(a.second) + " are not " +
                                                    (a.antisymmetric ? "antisymmetric" : "symmetric"));
    }
  }
  Tensor r = *this;
  r.symmetries_ = std::move(annotations);
  return r;
}

template <class S>
Tensor<S> Tensor<S>::with_weight(int weight) const {
  Tensor r = *this;
  r.weight_ = weight;
  return r;
}

template <class S>
Tensor<S> Tensor<S>::truncated(int order) const {
  Tensor r = *this;
  r.order_ = order;
  for (auto& c : r.comps_) c = c.truncated(order);
  return r;
}

template <class S>
void Tensor<S>::check_same_shape(const Tensor& o) const {
  if (valence_ != o.valence_ || dim() != o.dim()) {
    throw Error(ErrorCode::SlotMismatch, "tensors of different valence");
  }
}

template <class S>
Tensor<S> Tensor<S>::operator-() const {
  Tensor r = *this;
  for (auto& c : r.comps_) c = -c;
  return r;
}

template <class S>
Tensor<S>& Tensor<S>::operator+=(const Tensor& o) {
  check_same_shape(o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += aligned(o.comps_[i], order_);
  symmetries_.clear();
  return *this;
}

template <class S>
Tensor<S>& Tensor<S>::operator-=(const Tensor& o) {
  check_same_shape(o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= aligned(o.comps_[i], order_);
  symmetries_.clear();
  return *this;
}

template <class S>
Tensor<S> Tensor<S>::scaled(const Rational& r) const {
  Tensor t = *this;
  for (auto& c : t.comps_) c = c.scaled(r);
  return t;
}

template <class S>
Tensor<S> Tensor<S>::multiplied(const JetT& f) const {
  const int ord = std::min(order_, f.order());
  Tensor t = truncated(ord);
  const JetT g = aligned(f, ord);
  for (auto& c : t.comps_) c = c * g;
  return t;
}

template <class S>
bool Tensor<S>::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const JetT& c) { return c.is_zero(); });
}

template <class S>
double Tensor<S>::magnitude() const {
  double m = 0.0;
  for (const auto& c : comps_) m = std::max(m, c.magnitude());
  return m;
}

template <class S>
Tensor<S> outer(const Tensor<S>& a, const Tensor<S>& b) {
  const int ord = std::min(a.order(), b.order());
  Valence v = a.valence();
  v.insert(v.end(), b.valence().begin(), b.valence().end());
  std::vector<Jet<S>> comps;
  comps.reserve(a.components().size() * b.components().size());
  for (const auto& x : a.components()) {
    const Jet<S> xa = aligned(x, ord);
    for (const auto& y : b.components()) comps.push_back(xa * aligned(y, ord));
  }
  return Tensor<S>(a.space(), std::move(v), std::move(comps), a.weight() + b.weight());
}

template <class S>
Tensor<S> contract(const Tensor<S>& t, int first, int second) {
  if (first == second || first < 0 || second < 0 || first >= t.rank() || second >= t.rank()) {
    throw Error(ErrorCode::SlotMismatch, "contraction slots invalid");
  }
  if (t.valence()[static_cast<std::size_t>(first)] == t.valence()[static_cast<std::size_t>(second)]) {
    throw Error(ErrorCode::SlotMismatch, "contraction needs one up and one down slot");
  }
  Valence v;
  for (int s = 0; s < t.rank(); ++s) {
    if (s != first && s != second) v.push_back(t.valence()[static_cast<std::size_t>(s)]);
  }
  std::array<int, 12> full{};
  return Tensor<S>::generate(
      t.space(), std::move(v), t.order(),
      [&](std::span<const int> idx) {
        std::size_t q = 0;
        for (int s = 0; s < t.rank(); ++s) {
          if (s != first && s != second) full[static_cast<std::size_t>(s)] = idx[q++];
        }
        Jet<S> acc(t.space(), t.order());
        for (int k = 0; k < t.dim(); ++k) {
          full[static_cast<std::size_t>(first)] = k;
          full[static_cast<std::size_t>(second)] = k;
          acc += t.at(std::span<const int>(full.data(), static_cast<std::size_t>(t.rank())));
        }
        return acc;
      },
      t.weight());
}

namespace {

template <class S>
Tensor<S> move_index(const Tensor<S>& t, int slot, const Tensor<S>& metric, Variance from, int weight_shift) {
  if (slot < 0 || slot >= t.rank()) throw Error(ErrorCode::SlotMismatch, "slot out of range");
  if (t.valence()[static_cast<std::size_t>(slot)] != from) {
    throw Error(ErrorCode::SlotMismatch, from == Variance::Down ? "raising an up slot" : "lowering a down slot");
  }
  const int ord = std::min(t.order(), metric.order());
  Valence v = t.valence();
  v[static_cast<std::size_t>(slot)] = from == Variance::Down ? Variance::Up : Variance::Down;
  std::array<int, 12> src{};
  return Tensor<S>::generate(
      t.space(), std::move(v), ord,
      [&](std::span<const int> idx) {
        std::copy(idx.begin(), idx.end(), src.begin());
        Jet<S> acc(t.space(), ord);
        const int i = idx[static_cast<std::size_t>(slot)];
        for (int k = 0; k < t.dim(); ++k) {
          const auto& m = metric(i, k);
          if (m.is_zero()) continue;
          src[static_cast<std::size_t>(slot)] = k;
          const auto& c = t.at(std::span<const int>(src.data(), idx.size()));
          if (c.is_zero()) continue;
          acc += aligned(m, ord) * aligned(c, ord);
        }
        return acc;
      },
      t.weight() + weight_shift);
}

}  // namespace

template <class S>
Tensor<S> raise(const Tensor<S>& t, int slot, const MetricJet<S>& m) {
  return move_index(t, slot, m.g_inv(), Variance::Down, -2);
}

template <class S>
Tensor<S> lower(const Tensor<S>& t, int slot, const MetricJet<S>& m) {
  return move_index(t, slot, m.g(), Variance::Up, 2);
}

template <class S>
Tensor<S> move_and_contract(const Tensor<S>& t, std::span<const PlanStep> plan, const MetricJet<S>& m) {
  Tensor<S> cur = t;
  for (const auto& step : plan) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Raise>) {
            cur = raise(cur, s.slot, m);
          } else if constexpr (std::is_same_v<T, Lower>) {
            cur = lower(cur, s.slot, m);
          } else {
            cur = contract(cur, s.first, s.second);
          }
        },
        step);
  }
  return cur;
}

template <class S>
Tensor<S> permute(const Tensor<S>& t, std::span<const int> order) {
  if (static_cast<int>(order.size()) != t.rank()) throw Error(ErrorCode::SlotMismatch, "permutation length");
  std::vector<int> check(order.begin(), order.end());
  std::sort(check.begin(), check.end());
  for (int i = 0; i < t.rank(); ++i) {
    if (check[static_cast<std::size_t>(i)] != i) throw Error(ErrorCode::SlotMismatch, "not a permutation");
  }
  Valence v(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) v[k] = t.valence()[static_cast<std::size_t>(order[k])];
  std::array<int, 12> src{};
  return Tensor<S>::generate(
      t.space(), std::move(v), t.order(),
      [&](std::span<const int> idx) {
        for (std::size_t k = 0; k < order.size(); ++k) src[static_cast<std::size_t>(order[k])] = idx[k];
        return t.at(std::span<const int>(src.data(), idx.size()));
      },
      t.weight());
}

template <class S>
Tensor<S> alternate(const Tensor<S>& t, std::span<const int> slots) {
  return average_over_slots(t, slots, true);
}

template <class S>
Tensor<S> symmetrize(const Tensor<S>& t, std::span<const int> slots) {
  return average_over_slots(t, slots, false);
}

template <class S>
Tensor<S> partial_derivative(const Tensor<S>& t) {
  Valence v{Variance::Down};
  v.insert(v.end(), t.valence().begin(), t.valence().end());
  return Tensor<S>::generate(
      t.space(), std::move(v), t.order() - 1,
      [&](std::span<const int> idx) { return t.at(idx.subspan(1)).partial(idx[0]); }, t.weight());
}

template <class S>
Tensor<S> covariant_derivative(const Tensor<S>& t, const Christoffel<S>& gamma) {
  const int ord = std::min(t.order() - 1, gamma.order());
  if (ord < 0) throw Error(ErrorCode::OrderExhausted, "covariant derivative of an order-0 tensor");
  const int n = t.dim();
  const int r = t.rank();
  std::vector<char> nonzero(gamma.components().size());
  for (std::size_t i = 0; i < nonzero.size(); ++i) nonzero[i] = !gamma.components()[i].is_zero();
  const auto gidx = [n](int a, int b, int c) {
    return (static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)) *
               static_cast<std::size_t>(n) +
           static_cast<std::size_t>(c);
  };
  Valence v{Variance::Down};
  v.insert(v.end(), t.valence().begin(), t.valence().end());
  std::array<int, 12> src{};
  return Tensor<S>::generate(
      t.space(), std::move(v), ord,
      [&](std::span<const int> idx) {
        const int a = idx[0];
        const auto rest = idx.subspan(1);
        Jet<S> acc = aligned(t.at(rest).partial(a), ord);
        for (int s = 0; s < r; ++s) {
          std::copy(rest.begin(), rest.end(), src.begin());
          const int i = rest[static_cast<std::size_t>(s)];
          const bool is_up = t.valence()[static_cast<std::size_t>(s)] == Variance::Up;
          for (int e = 0; e < n; ++e) {
            // up slot: + Gamma^i_ae T^..e..; down slot: - Gamma^e_ai T_..e..
            const std::size_t g = is_up ? gidx(i, a, e) : gidx(e, a, i);
            if (!nonzero[g]) continue;
            src[static_cast<std::size_t>(s)] = e;
            const auto& c = t.at(std::span<const int>(src.data(), rest.size()));
            if (c.is_zero()) continue;
            Jet<S> term = aligned(gamma.components()[g], ord) * aligned(c, ord);
            if (is_up) {
              acc += term;
            } else {
              acc -= term;
            }
          }
        }
        return acc;
      },
      t.weight());
}

template <class S>
MetricJet<S>::MetricJet(Tensor<S> g) : g_(std::move(g)) {
  using T = ScalarTraits<S>;
  if (g_.rank() != 2 || g_.valence() != down(2)) throw Error(ErrorCode::SlotMismatch, "metric must be (0,2)");
  g_ = g_.with_symmetries({{0, 1, false}});
  const int n = g_.dim();
  const auto N = static_cast<std::size_t>(n);
  const int ord = g_.order();
  const auto& space = g_.space();

  Matrix<S> g0(N, N);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g0(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = g_(i, j).constant_term();
  }

  // Inverse of the constant part.
  Matrix<S> g0inv(N, N);
  S det0{};
  if constexpr (T::exact) {
    det0 = determinant_bareiss(g0);
    if (det0.is_zero()) throw Error(ErrorCode::DegenerateMetricAtPoint, "metric is degenerate at the base point");
    const S det0inv = T::inverse(det0);
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        Matrix<S> minor(N - 1, N - 1);
        for (std::size_t r = 0, mr = 0; r < N; ++r) {
          if (r == j) continue;
          for (std::size_t c = 0, mc = 0; c < N; ++c) {
            if (c == i) continue;
            minor(mr, mc++) = g0(r, c);
          }
          ++mr;
        }
        S cof = N == 1 ? T::from_rational(Rational(1)) : determinant_bareiss(minor);
        if ((i + j) % 2 == 1) cof = -cof;
        g0inv(i, j) = cof * det0inv;
      }
    }
  } else {
    Matrix<S> a = g0;
    g0inv = Matrix<S>::identity(N);
    det0 = 1.0;
    const double scale = std::max(1.0, g0.magnitude());
    for (std::size_t k = 0; k < N; ++k) {
      std::size_t p = k;
      for (std::size_t r = k + 1; r < N; ++r) {
        if (std::fabs(a(r, k)) > std::fabs(a(p, k))) p = r;
      }
      if (std::fabs(a(p, k)) < 1e-12 * scale) {
        throw Error(ErrorCode::DegenerateMetricAtPoint, "metric is degenerate at the base point");
      }
      if (p != k) {
        for (std::size_t c = 0; c < N; ++c) {
          std::swap(a(k, c), a(p, c));
          std::swap(g0inv(k, c), g0inv(p, c));
        }
        det0 = -det0;
      }
      const double piv = a(k, k);
      det0 *= piv;
      for (std::size_t c = 0; c < N; ++c) {
        a(k, c) /= piv;
        g0inv(k, c) /= piv;
      }
      for (std::size_t r = 0; r < N; ++r) {
        if (r == k || a(r, k) == 0.0) continue;
        const double f = a(r, k);
        for (std::size_t c = 0; c < N; ++c) {
          a(r, c) -= f * a(k, c);
          g0inv(r, c) -= f * g0inv(k, c);
        }
      }
    }
  }

  // A = g0^{-1} g has identity constant part; eliminate without pivoting.
  std::vector<Jet<S>> A(N * N, Jet<S>(space, ord));
  std::vector<Jet<S>> B(N * N, Jet<S>(space, ord));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      for (std::size_t k = 0; k < N; ++k) {
        if (!T::is_zero(g0inv(i, k))) A[i * N + j] += g_(static_cast<int>(k), static_cast<int>(j)).scaled(g0inv(i, k));
      }
    }
    B[i * N + i] = Jet<S>::constant(space, ord, Rational(1));
  }
  Jet<S> detA = Jet<S>::constant(space, ord, Rational(1));
  for (std::size_t k = 0; k < N; ++k) {
    const Jet<S> piv = A[k * N + k];
    detA = detA * piv;
    const Jet<S> pinv = piv.inverse();
    for (std::size_t c = 0; c < N; ++c) {
      A[k * N + c] = A[k * N + c] * pinv;
      B[k * N + c] = B[k * N + c] * pinv;
    }
    for (std::size_t r = 0; r < N; ++r) {
      if (r == k || A[r * N + k].is_zero()) continue;
      const Jet<S> f = A[r * N + k];
      for (std::size_t c = 0; c < N; ++c) {
        A[r * N + c] -= f * A[k * N + c];
        B[r * N + c] -= f * B[k * N + c];
      }
    }
  }
  // g^{-1} = A^{-1} g0^{-1}
  std::vector<Jet<S>> inv(N * N, Jet<S>(space, ord));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      for (std::size_t k = 0; k < N; ++k) {
        if (!T::is_zero(g0inv(k, j))) inv[i * N + j] += B[i * N + k].scaled(g0inv(k, j));
      }
    }
  }
  g_inv_ = Tensor<S>(space, up(2), std::move(inv));
  det_ = detA.scaled(det0);
}

template <class S>
MetricJet<S> MetricJet<S>::truncated(int order) const {
  MetricJet m;
  m.g_ = g_.truncated(order);
  m.g_inv_ = g_inv_.truncated(order);
  m.det_ = det_.truncated(order);
  return m;
}

template <class S>
Christoffel<S> christoffel(const MetricJet<S>& m) {
  const auto dg = partial_derivative(m.g());  // dg(c, a, b) = d_c g_ab
  const int n = m.dim();
  const int ord = dg.order();
  std::vector<Jet<S>> lowered(static_cast<std::size_t>(n * n * n), Jet<S>(m.space(), ord));
  for (int d = 0; d < n; ++d) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        lowered[static_cast<std::size_t>((d * n + b) * n + c)] = (dg(b, d, c) + dg(c, d, b) - dg(d, b, c)).scaled(Rational(1, 2));
      }
    }
  }
  return Tensor<S>::generate(m.space(), Valence{Variance::Up, Variance::Down, Variance::Down}, ord,
                             [&](std::span<const int> idx) {
                               Jet<S> acc(m.space(), ord);
                               for (int d = 0; d < n; ++d) {
                                 const auto& gi = m.g_inv()(idx[0], d);
                                 if (gi.is_zero()) continue;
                                 const auto& l = lowered[static_cast<std::size_t>((d * n + idx[1]) * n + idx[2])];
                                 if (l.is_zero()) continue;
                                 acc += gi.truncated(ord) * l;
                               }
                               return acc;
                             });
}

template <class S>
Tensor<S> identity_metric(JetSpacePtr space, int order) {
  return Tensor<S>::generate(space, down(2), order, [&](std::span<const int> idx) {
    return Jet<S>::constant(space, order, Rational(idx[0] == idx[1] ? 1 : 0));
  });
}

Jet<double> evaluate_parameters(const Jet<ParamPoly>& j, std::span<const double> params) {
  Jet<double> r(j.space(), j.order());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_zero()) r.set(i, j[i].evaluate(params));
  }
  return r;
}

Tensor<double> evaluate_parameters(const Tensor<ParamPoly>& t, std::span<const double> params) {
  std::vector<Jet<double>> comps;
  comps.reserve(t.components().size());
  for (const auto& c : t.components()) comps.push_back(evaluate_parameters(c, params));
  return Tensor<double>(t.space(), t.valence(), std::move(comps), t.weight());
}

template class Tensor<ParamPoly>;
template class Tensor<double>;
template class MetricJet<ParamPoly>;
template class MetricJet<double>;

#define CKAHLER_INSTANTIATE(S)                                                                           \
  template Tensor<S> outer(const Tensor<S>&, const Tensor<S>&);                                          \
  template Tensor<S> contract(const Tensor<S>&, int, int);                                               \
  template Tensor<S> raise(const Tensor<S>&, int, const MetricJet<S>&);                                  \
  template Tensor<S> lower(const Tensor<S>&, int, const MetricJet<S>&);                                  \
  template Tensor<S> move_and_contract(const Tensor<S>&, std::span<const PlanStep>, const MetricJet<S>&); \
  template Tensor<S> permute(const Tensor<S>&, std::span<const int>);                                    \
  template Tensor<S> alternate(const Tensor<S>&, std::span<const int>);                                  \
  template Tensor<S> symmetrize(const Tensor<S>&, std::span<const int>);                                 \
  template Tensor<S> partial_derivative(const Tensor<S>&);                                               \
  template Tensor<S> covariant_derivative(const Tensor<S>&, const Christoffel<S>&);                      \
  template Christoffel<S> christoffel(const MetricJet<S>&);                                              \
  template Tensor<S> identity_metric(JetSpacePtr, int);

CKAHLER_INSTANTIATE(ParamPoly)
CKAHLER_INSTANTIATE(double)

#undef CKAHLER_INSTANTIATE

}  // namespace ckahler
