#include "ckahler/obstruction.hpp"

#include <cmath>

namespace ckahler {

TwoFormBasis::TwoFormBasis(int n) : n_(n), lookup_(static_cast<std::size_t>(n * n), 0) {
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      lookup_[static_cast<std::size_t>(a * n + b)] = pairs_.size();
      lookup_[static_cast<std::size_t>(b * n + a)] = pairs_.size();
      pairs_.emplace_back(a, b);
    }
  }
}

std::size_t TwoFormBasis::index(int a, int b) const {
  if (a == b) throw Error(ErrorCode::SlotMismatch, "two-form basis needs distinct indices");
  return lookup_[static_cast<std::size_t>(a * n_ + b)];
}

namespace {

template <class S>
using T = ScalarTraits<S>;

template <class S>
S half(const S& x) {
  return T<S>::scale(x, Rational(1, 2));
}

template <class S>
bool same(const S& a, const S& b, double eps) {
  if constexpr (T<S>::exact) {
    return a == b;
  } else {
    return std::fabs(a - b) <= eps * std::max({1.0, std::fabs(a), std::fabs(b)});
  }
}

// Matrix on the pair basis of a linear map on (antisymmetric) n x n arrays.
template <class S, class F>
Matrix<S> endomorphism_matrix(const TwoFormBasis& basis, F&& fn) {
  const auto n = static_cast<std::size_t>(basis.dim());
  const std::size_t N = basis.size();
  Matrix<S> out(N, N);
  const S one = T<S>::from_rational(Rational(1));
  for (std::size_t col = 0; col < N; ++col) {
    const auto [c, d] = basis.pair(col);
    Matrix<S> phi(n, n);
    phi(static_cast<std::size_t>(c), static_cast<std::size_t>(d)) = one;
    phi(static_cast<std::size_t>(d), static_cast<std::size_t>(c)) = -one;
    const Matrix<S> image = fn(phi);
    for (std::size_t row = 0; row < N; ++row) {
      const auto [a, b] = basis.pair(row);
      out(row, col) = image(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    }
  }
  return out;
}

template <class S>
void require_antisymmetric(const Matrix<S>& X) {
  for (std::size_t i = 0; i < X.rows(); ++i) {
    for (std::size_t j = 0; j < X.cols(); ++j) {
      if (!T<S>::is_zero(X(i, j) + X(j, i))) {
        throw Error(ErrorCode::NonAntisymmetricBivector, "bivector is not antisymmetric");
      }
    }
  }
}

}  // namespace

template <class S>
Matrix<S> point_matrix(const Tensor<S>& t) {
  const auto n = static_cast<std::size_t>(t.dim());
  Matrix<S> m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = t(i, j).constant_term();
  }
  return m;
}

template <class S>
WeylAtPoint<S> weyl_at_point(const Tensor<S>& weyl, const MetricJet<S>& m) {
  WeylAtPoint<S> w;
  w.n = weyl.dim();
  const auto c0 = weyl.truncated(0);
  const auto mixed = raise(c0, 3, m.truncated(0));
  for (const auto& j : c0.components()) w.down.push_back(j.constant_term());
  for (const auto& j : mixed.components()) w.mixed.push_back(j.constant_term());
  return w;
}

template <class S>
S beta_component(const WeylAtPoint<S>& w, int b, int c, int a, int d, int e, int f) {
  S r{};
  if (f == d) r += w.Cup(b, c, a, e);
  if (f == a) r -= w.Cup(b, c, d, e);
  if (f == c) r += w.Cup(a, d, b, e);
  if (f == b) r -= w.Cup(a, d, c, e);
  return half(r);
}

template <class S>
Tensor<S> weyl_constraint_residual(const Tensor<S>& weyl, const Tensor<S>& omega, const MetricJet<S>& m) {
  const int ord = std::min(weyl.order(), omega.order());
  const auto mk = m.truncated(std::min(ord, m.order()));
  // Q(b,c,a,d) = C_bca^e w_de
  const auto Q = contract(outer(raise(weyl.truncated(ord), 3, mk), omega.truncated(ord)), 3, 5);
  return alternate(Q, {2, 3}) + alternate(permute(Q, {2, 3, 0, 1}), {0, 1});
}

template <class S>
Matrix<S> beta_action_on_form(const WeylAtPoint<S>& w, const Matrix<S>& omega) {
  const TwoFormBasis basis(w.n);
  const std::size_t N = basis.size();
  Matrix<S> out(N, N);
  for (std::size_t row = 0; row < N; ++row) {
    const auto [b, c] = basis.pair(row);
    for (std::size_t col = 0; col < N; ++col) {
      const auto [a, d] = basis.pair(col);
      S acc{};
      for (int e = 0; e < w.n; ++e) {
        for (int f = 0; f < w.n; ++f) {
          const S& x = omega(static_cast<std::size_t>(e), static_cast<std::size_t>(f));
          if (T<S>::is_zero(x)) continue;
          acc += beta_component(w, b, c, a, d, e, f) * x;
        }
      }
      out(row, col) = acc;
    }
  }
  return out;
}

template <class S>
Matrix<S> commutator_residual(const WeylAtPoint<S>& w, const Matrix<S>& omega, const Matrix<S>& g_inv) {
  const TwoFormBasis basis(w.n);
  const auto n = static_cast<std::size_t>(w.n);
  // C^cd_ab
  std::vector<S> cup(w.down.size());
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = 0; d < n; ++d)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          S acc{};
          for (std::size_t p = 0; p < n; ++p) {
            if (T<S>::is_zero(g_inv(c, p))) continue;
            for (std::size_t q = 0; q < n; ++q) {
              if (T<S>::is_zero(g_inv(d, q))) continue;
              acc += g_inv(c, p) * g_inv(d, q) * w.C(int(p), int(q), int(a), int(b));
            }
          }
          cup[w.at(int(c), int(d), int(a), int(b))] = acc;
        }
  const Matrix<S> omega_mixed = omega * g_inv;  // w_a^c
  const auto weyl_map = [&](const Matrix<S>& phi) {
    Matrix<S> r(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d) {
            if (!T<S>::is_zero(phi(c, d))) r(a, b) += cup[w.at(int(c), int(d), int(a), int(b))] * phi(c, d);
          }
    return r;
  };
  const auto omega_map = [&](const Matrix<S>& phi) {
    Matrix<S> r(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        S acc{};
        for (std::size_t c = 0; c < n; ++c) acc += omega_mixed(a, c) * phi(b, c) - omega_mixed(b, c) * phi(a, c);
        r(a, b) = half(acc);
      }
    return r;
  };
  const auto Cm = endomorphism_matrix<S>(basis, weyl_map);
  const auto Om = endomorphism_matrix<S>(basis, omega_map);
  return Cm * Om - Om * Cm;
}

template <class S>
Matrix<S> beta_matrix(const WeylAtPoint<S>& w, const Matrix<S>& X) {
  require_antisymmetric(X);
  const TwoFormBasis basis(w.n);
  const std::size_t N = basis.size();
  const int n = w.n;
  Matrix<S> out(N, N);
  auto T_ab = [&](int a, int b, int c, int d) {
    S acc{};
    for (int e = 0; e < n; ++e) {
      for (int f = 0; f < n; ++f) {
        const S& x = X(static_cast<std::size_t>(e), static_cast<std::size_t>(f));
        if (T<S>::is_zero(x)) continue;
        acc += x * beta_component(w, e, f, a, b, c, d);
      }
    }
    return acc;
  };
  for (std::size_t row = 0; row < N; ++row) {
    const auto [a, b] = basis.pair(row);
    for (std::size_t col = 0; col < N; ++col) {
      const auto [c, d] = basis.pair(col);
      out(row, col) = T_ab(a, b, c, d) - T_ab(a, b, d, c);
    }
  }
  return out;
}

template <class S>
S s2_double_contraction(const WeylAtPoint<S>& w, const Matrix<S>& X) {
  const int n = w.n;
  const auto N4 = static_cast<std::size_t>(n * n * n * n);
  // T[p,q,r,s] = X^ab beta_abpq^rs
  std::vector<S> t(N4);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          S acc{};
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
              const S& x = X(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
              if (!T<S>::is_zero(x)) acc += x * beta_component(w, a, b, p, q, r, s);
            }
          t[w.at(p, q, r, s)] = acc;
        }
  S total{};
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const S& x = t[w.at(p, q, r, s)];
          if (!T<S>::is_zero(x)) total += x * t[w.at(r, s, p, q)];
        }
  return total;
}

template <class S>
std::vector<S> trace_powers(const Matrix<S>& m, std::size_t upto) {
  std::vector<S> s;
  if (upto == 0) return s;
  Matrix<S> p = m;
  s.push_back(p.trace());
  for (std::size_t k = 2; k <= upto; ++k) {
    p = p * m;
    s.push_back(p.trace());
  }
  return s;
}

template <class S>
S newton_determinant(const std::vector<S>& s, std::size_t N) {
  if (s.size() != N) {
    throw Error(ErrorCode::InconsistentTraceCount,
                "expected " + std::to_string(N) + " power sums, got " + std::to_string(s.size()));
  }
  std::vector<S> e{T<S>::from_rational(Rational(1))};
  for (std::size_t k = 1; k <= N; ++k) {
    S acc{};
    for (std::size_t i = 1; i <= k; ++i) {
      const S term = e[k - i] * s[i - 1];
      if (i % 2 == 1) {
        acc += term;
      } else {
        acc -= term;
      }
    }
    e.push_back(T<S>::scale(acc, Rational(1, static_cast<long>(k))));
  }
  return e[N];
}

template <class S>
Matrix<S> bell_matrix(const std::vector<S>& s, std::size_t N) {
  if (s.size() != N) throw Error(ErrorCode::InconsistentTraceCount, "power-sum count differs from N");
  Matrix<S> b(N, N);
  for (std::size_t r = 0; r < N; ++r) {
    const Rational inv(1, static_cast<long>(r + 1));
    for (std::size_t c = 0; c <= r; ++c) b(r, c) = T<S>::scale(s[r - c], inv);
    if (r + 1 < N) b(r, r + 1) = T<S>::from_rational(Rational(1));
  }
  return b;
}

template <class S>
Matrix<S> printed_b_matrix(const std::vector<S>& s, std::size_t N) {
  if (s.size() != N) throw Error(ErrorCode::InconsistentTraceCount, "power-sum count differs from N");
  const Rational scale = factorial(static_cast<unsigned>(N)).inverse();
  Matrix<S> b(N, N);
  for (std::size_t r = 0; r < N; ++r) {
    for (std::size_t c = 0; c < r; ++c) b(r, c) = T<S>::scale(s[r - c], scale);
    if (r + 1 < N) b(r, r + 1) = T<S>::from_rational(factorial(static_cast<unsigned>(N - 1 - r)) * scale);
  }
  return b;
}

template <class S>
std::vector<S> per_pair_determinants(const WeylAtPoint<S>& w) {
  const TwoFormBasis basis(w.n);
  const std::size_t N = basis.size();
  std::vector<S> dets;
  for (std::size_t fixed = 0; fixed < N; ++fixed) {
    const auto [b, c] = basis.pair(fixed);
    Matrix<S> m(N, N);
    for (std::size_t row = 0; row < N; ++row) {
      const auto [a, d] = basis.pair(row);
      for (std::size_t col = 0; col < N; ++col) {
        const auto [e, f] = basis.pair(col);
        m(row, col) = beta_component(w, b, c, a, d, e, f) - beta_component(w, b, c, a, d, f, e);
      }
    }
    dets.push_back(determinant_bareiss(std::move(m)));
  }
  return dets;
}

template <class S>
ObstructionReport<S> obstruction_report(const WeylAtPoint<S>& w, const Matrix<S>& X, double eps) {
  ObstructionReport<S> r;
  const Matrix<S> M = beta_matrix(w, X);
  r.N = M.rows();
  r.traces = trace_powers(M, r.N);
  r.det_trace = newton_determinant(r.traces, r.N);
  r.det_oracle = determinant_bareiss(M);
  r.det_bell = determinant_bareiss(bell_matrix(r.traces, r.N));
  if constexpr (T<S>::exact) {
    r.trace_free = T<S>::is_zero(r.traces.front());
  } else {
    r.trace_free = std::fabs(r.traces.front()) <= eps * std::max(1.0, M.magnitude());
  }
  // Relative comparison in float: both paths lose digits to cancellation.
  const double float_eps = std::sqrt(eps);
  if (!same(r.det_trace, r.det_oracle, T<S>::exact ? 0.0 : float_eps) ||
      !same(r.det_bell, r.det_oracle, T<S>::exact ? 0.0 : float_eps)) {
    throw Error(ErrorCode::InvariantViolation, "determinant paths disagree");
  }
  return r;
}

#define CKAHLER_INSTANTIATE(S)                                                                        \
  template Matrix<S> point_matrix(const Tensor<S>&);                                                  \
  template WeylAtPoint<S> weyl_at_point(const Tensor<S>&, const MetricJet<S>&);                       \
  template S beta_component(const WeylAtPoint<S>&, int, int, int, int, int, int);                     \
  template Tensor<S> weyl_constraint_residual(const Tensor<S>&, const Tensor<S>&, const MetricJet<S>&); \
  template Matrix<S> beta_action_on_form(const WeylAtPoint<S>&, const Matrix<S>&);                    \
  template Matrix<S> commutator_residual(const WeylAtPoint<S>&, const Matrix<S>&, const Matrix<S>&);  \
  template Matrix<S> beta_matrix(const WeylAtPoint<S>&, const Matrix<S>&);                            \
  template S s2_double_contraction(const WeylAtPoint<S>&, const Matrix<S>&);                          \
  template std::vector<S> trace_powers(const Matrix<S>&, std::size_t);                                \
  template S newton_determinant(const std::vector<S>&, std::size_t);                                  \
  template Matrix<S> bell_matrix(const std::vector<S>&, std::size_t);                                 \
  template Matrix<S> printed_b_matrix(const std::vector<S>&, std::size_t);                            \
  template std::vector<S> per_pair_determinants(const WeylAtPoint<S>&);                               \
  template ObstructionReport<S> obstruction_report(const WeylAtPoint<S>&, const Matrix<S>&, double);

CKAHLER_INSTANTIATE(ParamPoly)
CKAHLER_INSTANTIATE(double)

#undef CKAHLER_INSTANTIATE

}  // namespace ckahler
