#include "ckahler/matrix.hpp"

#include <cmath>
#include <utility>

#include "ckahler/error.hpp"

namespace ckahler {

template <class S>
S determinant_bareiss(Matrix<S> m) {
  using T = ScalarTraits<S>;
  if (m.rows() != m.cols()) throw Error(ErrorCode::SlotMismatch, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return T::from_rational(Rational(1));
  S prev = T::from_rational(Rational(1));
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t pivot = n;
    if constexpr (T::exact) {
      // Prefer a constant pivot; any nonzero pivot keeps divisions exact.
      for (std::size_t r = k; r < n; ++r) {
        if (T::is_zero(m(r, k))) continue;
        if (pivot == n || (m(r, k).is_constant() && !m(pivot, k).is_constant())) pivot = r;
      }
    } else {
      double best = 0.0;
      for (std::size_t r = k; r < n; ++r) {
        if (std::fabs(m(r, k)) > best) {
          best = std::fabs(m(r, k));
          pivot = r;
        }
      }
    }
    if (pivot == n) return S{};
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(pivot, c));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        S num = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        m(i, j) = T::exact_quotient(num, prev);
      }
      m(i, k) = S{};
    }
    prev = m(k, k);
  }
  S det = m(n - 1, n - 1);
  return negate ? S(-det) : det;
}

template ParamPoly determinant_bareiss(Matrix<ParamPoly>);
template double determinant_bareiss(Matrix<double>);

}  // namespace ckahler
