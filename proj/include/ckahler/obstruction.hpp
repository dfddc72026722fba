#pragma once

#include <utility>
#include <vector>

#include "ckahler/matrix.hpp"
#include "ckahler/tensor.hpp"

namespace ckahler {

/// The a<b basis of two-forms in lexicographic order.
class TwoFormBasis {
 public:
  explicit TwoFormBasis(int n);

  int dim() const { return n_; }
  std::size_t size() const { return pairs_.size(); }
  const std::pair<int, int>& pair(std::size_t i) const { return pairs_[i]; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  /// Position of the pair {a, b} with a != b, regardless of order.
  std::size_t index(int a, int b) const;

 private:
  int n_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<std::size_t> lookup_;
};

/// Weyl tensor values at the base point, all-down and with the last index
/// raised.
template <class S>
struct WeylAtPoint {
  int n = 0;
  std::vector<S> down;   // C_abcd
  std::vector<S> mixed;  // C_abc^d

  std::size_t at(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
  }
  const S& C(int a, int b, int c, int d) const { return down[at(a, b, c, d)]; }
  const S& Cup(int a, int b, int c, int d) const { return mixed[at(a, b, c, d)]; }
};

/// Constant terms of a rank-2 tensor.
template <class S>
Matrix<S> point_matrix(const Tensor<S>& t);

template <class S>
WeylAtPoint<S> weyl_at_point(const Tensor<S>& weyl, const MetricJet<S>& m);

/// beta_{bcad}^{ef} = C_{bc[a}^e delta^f_{d]} + C_{ad[b}^e delta^f_{c]}
template <class S>
S beta_component(const WeylAtPoint<S>& w, int b, int c, int a, int d, int e, int f);

/// C_{bc[a}^e w_{d]e} + C_{ad[b}^e w_{c]e} as a (b, c, a, d) tensor.
template <class S>
Tensor<S> weyl_constraint_residual(const Tensor<S>& weyl, const Tensor<S>& omega, const MetricJet<S>& m);

/// Rows (bc), columns (ad): beta_{bcad}^{ef} w_ef at the point.
template <class S>
Matrix<S> beta_action_on_form(const WeylAtPoint<S>& w, const Matrix<S>& omega);

/// [C, w] on the pair basis, with C(phi)_ab = C^cd_ab phi_cd and
/// w(phi)_ab = w_[a^c phi_b]c.
template <class S>
Matrix<S> commutator_residual(const WeylAtPoint<S>& w, const Matrix<S>& omega, const Matrix<S>& g_inv);

/// Matrix of phi -> X^ef beta_ef..^cd phi_cd on the pair basis; entry
/// [(ab),(cd)] is T_ab^cd - T_ab^dc. Throws NonAntisymmetricBivector.
template <class S>
Matrix<S> beta_matrix(const WeylAtPoint<S>& w, const Matrix<S>& X);

/// X^ab X^cd beta_abpq^rs beta_cdrs^pq summed over all indices.
template <class S>
S s2_double_contraction(const WeylAtPoint<S>& w, const Matrix<S>& X);

/// s_k = tr(M^k) for k = 1..upto.
template <class S>
std::vector<S> trace_powers(const Matrix<S>& m, std::size_t upto);

/// det from power sums via e_k = (1/k) sum_i (-1)^(i-1) e_(k-i) s_i.
/// Throws InconsistentTraceCount unless s has exactly N entries.
template <class S>
S newton_determinant(const std::vector<S>& s, std::size_t N);

/// Lower Hessenberg matrix with entries s_(i-j+1)/i on and below the
/// diagonal (1-based rows) and ones on the superdiagonal; its determinant
/// is the N-th elementary symmetric function of the eigenvalues.
template <class S>
Matrix<S> bell_matrix(const std::vector<S>& s, std::size_t N);

/// The B matrix with the 1/N! prefactor: s_k below the
/// diagonal, zero diagonal, superdiagonal (N-1)!, ..., 1. Kept for the
/// comparison test only.
template <class S>
Matrix<S> printed_b_matrix(const std::vector<S>& s, std::size_t N);

/// One determinant per fixed pair [bc] of the matrix beta_{bc..}^{..}.
template <class S>
std::vector<S> per_pair_determinants(const WeylAtPoint<S>& w);

template <class S>
struct ObstructionReport {
  std::size_t N = 0;
  std::vector<S> traces;
  S det_trace{};
  S det_oracle{};
  S det_bell{};
  bool trace_free = false;
};

/// Both determinant paths; a disagreement throws InvariantViolation.
template <class S>
ObstructionReport<S> obstruction_report(const WeylAtPoint<S>& w, const Matrix<S>& X, double eps = 1e-9);

}  // namespace ckahler
