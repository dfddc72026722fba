#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckahler/prolongation.hpp"

namespace ckahler {

/// |w|^2 = w_ab w^ab as a scalar jet.
template <class S>
Jet<S> form_norm2(const Tensor<S>& omega, const MetricJet<S>& m);

template <class S>
struct NamedResidual {
  std::string name;
  std::string equation;
  Tensor<S> value;
  bool zero = false;
};

/// Residuals of the algebraic system cutting Kahler sections out of the
/// parallel sections, in this order:
///   complex_structure  w_a^b w_bc + (1/n)|w|^2 g_ac
///   mu_from_K          mu_abc + (3n/|w|^2) w_[ab w^d_c] K_d
///   sigma_formula      Sigma - sigma_from_omega_K(w, K)         (n > 4 only)
///   mu_pure_trace      |w|^2 mu_abc - (3n/(n-2)) w_[bc mu_a]pq w^pq
///   K_mu_trace         (n-2) K_c w^c_a + w^bc mu_abc
///   mu_K_transverse    mu_abc K^c
///   sigma_hermitian    w^a_[b Sigma_c]a
///   K_from_upsilon     K_a - w_ab Upsilon^b, |w|^2 = n Omega^-2  (needs order >= 1)
template <class S>
struct ConstraintReport {
  std::vector<NamedResidual<S>> residuals;
  /// Set when sigma_formula was skipped in dimension four.
  std::optional<std::string> notice;

  bool all_zero() const;
  const NamedResidual<S>* find(const std::string& name) const;
  std::vector<std::string> failed() const;
};

/// Throws DegenerateOmega when |w|^2 vanishes at the point.
template <class S>
ConstraintReport<S> q_residuals(const ProlongationSection<S>& psi, const CurvaturePack<S>& pack,
                                const MetricJet<S>& m, double eps = 1e-9);

/// Sigma = -(n/2 |w|^-2 |K|^2 + n/(4(n-2)(n-4)) |w|^-2 C_cdef w^cd w^ef) w_ab
///         + 1/(2(n-4)) C_cdab w^cd + 2n |w|^-2 K_c w^c_[b K_a].
/// Throws DimensionFour for n = 4 and DegenerateOmega for |w|^2 = 0.
template <class S>
Tensor<S> sigma_from_omega_K(const Tensor<S>& omega, const Tensor<S>& K, const Tensor<S>& weyl,
                             const MetricJet<S>& m);

/// mu = -(3n/|w|^2) w_[ab w^d_c] K_d
template <class S>
Tensor<S> mu_from_omega_K(const Tensor<S>& omega, const Tensor<S>& K, const MetricJet<S>& m);

/// Upsilon_a = -(1/2) d_a log |w|^2, the gradient of log Omega for |w|^2 = n Omega^-2.
template <class S>
Tensor<S> upsilon_from_omega(const Tensor<S>& omega, const MetricJet<S>& m);

struct VarietyEstimate {
  std::size_t fiber_dimension = 0;
  std::size_t rank = 0;
  std::size_t dimension = 0;
  /// (n^2 + 2n + 4) / 4
  std::size_t bound = 0;
  std::vector<double> singular_values;
  /// Dimension differs from the bound; reported, not an error.
  bool rank_drop = false;
};

/// Fiber dimension minus the numerical rank of the Jacobian of
/// (complex_structure, mu_from_K, sigma_formula) at the base point of the
/// sample. Singular values below cutoff * sigma_max count as zero.
/// Throws SampleNotOnVariety if the sample misses the system by more
/// than `tolerance`.
VarietyEstimate variety_dimension_estimate(const ProlongationSection<double>& sample,
                                           const CurvaturePack<double>& pack, const MetricJet<double>& m,
                                           double step = 1e-6, double cutoff = 1e-8, double tolerance = 1e-8);

}  // namespace ckahler
