#pragma once

#include "ckahler/curvature.hpp"

namespace ckahler {

/// Psi = (omega, K, mu, Sigma): two-form, one-form, three-form, two-form.
template <class S>
struct ProlongationSection {
  Tensor<S> omega;
  Tensor<S> K;
  Tensor<S> mu;
  Tensor<S> Sigma;

  /// C(n,2) + n + C(n,3) + C(n,2) = n(n+1)(n+2)/6.
  static std::size_t fiber_dimension(int n);
  /// Throws SymmetryViolation unless omega, mu and Sigma are totally
  /// antisymmetric.
  void check_antisymmetric() const;

  ProlongationSection operator+(const ProlongationSection& o) const;
};

template <class S>
struct ConnectionResidual {
  Tensor<S> slot1;   // (a,b,c)   nabla_a omega_bc - mu_abc - 2 g_a[b K_c]
  Tensor<S> slot2a;  // (a,b)     nabla_a K_b - P_a^c omega_bc - Sigma_ab
  Tensor<S> slot2b;  // (a,b,c,d) nabla_a mu_bcd + 3 g_a[b Sigma_cd] + 3 P_a[b omega_cd] + 3/2 C_[bc|a^p omega_p|d]
  Tensor<S> slot3;   // (a,b,c)   nabla_a Sigma_bc + 2 P_a[b K_c] - P_a^e mu_ebc + 1/2 A^p_bc omega_pa
                     //           + A^p_a[b omega_c]p + C_bca^p K_p

  bool all_zero(double eps = 1e-9) const;
  double max_magnitude() const;
};

/// Throws OrderExhausted when the Sigma slot cannot be formed (Cotton needs
/// the metric 3-jet).
template <class S>
ConnectionResidual<S> apply_connection(const ProlongationSection<S>& psi, const CurvaturePack<S>& pack,
                                       const MetricJet<S>& m);

template <class S>
struct Witness {
  MetricJet<S> metric;  // g = Omega^-2 ghat
  ProlongationSection<S> psi;
  Tensor<S> upsilon;    // d Omega / Omega
  CurvaturePack<S> pack;
};

/// From a Kahler pair (ghat, omegahat) and Omega > 0: g = Omega^-2 ghat,
/// omega = Omega^-3 omegahat, K_a = omega_ab Upsilon^b, mu = -3 Upsilon_[a omega_bc]
/// and Sigma = nabla_a K_b - P_a^c omega_bc. Throws NotKahlerInput if
/// omegahat is not parallel for ghat.
template <class S>
Witness<S> build_witness(const MetricJet<S>& ghat, const Tensor<S>& omegahat, const Jet<S>& Omega);

/// The section determined by omega alone: K_c = nabla^b omega_bc / (n-1),
/// mu = nabla_[a omega_bc] and Sigma the skew part of nabla_a K_b - P_a^c omega_bc.
template <class S>
ProlongationSection<S> section_from_form(const Tensor<S>& omega, const CurvaturePack<S>& pack, const MetricJet<S>& m);

/// nabla_(a K_b)
template <class S>
Tensor<S> killing_residual(const Tensor<S>& K, const Christoffel<S>& gamma);

}  // namespace ckahler
