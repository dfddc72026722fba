#pragma once

#include <optional>

#include "ckahler/tensor.hpp"

namespace ckahler {

/// Curvature of one metric at the jet base point.
///
/// Conventions: [nabla_a, nabla_b] w_c = R_abc^d w_d, R_abcd = R_abc^e g_ed,
/// Ric_bd = g^ac R_abcd, P = (Ric - R g / (2(n-1))) / (n-2),
/// R_abcd = C_abcd + P_ac g_bd - P_bc g_ad + P_bd g_ac - P_ad g_bc and
/// A_abc = nabla_b P_ca - nabla_c P_ba.
template <class S>
struct CurvaturePack {
  Christoffel<S> gamma;
  Tensor<S> riemann;
  Tensor<S> ricci;
  Jet<S> scalar;
  Tensor<S> schouten;
  Jet<S> schouten_trace;
  Tensor<S> weyl;
  /// Absent when the metric jet is too short (order < 3).
  std::optional<Tensor<S>> cotton;

  const Tensor<S>& cotton_or_throw() const;
};

/// Fills every field and verifies the algebraic invariants; an exact
/// mismatch throws InvariantViolation.
template <class S>
CurvaturePack<S> curvature_pack(const MetricJet<S>& m);

/// P_ac g_bd - P_bc g_ad + P_bd g_ac - P_ad g_bc
template <class S>
Tensor<S> schouten_wedge_metric(const Tensor<S>& p, const Tensor<S>& g);

template <class S>
struct ConformalRescaling {
  MetricJet<S> metric;  // Omega^2 g
  Tensor<S> upsilon;    // d_a Omega / Omega
  Jet<S> omega;
};

template <class S>
ConformalRescaling<S> conformal_rescale(const MetricJet<S>& m, const Jet<S>& omega);

/// P - nabla Upsilon + Upsilon Upsilon - 1/2 |Upsilon|^2 g, in the old scale.
template <class S>
Tensor<S> transformed_schouten(const CurvaturePack<S>& pack, const MetricJet<S>& m, const Tensor<S>& upsilon);

/// Omega^2 C_abcd.
template <class S>
Tensor<S> transformed_weyl(const CurvaturePack<S>& pack, const Jet<S>& omega);

extern template struct CurvaturePack<ParamPoly>;
extern template struct CurvaturePack<double>;

}  // namespace ckahler
