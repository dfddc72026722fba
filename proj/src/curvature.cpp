#include "ckahler/curvature.hpp"

#include <string>

namespace ckahler {

namespace {

template <class S>
void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvariantViolation, what);
}

template <class S>
Tensor<S> riemann_tensor(const Christoffel<S>& gamma, const MetricJet<S>& m) {
  const int n = m.dim();
  const auto dG = partial_derivative(gamma);  // dG(e, d, a, c) = d_e Gamma^d_ac
  const int ord = dG.order();
  std::vector<Jet<S>> gam;
  gam.reserve(gamma.components().size());
  for (const auto& c : gamma.components()) gam.push_back(c.truncated(ord));
  const auto gi = [n](int d, int a, int c) { return static_cast<std::size_t>((d * n + a) * n + c); };
  // R_abc^d = d_b Gamma^d_ac - d_a Gamma^d_bc + Gamma^d_be Gamma^e_ac - Gamma^d_ae Gamma^e_bc
  auto mixed = Tensor<S>::generate(m.space(), Valence{Variance::Down, Variance::Down, Variance::Down, Variance::Up},
                                   ord, [&](std::span<const int> i) {
                                     const int a = i[0], b = i[1], c = i[2], d = i[3];
                                     Jet<S> r = dG(b, d, a, c) - dG(a, d, b, c);
                                     for (int e = 0; e < n; ++e) {
                                       const auto& x1 = gam[gi(d, b, e)];
                                       const auto& y1 = gam[gi(e, a, c)];
                                       if (!x1.is_zero() && !y1.is_zero()) r += x1 * y1;
                                       const auto& x2 = gam[gi(d, a, e)];
                                       const auto& y2 = gam[gi(e, b, c)];
                                       if (!x2.is_zero() && !y2.is_zero()) r -= x2 * y2;
                                     }
                                     return r;
                                   });
  return lower(mixed, 3, m).with_weight(0);
}

template <class S>
void verify(const CurvaturePack<S>& p, const MetricJet<S>& m) {
  const double scale = p.riemann.magnitude();
  const auto& R = p.riemann;
  require<S>(vanishes(R + permute(R, {1, 0, 2, 3}), scale), "Riemann not antisymmetric in its first pair");
  require<S>(vanishes(R + permute(R, {0, 1, 3, 2}), scale), "Riemann not antisymmetric in its second pair");
  require<S>(vanishes(R - permute(R, {2, 3, 0, 1}), scale), "Riemann pair symmetry fails");
  const int n = m.dim();
  const Jet<S> trace_p = p.schouten_trace;
  const Jet<S> expected = p.scalar.scaled(Rational(1, 2 * (n - 1)));
  require<S>(vanishes(trace_p - expected, scale), "trace of Schouten differs from R/(2(n-1))");
  const auto w = raise(p.weyl, 0, m);
  for (int s = 1; s < 4; ++s) {
    require<S>(vanishes(contract(w, 0, s), scale), "Weyl tensor is not trace-free");
  }
  require<S>(vanishes(p.weyl + schouten_wedge_metric(p.schouten, m.g()) - R, scale),
             "Riemann reconstruction from Weyl and Schouten fails");
  if (p.cotton) {
    require<S>(vanishes(*p.cotton + permute(*p.cotton, {0, 2, 1}), scale), "Cotton not antisymmetric");
  }
}

}  // namespace

template <class S>
const Tensor<S>& CurvaturePack<S>::cotton_or_throw() const {
  if (!cotton) throw Error(ErrorCode::OrderExhausted, "Cotton tensor needs the metric 3-jet");
  return *cotton;
}

template <class S>
Tensor<S> schouten_wedge_metric(const Tensor<S>& p, const Tensor<S>& g) {
  const auto pg = outer(p, g);  // pg(a, c, b, d) = P_ac g_bd
  // P_ac g_bd - P_bc g_ad + P_bd g_ac - P_ad g_bc, slot k of the result is slot order[k] of pg
  return permute(pg, {0, 2, 1, 3}) - permute(pg, {2, 0, 1, 3}) + permute(pg, {2, 0, 3, 1}) -
         permute(pg, {0, 2, 3, 1});
}

template <class S>
CurvaturePack<S> curvature_pack(const MetricJet<S>& m) {
  const int n = m.dim();
  if (n < 4) throw Error(ErrorCode::DimensionTooSmall, "curvature decomposition needs n >= 4");
  if (m.order() < 2) throw Error(ErrorCode::OrderExhausted, "curvature needs the metric 2-jet");
  CurvaturePack<S> p;
  p.gamma = christoffel(m);
  p.riemann = riemann_tensor(p.gamma, m);
  const int ord = p.riemann.order();
  const MetricJet<S> mk = m.truncated(ord);
  // Ric_bd = g^ac R_abcd
  p.ricci = contract(contract(outer(mk.g_inv(), p.riemann), 0, 2), 0, 2);
  p.scalar = contract(contract(outer(mk.g_inv(), p.ricci), 0, 2), 0, 1).components()[0];
  p.schouten = (p.ricci - mk.g().multiplied(p.scalar.scaled(Rational(1, 2 * (n - 1))))).scaled(Rational(1, n - 2));
  p.schouten_trace = contract(contract(outer(mk.g_inv(), p.schouten), 0, 2), 0, 1).components()[0];
  p.weyl = p.riemann - schouten_wedge_metric(p.schouten, mk.g());
  if (ord >= 1) {
    const auto dP = covariant_derivative(p.schouten, p.gamma);  // dP(b, c, a) = nabla_b P_ca
    p.cotton = permute(dP, {2, 0, 1}) - permute(dP, {2, 1, 0});
  }
  verify(p, mk);
  return p;
}

template <class S>
ConformalRescaling<S> conformal_rescale(const MetricJet<S>& m, const Jet<S>& omega) {
  if (!ScalarTraits<S>::is_positive_constant(omega.constant_term())) {
    throw Error(ErrorCode::NonPositiveConformalFactor, "conformal factor must be positive at the point");
  }
  const int ord = std::min(m.order(), omega.order());
  const Jet<S> om = omega.truncated(ord);
  ConformalRescaling<S> r{MetricJet<S>(m.g().truncated(ord).multiplied(om * om)), Tensor<S>(), om};
  if (ord >= 1) {
    const Jet<S> inv = om.truncated(ord - 1).inverse();
    r.upsilon = Tensor<S>::generate(m.space(), down(1), ord - 1,
                                    [&](std::span<const int> i) { return om.partial(i[0]) * inv; });
  } else {
    r.upsilon = Tensor<S>(m.space(), down(1), 0);
  }
  return r;
}

template <class S>
Tensor<S> transformed_schouten(const CurvaturePack<S>& pack, const MetricJet<S>& m, const Tensor<S>& upsilon) {
  const auto dU = covariant_derivative(upsilon, pack.gamma);
  const int ord = std::min(dU.order(), pack.schouten.order());
  const auto U = upsilon.truncated(ord);
  const MetricJet<S> mk = m.truncated(ord);
  const Jet<S> norm = contract(outer(raise(U, 0, mk), U), 0, 1).components()[0];
  return pack.schouten.truncated(ord) - dU.truncated(ord) + outer(U, U) -
         mk.g().multiplied(norm.scaled(Rational(1, 2)));
}

template <class S>
Tensor<S> transformed_weyl(const CurvaturePack<S>& pack, const Jet<S>& omega) {
  return pack.weyl.multiplied(omega * omega);
}

template struct CurvaturePack<ParamPoly>;
template struct CurvaturePack<double>;

#define CKAHLER_INSTANTIATE(S)                                                                          \
  template CurvaturePack<S> curvature_pack(const MetricJet<S>&);                                        \
  template Tensor<S> schouten_wedge_metric(const Tensor<S>&, const Tensor<S>&);                         \
  template ConformalRescaling<S> conformal_rescale(const MetricJet<S>&, const Jet<S>&);                 \
  template Tensor<S> transformed_schouten(const CurvaturePack<S>&, const MetricJet<S>&, const Tensor<S>&); \
  template Tensor<S> transformed_weyl(const CurvaturePack<S>&, const Jet<S>&);

CKAHLER_INSTANTIATE(ParamPoly)
CKAHLER_INSTANTIATE(double)

#undef CKAHLER_INSTANTIATE

}  // namespace ckahler
