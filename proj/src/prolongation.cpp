#include "ckahler/prolongation.hpp"

namespace ckahler {

namespace {

template <class S>
Tensor<S> skew(const Tensor<S>& t, std::initializer_list<int> slots) {
  return alternate(t, slots);
}

// Schouten with its second index raised, P_a^c.
template <class S>
Tensor<S> schouten_mixed(const CurvaturePack<S>& pack, const MetricJet<S>& m) {
  return raise(pack.schouten, 1, m);
}

}  // namespace

template <class S>
std::size_t ProlongationSection<S>::fiber_dimension(int n) {
  const auto u = static_cast<std::size_t>(n);
  return u * (u - 1) / 2 + u + u * (u - 1) * (u - 2) / 6 + u * (u - 1) / 2;
}

template <class S>
void ProlongationSection<S>::check_antisymmetric() const {
  (void)omega.with_symmetries({{0, 1, true}});
  (void)mu.with_symmetries({{0, 1, true}, {1, 2, true}});
  (void)Sigma.with_symmetries({{0, 1, true}});
}

template <class S>
ProlongationSection<S> ProlongationSection<S>::operator+(const ProlongationSection& o) const {
  return {omega + o.omega, K + o.K, mu + o.mu, Sigma + o.Sigma};
}

template <class S>
bool ConnectionResidual<S>::all_zero(double eps) const {
  return vanishes(slot1, 1.0, eps) && vanishes(slot2a, 1.0, eps) && vanishes(slot2b, 1.0, eps) &&
         vanishes(slot3, 1.0, eps);
}

template <class S>
double ConnectionResidual<S>::max_magnitude() const {
  return std::max({slot1.magnitude(), slot2a.magnitude(), slot2b.magnitude(), slot3.magnitude()});
}

template <class S>
ConnectionResidual<S> apply_connection(const ProlongationSection<S>& psi, const CurvaturePack<S>& pack,
                                       const MetricJet<S>& m) {
  const auto& G = pack.gamma;
  const auto& g = m.g();
  const auto& P = pack.schouten;
  const auto Pm = schouten_mixed(pack, m);
  const auto Cm = raise(pack.weyl, 3, m);  // C_abc^p
  ConnectionResidual<S> r;

  const auto gK = outer(g, psi.K);  // g_ab K_c
  r.slot1 = covariant_derivative(psi.omega, G) - psi.mu - (gK - permute(gK, {0, 2, 1}));

  const auto Pw = contract(outer(Pm, psi.omega), 1, 3);  // P_a^c omega_bc
  r.slot2a = covariant_derivative(psi.K, G) - Pw - psi.Sigma;

  // C_bca^p omega_pd, reordered to (a, b, c, d)
  const auto Cw = permute(contract(outer(Cm, psi.omega), 3, 4), {2, 0, 1, 3});
  r.slot2b = covariant_derivative(psi.mu, G) + skew(outer(g, psi.Sigma), {1, 2, 3}).scaled(3) +
             skew(outer(P, psi.omega), {1, 2, 3}).scaled(3) + skew(Cw, {1, 2, 3}).scaled(Rational(3, 2));

  const auto& A = pack.cotton_or_throw();
  const auto Au = raise(A, 0, m);  // A^p_bc
  const auto PK = skew(outer(P, psi.K), {1, 2}).scaled(2);
  const auto Pmu = contract(outer(Pm, psi.mu), 1, 2);                               // P_a^e mu_ebc
  const auto Aw1 = permute(contract(outer(Au, psi.omega), 0, 3), {2, 0, 1});        // A^p_bc omega_pa
  const auto Aw2 = skew(contract(outer(Au, psi.omega), 0, 4), {1, 2});              // A^p_a[b omega_c]p
  const auto CK = permute(contract(outer(Cm, psi.K), 3, 4), {2, 0, 1});             // C_bca^p K_p
  r.slot3 = covariant_derivative(psi.Sigma, G) + PK - Pmu + Aw1.scaled(Rational(1, 2)) + Aw2 + CK;
  return r;
}

template <class S>
Witness<S> build_witness(const MetricJet<S>& ghat, const Tensor<S>& omegahat, const Jet<S>& Omega) {
  if (!ScalarTraits<S>::is_positive_constant(Omega.constant_term())) {
    throw Error(ErrorCode::NonPositiveConformalFactor, "conformal factor must be positive at the point");
  }
  const auto gamma_hat = christoffel(ghat);
  if (!vanishes(covariant_derivative(omegahat, gamma_hat), omegahat.magnitude())) {
    throw Error(ErrorCode::NotKahlerInput, "the two-form is not parallel for the given metric");
  }
  const int ord = std::min({ghat.order(), omegahat.order(), Omega.order()});
  const Jet<S> Om = Omega.truncated(ord);
  const Jet<S> inv = Om.inverse();
  const MetricJet<S> g(ghat.g().truncated(ord).multiplied(inv * inv));
  const Tensor<S> omega = omegahat.truncated(ord).multiplied(inv * inv * inv).with_weight(3);

  const Jet<S> inv1 = inv.truncated(ord - 1);
  const Tensor<S> upsilon = Tensor<S>::generate(g.space(), down(1), ord - 1,
                                                [&](std::span<const int> i) { return Om.partial(i[0]) * inv1; });
  auto pack = curvature_pack(g);
  const auto U = raise(upsilon, 0, g);
  ProlongationSection<S> psi;
  psi.omega = omega;
  psi.K = contract(outer(omega, U), 1, 2);  // omega_ab Upsilon^b
  psi.mu = alternate(outer(upsilon, omega), {0, 1, 2}).scaled(-3);
  const auto Pw = contract(outer(raise(pack.schouten, 1, g), omega), 1, 3);
  const auto sigma_full = covariant_derivative(psi.K, pack.gamma) - Pw;
  psi.Sigma = alternate(sigma_full, {0, 1});
  return Witness<S>{g, psi, upsilon, std::move(pack)};
}

template <class S>
ProlongationSection<S> section_from_form(const Tensor<S>& omega, const CurvaturePack<S>& pack, const MetricJet<S>& m) {
  const int n = m.dim();
  const auto dw = covariant_derivative(omega, pack.gamma);  // (a,b,c)
  ProlongationSection<S> psi;
  psi.omega = omega;
  psi.K = contract(raise(dw, 0, m), 0, 1).scaled(Rational(1, n - 1));
  psi.mu = alternate(dw, {0, 1, 2});
  const auto Pw = contract(outer(raise(pack.schouten, 1, m), omega), 1, 3);
  psi.Sigma = alternate(covariant_derivative(psi.K, pack.gamma) - Pw, {0, 1});
  return psi;
}

template <class S>
Tensor<S> killing_residual(const Tensor<S>& K, const Christoffel<S>& gamma) {
  return symmetrize(covariant_derivative(K, gamma), {0, 1});
}

template struct ProlongationSection<ParamPoly>;
template struct ProlongationSection<double>;
template struct ConnectionResidual<ParamPoly>;
template struct ConnectionResidual<double>;

#define CKAHLER_INSTANTIATE(S)                                                                                   \
  template ConnectionResidual<S> apply_connection(const ProlongationSection<S>&, const CurvaturePack<S>&,       \
                                                  const MetricJet<S>&);                                          \
  template Witness<S> build_witness(const MetricJet<S>&, const Tensor<S>&, const Jet<S>&);                       \
  template ProlongationSection<S> section_from_form(const Tensor<S>&, const CurvaturePack<S>&, const MetricJet<S>&); \
  template Tensor<S> killing_residual(const Tensor<S>&, const Christoffel<S>&);

CKAHLER_INSTANTIATE(ParamPoly)
CKAHLER_INSTANTIATE(double)

#undef CKAHLER_INSTANTIATE

}  // namespace ckahler
