#include <gtest/gtest.h>

#include <random>

#include "ckahler/constraints.hpp"
#include "ckahler/tractor.hpp"
#include "test_fixtures.hpp"

namespace ckahler {
namespace {

using testing::one_plus;
using testing::origin;
using testing::potential_kahler;
using testing::product_kahler;
using testing::standard_symplectic;

ExactJet random_jet(const JetSpacePtr& s, int order, std::mt19937_64& rng, int spread = 3) {
  std::uniform_int_distribution<int> d(-spread, spread);
  ExactJet j(s, order);
  for (std::size_t i = 0; i < j.size(); ++i) j.set(i, ParamPoly(Rational(d(rng), 1 + (d(rng) + spread) % 3)));
  return j;
}

Tensor<ParamPoly> random_form(const JetSpacePtr& s, int order, std::mt19937_64& rng) {
  const int n = s->dim();
  std::vector<ExactJet> upper;
  for (int k = 0; k < n * n; ++k) upper.push_back(random_jet(s, order, rng));
  return Tensor<ParamPoly>::generate(s, down(2), order, [&](std::span<const int> i) {
    if (i[0] == i[1]) return ExactJet(s, order);
    const auto& v = upper[static_cast<std::size_t>(std::min(i[0], i[1]) * n + std::max(i[0], i[1]))];
    return i[0] < i[1] ? v : -v;
  });
}

TractorVector<ParamPoly> random_tractor(const JetSpacePtr& s, int order, std::mt19937_64& rng) {
  TractorVector<ParamPoly> v;
  v.sigma = random_jet(s, order, rng);
  v.mu = Tensor<ParamPoly>::generate(s, down(1), order, [&](std::span<const int>) { return random_jet(s, order, rng); });
  v.rho = random_jet(s, order, rng);
  return v;
}

MetricJet<ParamPoly> flat(const JetSpacePtr& s, int order) { return MetricJet<ParamPoly>(identity_metric<ParamPoly>(s, order)); }

Density<ParamPoly> unit_density(const JetSpacePtr& s, int order) {
  return {ExactJet::constant(s, order, Rational(1)), 1};
}

void expect_same(const TractorForm<ParamPoly>& a, const TractorForm<ParamPoly>& b) {
  const int ord = std::min(a.order(), b.order());
  EXPECT_TRUE((a.truncated(ord) - b.truncated(ord)).is_zero());
}

void expect_same(const Tensor<ParamPoly>& a, const Tensor<ParamPoly>& b) {
  const int ord = std::min(a.order(), b.order());
  EXPECT_EQ(a.truncated(ord), b.truncated(ord));
}

TEST(TractorAlgebra, FormLengthFactor) {
  EXPECT_EQ(form_length_factor(6), Rational(1, 6));
  const auto s = origin(6, 1);
  const auto J = standard_symplectic<ParamPoly>(s, 1);
  EXPECT_EQ(scale_of_form(J, flat(s, 1)).value, ExactJet::constant(s, 1, Rational(1)));
}

TEST(TractorAlgebra, YPairsWithX) {
  const auto s = origin(6, 2);
  const auto m = flat(s, 2);
  TractorVector<ParamPoly> Y{"g", ExactJet::constant(s, 2, Rational(1)), Tensor<ParamPoly>(s, down(1), 2), ExactJet(s, 2)};
  TractorVector<ParamPoly> X{"g", ExactJet(s, 2), Tensor<ParamPoly>(s, down(1), 2), ExactJet::constant(s, 2, Rational(1))};
  EXPECT_EQ(tractor_metric(Y, X, m), ExactJet::constant(s, 2, Rational(1)));
  EXPECT_TRUE(tractor_metric(Y, Y, m).is_zero());
  EXPECT_TRUE(tractor_metric(X, X, m).is_zero());
  X.scale = "ghat";
  try {
    (void)tractor_metric(Y, X, m);
    FAIL() << "expected ScaleMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ScaleMismatch);
  }
}

TEST(TractorAlgebra, WedgeIsAlternating) {
  std::mt19937_64 rng(3);
  const auto s = origin(4, 1);
  const auto a = to_form(random_tractor(s, 1, rng));
  const auto b = to_form(random_tractor(s, 1, rng));
  expect_same(wedge(a, b), wedge(b, a).scaled(-1));
  EXPECT_TRUE(wedge(a, a).is_zero());
  const auto ab = wedge(a, b);
  EXPECT_EQ(ab.at({0, 5}), (a.at({0}) * b.at({5}) - a.at({5}) * b.at({0})).scaled(Rational(1, 2)));
}

TEST(TractorAlgebra, InteriorOfXReadsTheSigmaSlot) {
  std::mt19937_64 rng(5);
  const auto s = origin(6, 2);
  const auto m = product_kahler(s, 2).metric;
  const auto v = random_tractor(s, 2, rng);
  const auto X = x_tractor<ParamPoly>(6, s, 2);
  EXPECT_EQ(interior(X, to_form(v), m).at({}), v.sigma);
  const auto x_sq = interior(X, X, m);
  EXPECT_TRUE(x_sq.at({}).is_zero());
}

TEST(TractorAlgebra, NormOfAVectorIsTheMetric) {
  std::mt19937_64 rng(7);
  const auto s = origin(6, 2);
  const auto m = product_kahler(s, 2).metric;
  const auto v = random_tractor(s, 2, rng);
  EXPECT_EQ(h_norm(to_form(v), m), tractor_metric(v, v, m));
}

TEST(Splitting, XPairsWithDSigmaToSigma) {
  std::mt19937_64 rng(11);
  const auto s = origin(6, 3);
  const auto m = product_kahler(s, 3).metric;
  const auto pack = curvature_pack(m);
  const Density<ParamPoly> sigma{ExactJet::constant(s, 3, Rational(2)) + random_jet(s, 3, rng).truncated(3), 1};
  const auto I = splitting_D(sigma, pack, m);
  const auto X = x_tractor<ParamPoly>(6, s, I.order());
  EXPECT_EQ(interior(X, to_form(I), m).at({}), sigma.value.truncated(I.order()));
}

TEST(Splitting, UnitScaleOnFlatSpace) {
  const auto s = origin(6, 3);
  const auto m = flat(s, 3);
  const auto I = splitting_D(unit_density(s, 3), curvature_pack(m), m);
  EXPECT_EQ(I.sigma, ExactJet::constant(s, 3, Rational(1)));
  EXPECT_TRUE(I.mu.is_zero());
  EXPECT_TRUE(I.rho.is_zero());
}

TEST(Splitting, RejectsWrongWeight) {
  const auto s = origin(6, 3);
  const auto m = flat(s, 3);
  try {
    (void)splitting_D(Density<ParamPoly>{ExactJet::constant(s, 3, Rational(1)), 2}, curvature_pack(m), m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SlotMismatch);
  }
}

// h(D sigma, D sigma) = -R/(n(n-1)) for the metric sigma^-2 g.
void expect_norm_is_scalar_curvature(const MetricJet<ParamPoly>& m, const ExactJet& sigma) {
  const int n = m.dim();
  const auto I = splitting_D(Density<ParamPoly>{sigma, 1}, curvature_pack(m), m);
  const auto rescaled = conformal_rescale(m, sigma.inverse());
  const auto R = curvature_pack(rescaled.metric).scalar;
  const auto h = tractor_metric(I, I, m);
  const int ord = std::min(h.order(), R.order());
  EXPECT_EQ(h.truncated(ord), R.truncated(ord).scaled(Rational(-1, n * (n - 1))));
}

TEST(Splitting, NormIsScalarCurvature) {
  const auto s = origin(6, 4);
  expect_norm_is_scalar_curvature(flat(s, 4), ExactJet::constant(s, 4, Rational(1)));
  expect_norm_is_scalar_curvature(flat(s, 4), one_plus(s, 4, {{1, 1}}, {0}));
  const auto confflat = MetricJet<ParamPoly>(identity_metric<ParamPoly>(s, 4).multiplied(one_plus(s, 4, {{0, 0}}, {0, 0})));
  expect_norm_is_scalar_curvature(confflat, ExactJet::constant(s, 4, Rational(1)));
  expect_norm_is_scalar_curvature(product_kahler(s, 4).metric, one_plus(s, 4, {{2, 3}}, {5}));
}

TEST(Splitting, ChangeOfScaleMatchesRederivation) {
  std::mt19937_64 rng(13);
  const auto s = origin(6, 4);
  const auto m = product_kahler(s, 4).metric;
  const ExactJet Omega = one_plus(s, 4, {{0, 1}, {3, 3}}, {2});
  const Density<ParamPoly> sigma{ExactJet::constant(s, 4, Rational(3)) + random_jet(s, 4, rng), 1};
  const auto I = splitting_D(sigma, curvature_pack(m), m);
  const auto hat = conformal_rescale(m, Omega);
  const auto Ihat = splitting_D(sigma.rescaled(Omega), curvature_pack(hat.metric), hat.metric, "ghat");
  expect_same(to_form(change_of_scale(I, Omega, m, "ghat")), to_form(Ihat));
}

TEST(Splitting, ChangeOfScalePreservesTheMetric) {
  std::mt19937_64 rng(17);
  const auto s = origin(6, 3);
  const auto m = product_kahler(s, 3).metric;
  const ExactJet Omega = one_plus(s, 3, {{0, 4}}, {1, 5});
  const auto v = random_tractor(s, 2, rng);
  const auto w = random_tractor(s, 2, rng);
  const auto hat = conformal_rescale(m, Omega);
  const auto h = tractor_metric(change_of_scale(v, Omega, m, "ghat"), change_of_scale(w, Omega, m, "ghat"),
                                hat.metric);
  EXPECT_EQ(h, tractor_metric(v, w, m).truncated(h.order()));
}

TEST(Connection, PreservesTheMetric) {
  std::mt19937_64 rng(19);
  const auto s = origin(6, 5);
  for (const auto& m : {flat(s, 3), product_kahler(s, 3).metric, potential_kahler(s, 3).metric}) {
    const auto pack = curvature_pack(m);
    const auto v = random_tractor(s, 3, rng);
    const auto w = random_tractor(s, 3, rng);
    const auto dv = tractor_connection(v, pack, m);
    const auto dw = tractor_connection(w, pack, m);
    const auto h = tractor_metric(v, w, m);
    for (int a = 0; a < 6; ++a) {
      const auto lhs = h.partial(a);
      const auto rhs = tractor_metric(dv.direction(a), w, m) + tractor_metric(v, dw.direction(a), m);
      EXPECT_EQ(lhs.truncated(rhs.order()), rhs) << "direction " << a;
    }
  }
}

TEST(Connection, ChangeOfScaleIsParallelTransportCompatible) {
  const auto s = origin(6, 4);
  const auto m = flat(s, 4);
  const ExactJet Omega = one_plus(s, 4, {}, {0});
  const auto hat = conformal_rescale(m, Omega);
  const auto I = splitting_D(unit_density(s, 4), curvature_pack(m), m);
  const auto Ihat = change_of_scale(I, Omega, m, "ghat");
  EXPECT_TRUE(tractor_connection(Ihat, curvature_pack(hat.metric), hat.metric).is_zero());
}

TEST(KillingYano, ParallelFormsAndWitnesses) {
  const auto s = origin(6, 4);
  const auto m = flat(s, 4);
  const auto J = standard_symplectic<ParamPoly>(s, 4);
  EXPECT_TRUE(ky_residual(J, m).is_zero());
  const auto w = build_witness(m, J, one_plus(s, 4, {{1, 2}}, {0}));
  EXPECT_TRUE(ky_residual(w.psi.omega, w.metric).is_zero());
  const auto kp = product_kahler(s, 4);
  const auto wk = build_witness(kp.metric, kp.omega, one_plus(s, 4, {}, {0}));
  EXPECT_TRUE(ky_residual(wk.psi.omega, wk.metric).is_zero());
}

TEST(KillingYano, ConformallyInvariant) {
  std::mt19937_64 rng(23);
  const auto s = origin(6, 3);
  const auto m = product_kahler(s, 3).metric;
  const auto form = random_form(s, 3, rng);
  const ExactJet Omega = one_plus(s, 3, {}, {0});
  const auto hat = conformal_rescale(m, Omega);
  const auto ky = ky_residual(form, m);
  EXPECT_FALSE(ky.is_zero());
  const auto kyhat = ky_residual(form.multiplied(Omega.pow(3)), hat.metric);
  expect_same(kyhat, ky.multiplied(Omega.truncated(ky.order()).pow(3)));
}

TEST(LSplit, ParallelFormOnFlatSpace) {
  const auto s = origin(6, 4);
  const auto m = flat(s, 4);
  const auto J = standard_symplectic<ParamPoly>(s, 4);
  const auto L = L_split(J, curvature_pack(m), m);
  EXPECT_EQ(L.sigma, J);
  EXPECT_TRUE(L.nu.is_zero());
  EXPECT_TRUE(L.phi.is_zero());
  EXPECT_TRUE(L.rho.is_zero());
}

TEST(LSplit, KahlerScaleGivesMinusSchoutenAction) {
  const auto s = origin(6, 4);
  const auto kp = product_kahler(s, 4);
  const auto pack = curvature_pack(kp.metric);
  const auto L = L_split(kp.omega, pack, kp.metric);
  EXPECT_TRUE(L.nu.is_zero());
  EXPECT_TRUE(L.phi.is_zero());
  const auto Pw = contract(outer(raise(pack.schouten, 1, kp.metric), kp.omega), 1, 3);  // P_a^c w_bc
  expect_same(L.rho, alternate(Pw, {0, 1}));
  EXPECT_FALSE(L.rho.is_zero());
}

TEST(LSplit, WitnessMatchesProlongedSection) {
  const auto s = origin(6, 4);
  for (const auto& kp : {testing::KahlerPair{flat(s, 4), standard_symplectic<ParamPoly>(s, 4)}, product_kahler(s, 4)}) {
    const auto w = build_witness(kp.metric, kp.omega, one_plus(s, 4, {{0, 3}}, {0, 4}));
    const auto L = L_split(w.psi.omega, w.pack, w.metric);
    const auto P = psi_to_phi(w.psi);
    expect_same(L.sigma, P.sigma);
    expect_same(L.nu, P.nu);
    expect_same(L.phi, P.phi);
    expect_same(L.rho, P.rho);
  }
}

TEST(LSplit, PsiToPhiIsLinear) {
  const auto s = origin(6, 4);
  const auto m = flat(s, 4);
  const auto w1 = build_witness(m, standard_symplectic<ParamPoly>(s, 4), one_plus(s, 4, {}, {0}));
  const auto w2 = build_witness(m, standard_symplectic<ParamPoly>(s, 4), one_plus(s, 4, {}, {2}));
  const auto sum = to_form(psi_to_phi(w1.psi + w2.psi));
  expect_same(sum, to_form(psi_to_phi(w1.psi)) - to_form(psi_to_phi(w2.psi)).scaled(-1));
}

TEST(LSplit, ChangeOfScaleMatchesRederivation) {
  std::mt19937_64 rng(29);
  const auto s = origin(6, 4);
  const auto m = product_kahler(s, 4).metric;
  const ExactJet Omega = one_plus(s, 4, {{1, 2}}, {0, 3});
  const auto hat = conformal_rescale(m, Omega);
  for (int trial = 0; trial < 2; ++trial) {
    const auto form = trial == 0 ? product_kahler(s, 4).omega : random_form(s, 4, rng);
    const auto L = to_form(L_split(form, curvature_pack(m), m));
    const auto Lhat = to_form(L_split(form.multiplied(Omega.pow(3)), curvature_pack(hat.metric), hat.metric, "ghat"));
    expect_same(change_of_scale(L, Omega, m, "ghat"), Lhat);
  }
}

TEST(KahlerCheck, HoldsOnWitnesses) {
  const auto s = origin(6, 4);
  for (const auto& kp : {testing::KahlerPair{flat(s, 4), standard_symplectic<ParamPoly>(s, 4)}, product_kahler(s, 4)}) {
    const auto w = build_witness(kp.metric, kp.omega, one_plus(s, 4, {{1, 1}}, {0}));
    const auto k = kahler_characterisation_check(w.psi.omega, w.pack, w.metric);
    EXPECT_TRUE(k.herm_zero);
    EXPECT_TRUE(k.wedge_zero);
    EXPECT_TRUE(k.inner_zero);
    EXPECT_TRUE(k.ky_zero);
    EXPECT_TRUE(k.holds());
  }
}

TEST(KahlerCheck, FailsForAPerturbedForm) {
  const auto s = origin(6, 4);
  const auto m = flat(s, 4);
  auto J = standard_symplectic<ParamPoly>(s, 4);
  // J + x dz^du keeps |w|^2 = n at the point but is not conformal Killing-Yano.
  const ExactJet x = ExactJet::coordinate(s, 4, 0);
  const auto bump = Tensor<ParamPoly>::generate(s, down(2), 4, [&](std::span<const int> i) {
    if (i[0] == 2 && i[1] == 4) return x;
    if (i[0] == 4 && i[1] == 2) return -x;
    return ExactJet(s, 4);
  });
  const auto k = kahler_characterisation_check(J + bump, curvature_pack(m), m);
  EXPECT_FALSE(k.ky_zero);
  EXPECT_FALSE(k.holds());
}

TEST(KahlerCheck, DensityOverrideSkipsTheSquareRoot) {
  const auto s = origin(6, 4);
  const auto m = flat(s, 4);
  // dx^dy + dz^dt + 2 du^dv: |w|^2 / n = 2 has no rational root.
  const auto w = Tensor<ParamPoly>::generate(s, down(2), 4, [&](std::span<const int> i) {
    const int v = (i[0] / 2 == i[1] / 2 && i[0] != i[1]) ? (i[0] < i[1] ? 1 : -1) * (i[0] >= 4 ? 2 : 1) : 0;
    return ExactJet::constant(s, 4, Rational(v));
  });
  try {
    (void)kahler_characterisation_check(w, curvature_pack(m), m);
    FAIL() << "expected NonPerfectSquareConstantTerm";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPerfectSquareConstantTerm);
  }
  const auto k = kahler_characterisation_check(w, curvature_pack(m), m, std::optional(unit_density(s, 4)));
  EXPECT_FALSE(k.herm_zero);
  EXPECT_TRUE(k.ky_zero);
}

TEST(KahlerCheck, PhiNormIsScalarCurvatureInTheKahlerScale) {
  const auto s = origin(6, 6);
  for (const auto& kp : {product_kahler(s, 4), potential_kahler(s, 4)}) {
    const auto pack = curvature_pack(kp.metric);
    const auto k = kahler_characterisation_check(kp.omega, pack, kp.metric, std::optional(unit_density(s, 4)));
    EXPECT_TRUE(k.holds());
    const int ord = k.phi_norm.order();
    EXPECT_EQ(k.phi_norm, pack.scalar.truncated(ord).scaled(Rational(3, 6 - 1)));
  }
}

TEST(Einstein, FlatIsRicciFlatKahler) {
  const auto s = origin(6, 4);
  const auto m = flat(s, 4);
  const auto e = einstein_variants_check(standard_symplectic<ParamPoly>(s, 4), curvature_pack(m), m);
  EXPECT_TRUE(e.kahler.holds());
  EXPECT_TRUE(e.parallel);
  EXPECT_TRUE(e.null);
  EXPECT_TRUE(e.i_phi_zero);
  EXPECT_TRUE(e.kahler_einstein());
  EXPECT_TRUE(e.ricci_flat_kahler());
}

TEST(Einstein, ConformallyFlatWitnessIsStillFlatKahler) {
  const auto s = origin(6, 4);
  const auto w = build_witness(flat(s, 4), standard_symplectic<ParamPoly>(s, 4), one_plus(s, 4, {}, {0}));
  const auto e = einstein_variants_check(w.psi.omega, w.pack, w.metric);
  EXPECT_TRUE(e.kahler_einstein());
  EXPECT_TRUE(e.ricci_flat_kahler());
}

TEST(Einstein, ProductKahlerIsNotEinstein) {
  const auto s = origin(6, 4);
  const auto kp = product_kahler(s, 4);
  const auto e = einstein_variants_check(kp.omega, curvature_pack(kp.metric), kp.metric, std::optional(unit_density(s, 4)));
  EXPECT_TRUE(e.kahler.holds());
  EXPECT_FALSE(e.parallel);
  EXPECT_FALSE(e.kahler_einstein());
  EXPECT_FALSE(e.ricci_flat_kahler());
}

TEST(Density, RescaledByWeight) {
  const auto s = origin(6, 2);
  const ExactJet Omega = one_plus(s, 2, {}, {0});
  const Density<ParamPoly> d{ExactJet::constant(s, 2, Rational(2)), -1};
  EXPECT_EQ(d.rescaled(Omega).value * Omega, ExactJet::constant(s, 2, Rational(2)));
  const Density<ParamPoly> e{ExactJet::constant(s, 2, Rational(1)), 3};
  EXPECT_EQ(e.rescaled(Omega).value, Omega.pow(3));
}

}  // namespace
}  // namespace ckahler
