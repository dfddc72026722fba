#include <gtest/gtest.h>

#include "ckahler/curvature.hpp"
#include "test_fixtures.hpp"

using namespace ckahler;
using namespace ckahler::testing;

namespace {

ExactJet coord(const JetSpacePtr& s, int order, int d) { return ExactJet::coordinate(s, order, d); }
ExactJet constant(const JetSpacePtr& s, int order, long v) { return ExactJet::constant(s, order, Rational(v)); }

MetricJet<ParamPoly> conformally_flat(const JetSpacePtr& s, int order) {
  const auto f = constant(s, order, 1) + coord(s, order, 0);
  return MetricJet<ParamPoly>(identity_metric<ParamPoly>(s, order).multiplied(f * f));
}

template <class S>
Jet<S> full_norm(const Tensor<S>& c, const MetricJet<S>& m) {
  auto up = c;
  for (int k = 0; k < 4; ++k) up = raise(up, k, m);
  auto t = outer(c, up);
  for (int k = 0; k < 4; ++k) t = contract(t, 0, 4 - k);
  return t.components()[0];
}

}  // namespace

TEST(CurvaturePack, FlatMetricVanishes) {
  auto s = origin(6, 3);
  MetricJet<ParamPoly> m(identity_metric<ParamPoly>(s, 3));
  auto p = curvature_pack(m);
  EXPECT_TRUE(p.riemann.is_zero());
  EXPECT_TRUE(p.ricci.is_zero());
  EXPECT_TRUE(p.scalar.is_zero());
  EXPECT_TRUE(p.schouten.is_zero());
  EXPECT_TRUE(p.weyl.is_zero());
  ASSERT_TRUE(p.cotton.has_value());
  EXPECT_TRUE(p.cotton->is_zero());
}

TEST(CurvaturePack, ConformallyFlatHasNoWeyl) {
  auto s = origin(6, 3);
  auto p = curvature_pack(conformally_flat(s, 3));
  EXPECT_FALSE(p.riemann.is_zero());
  EXPECT_TRUE(p.weyl.is_zero());
}

TEST(CurvaturePack, ExampleMetricHasWeyl) {
  auto s = origin(6, 3);
  auto p = curvature_pack(example_metric(s, 3));
  EXPECT_FALSE(p.weyl.is_zero());
  EXPECT_EQ(p.weyl.order(), 1);
  EXPECT_EQ(p.cotton->order(), 0);
}

TEST(CurvaturePack, Preconditions) {
  auto s3 = origin(3, 3);
  EXPECT_THROW(curvature_pack(MetricJet<ParamPoly>(identity_metric<ParamPoly>(s3, 3))), Error);
  auto s = origin(6, 1);
  try {
    curvature_pack(MetricJet<ParamPoly>(identity_metric<ParamPoly>(s, 1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OrderExhausted);
  }
  auto p = curvature_pack(MetricJet<ParamPoly>(identity_metric<ParamPoly>(origin(6, 2), 2)));
  EXPECT_FALSE(p.cotton.has_value());
  EXPECT_THROW(p.cotton_or_throw(), Error);
}

TEST(RicciIdentity, OneForm) {
  auto s = origin(6, 4);
  auto m = example_metric(s, 4);
  auto p = curvature_pack(m);
  auto w = Tensor<ParamPoly>::generate(s, down(1), 4, [&](std::span<const int> i) {
    return coord(s, 4, (i[0] + 1) % 6) * coord(s, 4, 3) + constant(s, 4, i[0] + 2);
  });
  auto dd = covariant_derivative(covariant_derivative(w, p.gamma), p.gamma);  // dd(a,b,c) = nabla_a nabla_b w_c
  auto commutator = dd - permute(dd, {1, 0, 2});
  // R_abc^d w_d
  auto action = contract(outer(raise(p.riemann, 3, m), w), 3, 4);
  EXPECT_EQ(commutator, action.truncated(commutator.order()));
  EXPECT_FALSE(commutator.is_zero());
}

TEST(RicciIdentity, TwoFormAsPrinted) {
  auto s = origin(6, 4);
  auto m = example_metric(s, 4);
  auto p = curvature_pack(m);
  auto w = Tensor<ParamPoly>::generate(s, down(2), 4, [&](std::span<const int> i) {
    if (i[0] == i[1]) return ExactJet(s, 4);
    const int a = std::min(i[0], i[1]), b = std::max(i[0], i[1]);
    auto v = coord(s, 4, (a + b) % 6) * coord(s, 4, 3) + constant(s, 4, a + 2 * b);
    return i[0] < i[1] ? v : -v;
  });
  auto dd = covariant_derivative(covariant_derivative(w, p.gamma), p.gamma);
  auto commutator = dd - permute(dd, {1, 0, 2, 3});
  auto Rmixed = raise(p.riemann, 3, m);  // R_abc^p
  // -R_abc^p w_dp + R_abd^p w_cp
  auto Rw = contract(outer(Rmixed, w), 3, 5);  // (a,b,c,d') = R_abc^p w_d'p
  auto rhs = -Rw + permute(Rw, {0, 1, 3, 2});
  EXPECT_EQ(commutator, rhs.truncated(commutator.order()));
}

TEST(TransformationLaws, FlatAndExample) {
  auto s = origin(6, 4);
  const auto x = coord(s, 4, 0), y = coord(s, 4, 1), z = coord(s, 4, 2);
  const std::vector<ExactJet> factors{constant(s, 4, 1) + x, constant(s, 4, 1) + y + x * z};
  const std::vector<MetricJet<ParamPoly>> metrics{MetricJet<ParamPoly>(identity_metric<ParamPoly>(s, 4)),
                                                  example_metric(s, 4)};
  for (const auto& m : metrics) {
    const auto pack = curvature_pack(m);
    for (const auto& omega : factors) {
      const auto r = conformal_rescale(m, omega);
      const auto hat = curvature_pack(r.metric);
      EXPECT_EQ(hat.weyl, transformed_weyl(pack, omega).truncated(hat.weyl.order()));
      const auto expected = transformed_schouten(pack, m, r.upsilon);
      EXPECT_EQ(hat.schouten, expected.truncated(hat.schouten.order()));
    }
  }
}

TEST(TransformationLaws, IdentityFactor) {
  auto s = origin(6, 3);
  auto m = example_metric(s, 3);
  auto r = conformal_rescale(m, constant(s, 3, 1));
  EXPECT_EQ(r.metric.g(), m.g());
  EXPECT_TRUE(r.upsilon.is_zero());
  EXPECT_THROW(conformal_rescale(m, constant(s, 3, -2)), Error);
  EXPECT_THROW(conformal_rescale(m, ExactJet(s, 3)), Error);
}

TEST(TransformationLaws, FlatSchoutenFromUpsilon) {
  auto s = origin(6, 3);
  MetricJet<ParamPoly> flat(identity_metric<ParamPoly>(s, 3));
  auto omega = constant(s, 3, 1) + coord(s, 3, 0);
  auto r = conformal_rescale(flat, omega);
  auto hat = curvature_pack(r.metric);
  EXPECT_TRUE(hat.weyl.is_zero());
  auto U = r.upsilon.truncated(1);
  auto dU = partial_derivative(r.upsilon);
  auto norm = contract(outer(raise(U, 0, flat.truncated(1)), U), 0, 1).components()[0];
  auto expected = -dU + outer(U, U) - flat.g().truncated(1).multiplied(norm.scaled(Rational(1, 2)));
  EXPECT_EQ(hat.schouten, expected);
}

TEST(CurvatureNorms, WeylNormAgreesAcrossBackends) {
  auto s = origin(6, 2);
  auto m = example_metric(s, 2);
  auto pe = curvature_pack(m);
  auto ne = full_norm(pe.weyl, m.truncated(0));
  for (double c : {0.5, 1.25, -2.0}) {
    auto mf = to_float(m, {c});
    auto pf = curvature_pack(mf);
    auto nf = full_norm(pf.weyl, mf.truncated(0));
    const double e = ne.constant_term().evaluate(std::vector<double>{c});
    EXPECT_NEAR(nf.constant_term(), e, 1e-9 * std::max(1.0, std::fabs(e)));
  }
  EXPECT_FALSE(ne.is_zero());
}

TEST(CurvaturePack, CottonFromDefinition) {
  auto s = origin(6, 3);
  auto p = curvature_pack(example_metric(s, 3));
  auto dP = covariant_derivative(p.schouten, p.gamma);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) EXPECT_EQ((*p.cotton)(a, b, c), dP(b, c, a) - dP(c, b, a));
}
