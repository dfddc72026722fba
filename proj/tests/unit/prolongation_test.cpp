#include <gtest/gtest.h>

#include <random>

#include "ckahler/obstruction.hpp"
#include "ckahler/prolongation.hpp"
#include "test_fixtures.hpp"

namespace ckahler {
namespace {

using testing::one_plus;
using testing::origin;
using testing::product_kahler;
using testing::standard_symplectic;

struct Flat {
  int order;
  JetSpacePtr s = origin(6, order);
  MetricJet<ParamPoly> g{identity_metric<ParamPoly>(s, order)};
  Tensor<ParamPoly> J = standard_symplectic<ParamPoly>(s, order);
};

ProlongationSection<ParamPoly> constant_section(const Flat& f) {
  return {f.J, Tensor<ParamPoly>(f.s, down(1), f.order), Tensor<ParamPoly>(f.s, down(3), f.order),
          Tensor<ParamPoly>(f.s, down(2), f.order)};
}

void expect_closed(const ConnectionResidual<ParamPoly>& r) {
  EXPECT_TRUE(r.slot1.is_zero());
  EXPECT_TRUE(r.slot2a.is_zero());
  EXPECT_TRUE(r.slot2b.is_zero());
  EXPECT_TRUE(r.slot3.is_zero());
  EXPECT_TRUE(r.all_zero());
  EXPECT_EQ(r.max_magnitude(), 0.0);
}

TEST(Prolongation, FiberDimension) {
  EXPECT_EQ(ProlongationSection<ParamPoly>::fiber_dimension(6), 56u);
  EXPECT_EQ(ProlongationSection<ParamPoly>::fiber_dimension(8), 120u);
  for (int n = 4; n <= 12; n += 2) {
    EXPECT_EQ(ProlongationSection<double>::fiber_dimension(n), static_cast<std::size_t>(n * (n + 1) * (n + 2) / 6));
  }
}

TEST(Prolongation, ConstantFormOnFlatSpaceIsParallel) {
  const Flat f{3};
  auto pack = curvature_pack(f.g);
  expect_closed(apply_connection(constant_section(f), pack, f.g));
}

TEST(Prolongation, ConstantKShowsUpInSlotOne) {
  const Flat f{3};
  auto psi = constant_section(f);
  psi.K = Tensor<ParamPoly>::generate(f.s, down(1), f.order, [&](std::span<const int> i) {
    return ExactJet::constant(f.s, f.order, Rational(i[0] + 1));
  });
  const auto r = apply_connection(psi, curvature_pack(f.g), f.g);
  EXPECT_FALSE(r.slot1.is_zero());
  const auto gK = outer(f.g.g(), psi.K);
  const int ord = r.slot1.order();
  EXPECT_EQ(r.slot1, -(gK - permute(gK, {0, 2, 1})).truncated(ord));
  EXPECT_EQ(r.slot1, -alternate(gK, {1, 2}).scaled(2).truncated(ord));
}

TEST(Prolongation, SigmaSlotNeedsThirdOrder) {
  const Flat f{2};
  auto pack = curvature_pack(f.g);
  try {
    (void)apply_connection(constant_section(f), pack, f.g);
    FAIL() << "expected OrderExhausted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OrderExhausted);
  }
}

TEST(Witness, FlatKahlerWithLinearFactor) {
  const Flat f{4};
  const auto w = build_witness(f.g, f.J, one_plus(f.s, 4, {}, {0}));
  EXPECT_FALSE(w.psi.K.is_zero());
  EXPECT_FALSE(w.psi.mu.is_zero());
  w.psi.check_antisymmetric();
  expect_closed(apply_connection(w.psi, w.pack, w.metric));
}

TEST(Witness, FlatKahlerWithQuadraticFactor) {
  const Flat f{4};
  const auto w = build_witness(f.g, f.J, one_plus(f.s, 4, {{1, 1}}, {0}));
  expect_closed(apply_connection(w.psi, w.pack, w.metric));
}

TEST(Witness, RandomQuadraticFactors) {
  const Flat f{4};
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int trial = 0; trial < 4; ++trial) {
    ExactJet om = ExactJet::constant(f.s, 4, Rational(1 + trial));
    for (int a = 0; a < 6; ++a) {
      om += ExactJet::coordinate(f.s, 4, a).scaled(Rational(coeff(rng), 2));
      for (int b = a; b < 6; ++b) {
        const int c = coeff(rng);
        if (c != 0 && (a + b + trial) % 3 == 0) {
          om += (ExactJet::coordinate(f.s, 4, a) * ExactJet::coordinate(f.s, 4, b)).scaled(Rational(c, 3));
        }
      }
    }
    const auto w = build_witness(f.g, f.J, om);
    expect_closed(apply_connection(w.psi, w.pack, w.metric));
  }
}

TEST(Witness, CurvedProductKahler) {
  const int ord = 5;
  const auto s = origin(6, ord);
  const auto kp = product_kahler(s, ord);
  const auto om = one_plus(s, ord, {{1, 1}}, {0}) +
                  (ExactJet::coordinate(s, ord, 2) * ExactJet::coordinate(s, ord, 4)).scaled(Rational(1, 3));
  const auto w = build_witness(kp.metric, kp.omega, om);
  EXPECT_FALSE(w.pack.weyl.is_zero());
  EXPECT_FALSE(w.pack.cotton_or_throw().is_zero());
  expect_closed(apply_connection(w.psi, w.pack, w.metric));
  EXPECT_TRUE(weyl_constraint_residual(w.pack.weyl, w.psi.omega, w.metric).is_zero());
}

TEST(Witness, UnitFactorKeepsKahlerPair) {
  const int ord = 4;
  const auto s = origin(6, ord);
  const auto kp = product_kahler(s, ord);
  const auto w = build_witness(kp.metric, kp.omega, ExactJet::constant(s, ord, Rational(1)));
  EXPECT_TRUE(w.psi.K.is_zero());
  EXPECT_TRUE(w.psi.mu.is_zero());
  EXPECT_EQ(w.psi.omega, kp.omega);
  const auto Pw = contract(outer(raise(w.pack.schouten, 1, w.metric), w.psi.omega), 1, 3);
  EXPECT_EQ(w.psi.Sigma, -Pw.truncated(w.psi.Sigma.order()));
  EXPECT_FALSE(w.psi.Sigma.is_zero());
}

TEST(Witness, RejectsNonParallelForm) {
  const Flat f{3};
  const auto bent = f.J.multiplied(one_plus(f.s, 3, {}, {0}));
  EXPECT_THROW((void)build_witness(f.g, bent, one_plus(f.s, 3, {}, {1})), Error);
  try {
    (void)build_witness(f.g, bent, one_plus(f.s, 3, {}, {1}));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotKahlerInput);
  }
}

TEST(Witness, RejectsNonPositiveFactor) {
  const Flat f{3};
  const auto neg = -one_plus(f.s, 3, {}, {0});
  try {
    (void)build_witness(f.g, f.J, neg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveConformalFactor);
  }
}

TEST(Witness, SectionFromFormAgrees) {
  const int ord = 4;
  const auto s = origin(6, ord);
  const auto kp = product_kahler(s, ord);
  const auto w = build_witness(kp.metric, kp.omega, one_plus(s, ord, {{0, 5}}, {1}));
  const auto sf = section_from_form(w.psi.omega, w.pack, w.metric);
  EXPECT_EQ(sf.K, w.psi.K);
  EXPECT_EQ(sf.mu, w.psi.mu);
  EXPECT_EQ(sf.Sigma, w.psi.Sigma);
}

TEST(Witness, SlotTwoSplit) {
  const Flat f{4};
  const auto w = build_witness(f.g, f.J, one_plus(f.s, 4, {{1, 1}}, {0}));
  const auto dK = covariant_derivative(w.psi.K, w.pack.gamma);
  const auto Pw = contract(outer(raise(w.pack.schouten, 1, w.metric), w.psi.omega), 1, 3);
  EXPECT_EQ(symmetrize(dK, {0, 1}), symmetrize(Pw, {0, 1}));
  EXPECT_EQ(alternate(dK - Pw, {0, 1}), w.psi.Sigma);
}

TEST(Witness, FactorsCompose) {
  const int ord = 3;
  const auto s = origin(6, ord);
  const auto kp = product_kahler(s, ord);
  const auto o1 = one_plus(s, ord, {}, {0});
  const auto o2 = one_plus(s, ord, {{2, 3}}, {4});
  const auto w1 = build_witness(kp.metric, kp.omega, o1);
  const auto w12 = build_witness(kp.metric, kp.omega, o1 * o2);
  const auto inv2 = o2.inverse();
  EXPECT_EQ(w12.metric.g(), w1.metric.g().multiplied(inv2 * inv2));
  EXPECT_EQ(w12.psi.omega, w1.psi.omega.multiplied(inv2 * inv2 * inv2));
  const auto u2 = Tensor<ParamPoly>::generate(s, down(1), ord - 1, [&](std::span<const int> i) {
    return o2.partial(i[0]) * inv2.truncated(ord - 1);
  });
  EXPECT_EQ(w12.upsilon, w1.upsilon + u2);
}

TEST(Killing, RotationField) {
  const Flat f{2};
  const auto x = ExactJet::coordinate(f.s, 2, 0), y = ExactJet::coordinate(f.s, 2, 1);
  const auto K = Tensor<ParamPoly>::generate(f.s, down(1), 2, [&](std::span<const int> i) {
    return i[0] == 0 ? -y : i[0] == 1 ? x : ExactJet(f.s, 2);
  });
  const auto G = christoffel(f.g);
  EXPECT_TRUE(killing_residual(K, G).is_zero());
  EXPECT_TRUE(killing_residual(Tensor<ParamPoly>(f.s, down(1), 2), G).is_zero());
  const auto grad = Tensor<ParamPoly>::generate(f.s, down(1), 2, [&](std::span<const int> i) {
    return i[0] == 0 ? x : ExactJet(f.s, 2);
  });
  EXPECT_FALSE(killing_residual(grad, G).is_zero());
}

TEST(Killing, EinsteinWitness) {
  const Flat f{4};
  const auto w = build_witness(f.g, f.J, one_plus(f.s, 4, {}, {0}));
  EXPECT_TRUE(killing_residual(w.psi.K, w.pack.gamma).is_zero());
  const auto w2 = build_witness(f.g, f.J, one_plus(f.s, 4, {{1, 1}}, {0}));
  EXPECT_FALSE(killing_residual(w2.psi.K, w2.pack.gamma).is_zero());
}

TEST(Witness, FloatBackendCloses) {
  const int ord = 4;
  const auto s = origin(6, ord);
  const MetricJet<double> g(identity_metric<double>(s, ord));
  const auto J = standard_symplectic<double>(s, ord);
  const auto om = Jet<double>::constant(s, ord, Rational(1)) + Jet<double>::coordinate(s, ord, 0) +
                  Jet<double>::coordinate(s, ord, 1) * Jet<double>::coordinate(s, ord, 1);
  const auto w = build_witness(g, J, om);
  const auto r = apply_connection(w.psi, w.pack, w.metric);
  EXPECT_TRUE(r.all_zero(1e-9));
  EXPECT_LT(r.max_magnitude(), 1e-9);
}

TEST(Prolongation, AntisymmetryCheck) {
  const Flat f{1};
  auto psi = constant_section(f);
  psi.check_antisymmetric();
  psi.Sigma = f.g.g();
  EXPECT_THROW(psi.check_antisymmetric(), Error);
  const auto sum = constant_section(f) + constant_section(f);
  EXPECT_EQ(sum.omega, f.J.scaled(2));
}

}  // namespace
}  // namespace ckahler
