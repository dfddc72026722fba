#include <gtest/gtest.h>

#include <random>

#include "ckahler/curvature.hpp"
#include "ckahler/obstruction.hpp"
#include "ckahler/sampling.hpp"
#include "test_fixtures.hpp"

using namespace ckahler;
using namespace ckahler::testing;

namespace {

Matrix<ParamPoly> example_bivector() {
  Matrix<ParamPoly> X(6, 6);
  X(0, 1) = ParamPoly(2);
  X(1, 0) = ParamPoly(-2);
  X(2, 4) = ParamPoly(1);
  X(4, 2) = ParamPoly(-1);
  return X;
}

const WeylAtPoint<ParamPoly>& example_weyl() {
  static const WeylAtPoint<ParamPoly> w = [] {
    auto s = origin(6, 2);
    auto m = example_metric(s, 2);
    return weyl_at_point(curvature_pack(m).weyl, m);
  }();
  return w;
}

Matrix<ParamPoly> random_matrix(std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 3);
  Matrix<ParamPoly> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = ParamPoly(Rational(num(rng), den(rng)));
  return m;
}

Matrix<ParamPoly> random_bivector(int n, std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-4, 4);
  Matrix<ParamPoly> X(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = i + 1; j < X.cols(); ++j) {
      X(i, j) = ParamPoly(num(rng));
      X(j, i) = -X(i, j);
    }
  return X;
}

}  // namespace

TEST(TwoFormBasis, PairsAndLookup) {
  TwoFormBasis b(6);
  EXPECT_EQ(b.size(), 15u);
  EXPECT_EQ(b.pair(0), std::make_pair(0, 1));
  EXPECT_EQ(b.pair(14), std::make_pair(4, 5));
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(b.index(b.pair(i).first, b.pair(i).second), i);
    EXPECT_EQ(b.index(b.pair(i).second, b.pair(i).first), i);
  }
}

TEST(Obstruction, GoldenExampleDeterminant) {
  const auto& w = example_weyl();
  auto report = obstruction_report(w, example_bivector());
  EXPECT_EQ(report.N, 15u);
  EXPECT_TRUE(report.trace_free);
  const ParamPoly c = ParamPoly::variable(0);
  const ParamPoly golden = c.pow(15).scaled(Rational(mpz_class(9639), mpz_class("17592186044416")));
  EXPECT_EQ(report.det_trace, golden);
  EXPECT_EQ(report.det_oracle, golden);
  EXPECT_EQ(report.det_bell, golden);
  const std::vector<std::string> names{"c"};
  EXPECT_EQ(report.det_trace.to_string(names), "9639/17592186044416 * c^15");
}

TEST(Obstruction, DoubleContractionMatchesSecondTrace) {
  const auto& w = example_weyl();
  const auto X = example_bivector();
  auto s = trace_powers(beta_matrix(w, X), 2);
  EXPECT_EQ(s2_double_contraction(w, X), s[1]);
  EXPECT_FALSE(s[1].is_zero());
}

TEST(Obstruction, LinearityAndHomogeneityInBivector) {
  const auto& w = example_weyl();
  std::mt19937 rng(3);
  auto X1 = random_bivector(6, rng), X2 = random_bivector(6, rng);
  EXPECT_EQ(beta_matrix(w, X1 + X2), beta_matrix(w, X1) + beta_matrix(w, X2));
  const auto X = example_bivector();
  const auto d1 = determinant_bareiss(beta_matrix(w, X));
  const auto d3 = determinant_bareiss(beta_matrix(w, X.scaled(Rational(3))));
  EXPECT_EQ(d3, d1.scaled(Rational(3).pow(15)));
}

TEST(Obstruction, NonAntisymmetricBivector) {
  auto X = example_bivector();
  X(3, 3) = ParamPoly(1);
  try {
    beta_matrix(example_weyl(), X);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonAntisymmetricBivector);
  }
}

TEST(Obstruction, FlatMetricGivesZero) {
  auto s = origin(6, 2);
  MetricJet<ParamPoly> m(identity_metric<ParamPoly>(s, 2));
  auto w = weyl_at_point(curvature_pack(m).weyl, m);
  EXPECT_TRUE(beta_matrix(w, example_bivector()).is_zero());
  auto r = obstruction_report(w, example_bivector());
  EXPECT_TRUE(r.det_trace.is_zero());
  for (const auto& d : per_pair_determinants(w)) EXPECT_TRUE(d.is_zero());
  auto J = point_matrix(standard_symplectic<ParamPoly>(s, 0));
  EXPECT_TRUE(commutator_residual(w, J, Matrix<ParamPoly>::identity(6)).is_zero());
}

// At the origin the example Weyl tensor is sparse enough that every fixed-pair
// matrix is singular; generic Weyl tensors give nonzero determinants.
TEST(Obstruction, PerPairDeterminants) {
  auto dets = per_pair_determinants(example_weyl());
  EXPECT_EQ(dets.size(), 15u);
  for (const auto& d : dets) EXPECT_TRUE(d.is_zero());

  std::mt19937_64 rng(7);
  auto generic = per_pair_determinants(random_weyl(6, rng));
  for (double d : generic) EXPECT_GT(std::fabs(d), 1e-6);

  auto flat = weyl_at_point(curvature_pack(MetricJet<ParamPoly>(identity_metric<ParamPoly>(origin(6, 2), 2))).weyl,
                            MetricJet<ParamPoly>(identity_metric<ParamPoly>(origin(6, 2), 2)));
  for (const auto& d : per_pair_determinants(flat)) EXPECT_TRUE(d.is_zero());
}

TEST(Obstruction, WeylResidualIsBetaActionUpToSign) {
  auto s = origin(6, 2);
  auto m = example_metric(s, 2);
  auto pack = curvature_pack(m);
  auto w = weyl_at_point(pack.weyl, m);
  auto omega = Tensor<ParamPoly>::generate(s, down(2), 0, [&](std::span<const int> i) {
    const int lo = std::min(i[0], i[1]), hi = std::max(i[0], i[1]);
    const int v = i[0] == i[1] ? 0 : (i[0] < i[1] ? 1 : -1) * (lo + 2 * hi + 1);
    return ExactJet::constant(s, 0, Rational(v));
  });
  auto residual = weyl_constraint_residual(pack.weyl, omega, m);
  EXPECT_FALSE(residual.is_zero());
  auto action = beta_action_on_form(w, point_matrix(omega));
  TwoFormBasis basis(6);
  for (std::size_t r = 0; r < basis.size(); ++r)
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const auto [b, cc] = basis.pair(r);
      const auto [a, d] = basis.pair(c);
      EXPECT_EQ(action(r, c), -residual(b, cc, a, d).constant_term());
    }
  auto zero = Tensor<ParamPoly>(s, down(2), 0);
  EXPECT_TRUE(weyl_constraint_residual(pack.weyl, zero, m).is_zero());
}

TEST(DeterminantPaths, RandomMatrices) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 6 + static_cast<std::size_t>(trial % 10);
    auto M = random_matrix(n, rng);
    auto s = trace_powers(M, n);
    const auto oracle = determinant_bareiss(M);
    EXPECT_EQ(newton_determinant(s, n), oracle);
    EXPECT_EQ(determinant_bareiss(bell_matrix(s, n)), oracle);
  }
}

TEST(DeterminantPaths, SmallCases) {
  std::vector<ParamPoly> zeros(15);
  EXPECT_TRUE(newton_determinant(zeros, 15).is_zero());
  try {
    newton_determinant(zeros, 14);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InconsistentTraceCount);
  }
  Matrix<ParamPoly> id = Matrix<ParamPoly>::identity(5);
  EXPECT_EQ(newton_determinant(trace_powers(id, 5), 5), ParamPoly(1));
}

TEST(DeterminantPaths, PrintedExpansionForFifteen) {
  // The 41-term expansion for N = 15 and s_1 = 0.
  struct Term {
    long num, den;
    std::vector<int> powers;  // exponents of s_2..s_15
  };
  auto P = [](std::initializer_list<std::pair<int, int>> f) {
    std::vector<int> p(14, 0);
    for (auto [k, e] : f) p[static_cast<std::size_t>(k - 2)] = e;
    return p;
  };
  const std::vector<Term> terms{
      {-1, 1152, P({{3, 1}, {4, 3}})},         {1, 138240, P({{2, 6}, {3, 1}})},
      {-1, 7776, P({{2, 3}, {3, 3}})},         {1, 216, P({{3, 1}, {6, 2}})},
      {-1, 19200, P({{2, 5}, {5, 1}})},        {-1, 972, P({{3, 3}, {6, 1}})},
      {1, 2688, P({{2, 4}, {7, 1}})},          {1, 224, P({{4, 2}, {7, 1}})},
      {-1, 56, P({{7, 1}, {8, 1}})},           {-1, 432, P({{2, 3}, {9, 1}})},
      {1, 162, P({{3, 2}, {9, 1}})},           {-1, 54, P({{6, 1}, {9, 1}})},
      {-1, 50, P({{10, 1}, {5, 1}})},          {1, 88, P({{11, 1}, {2, 2}})},
      {-1, 44, P({{11, 1}, {4, 1}})},          {-1, 36, P({{3, 1}, {12, 1}})},
      {-1, 192, P({{2, 2}, {3, 1}, {8, 1}})},  {1, 80, P({{2, 1}, {5, 1}, {8, 1}})},
      {1, 96, P({{3, 1}, {4, 1}, {8, 1}})},    {-1, 224, P({{2, 2}, {4, 1}, {7, 1}})},
      {-1, 252, P({{2, 1}, {3, 2}, {7, 1}})},  {1, 84, P({{2, 1}, {6, 1}, {7, 1}})},
      {1, 105, P({{3, 1}, {5, 1}, {7, 1}})},   {1, 864, P({{2, 3}, {3, 1}, {6, 1}})},
      {-1, 240, P({{2, 2}, {5, 1}, {6, 1}})},  {1, 120, P({{4, 1}, {5, 1}, {6, 1}})},
      {1, 960, P({{2, 3}, {4, 1}, {5, 1}})},   {1, 720, P({{2, 2}, {3, 2}, {5, 1}})},
      {-1, 300, P({{2, 1}, {3, 1}, {5, 2}})},  {-1, 320, P({{2, 1}, {4, 2}, {5, 1}})},
      {-1, 360, P({{3, 2}, {4, 1}, {5, 1}})},  {-1, 4608, P({{2, 4}, {3, 1}, {4, 1}})},
      {1, 768, P({{2, 2}, {3, 1}, {4, 2}})},   {1, 1296, P({{2, 1}, {3, 3}, {4, 1}})},
      {-1, 144, P({{2, 1}, {3, 1}, {4, 1}, {6, 1}})},
      {1, 15, P({{15, 1}})},                   {1, 750, P({{5, 3}})},
      {-1, 26, P({{2, 1}, {13, 1}})},          {1, 29160, P({{3, 5}})},
      {1, 60, P({{10, 1}, {2, 1}, {3, 1}})},   {1, 72, P({{2, 1}, {4, 1}, {9, 1}})},
  };
  ASSERT_EQ(terms.size(), 41u);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> num(-7, 7), den(1, 4);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Rational> s(15);
    for (std::size_t k = 1; k < 15; ++k) s[k] = Rational(num(rng), den(rng));
    Rational printed(0);
    for (const auto& t : terms) {
      Rational v(t.num, t.den);
      for (std::size_t k = 0; k < 14; ++k) v = v * s[k + 1].pow(static_cast<unsigned>(t.powers[k]));
      printed = printed + v;
    }
    std::vector<ParamPoly> sp(s.begin(), s.end());
    EXPECT_EQ(newton_determinant(sp, 15), ParamPoly(printed));
    EXPECT_EQ(determinant_bareiss(bell_matrix(sp, 15)), ParamPoly(printed));
    // printed_b_matrix does not reproduce the expansion.
    EXPECT_NE(determinant_bareiss(printed_b_matrix(sp, 15)), ParamPoly(printed));
  }
}

TEST(Commutator, EquivalentToWeylResidualOnExample) {
  const auto& w = example_weyl();
  auto s = origin(6, 0);
  auto J = point_matrix(standard_symplectic<ParamPoly>(s, 0));
  auto comm = commutator_residual(w, J, Matrix<ParamPoly>::identity(6));
  auto action = beta_action_on_form(w, J);
  EXPECT_FALSE(comm.is_zero());
  EXPECT_FALSE(action.is_zero());
}
