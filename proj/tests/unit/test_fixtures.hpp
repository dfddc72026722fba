#pragma once

#include <vector>

#include "ckahler/tensor.hpp"

namespace ckahler::testing {

inline JetSpacePtr origin(int dim, int order) {
  return JetSpace::create(dim, order, std::vector<Rational>(static_cast<std::size_t>(dim), Rational(0)));
}

/// J = dx0^dx1 + dx2^dx3 + ...
template <class S>
Tensor<S> standard_symplectic(const JetSpacePtr& s, int order) {
  return Tensor<S>::generate(s, down(2), order, [&](std::span<const int> i) {
    int v = 0;
    if (i[0] % 2 == 0 && i[1] == i[0] + 1) v = 1;
    if (i[1] % 2 == 0 && i[0] == i[1] + 1) v = -1;
    return Jet<S>::constant(s, order, Rational(v));
  });
}

/// delta + c(t^2+yt) dxdy + c(t^2+tu) dudv on (x,y,z,t,u,v), cross terms split
/// symmetrically with a factor 1/2.
inline MetricJet<ParamPoly> example_metric(const JetSpacePtr& s, int order) {
  const ParamPoly c = ParamPoly::variable(0);
  auto X = [&](int d) { return ExactJet::coordinate(s, order, d); };
  const ExactJet t = X(3);
  const ExactJet xy = (t * t + X(1) * t).scaled(c).scaled(Rational(1, 2));
  const ExactJet uv = (t * t + t * X(4)).scaled(c).scaled(Rational(1, 2));
  auto g = Tensor<ParamPoly>::generate(s, down(2), order, [&](std::span<const int> i) {
    const int a = std::min(i[0], i[1]), b = std::max(i[0], i[1]);
    if (a == b) return ExactJet::constant(s, order, Rational(1));
    if (a == 0 && b == 1) return xy;
    if (a == 4 && b == 5) return uv;
    return ExactJet(s, order);
  });
  return MetricJet<ParamPoly>(g);
}

/// h0 (dx^2+dy^2) + h1 (dz^2+dt^2) + h2 (du^2+dv^2) with Kahler form
/// h0 dx^dy + h1 dz^dt + h2 du^dv, hi = 1 + x^2 + y/2, 1 + zt, 1 + u + v^2.
struct KahlerPair {
  MetricJet<ParamPoly> metric;
  Tensor<ParamPoly> omega;
};

inline KahlerPair product_kahler(const JetSpacePtr& s, int order) {
  auto X = [&](int d) { return ExactJet::coordinate(s, order, d); };
  const auto one = ExactJet::constant(s, order, Rational(1));
  const std::vector<ExactJet> h{one + X(0) * X(0) + X(1).scaled(Rational(1, 2)), one + X(2) * X(3),
                                one + X(4) + X(5) * X(5)};
  auto g = Tensor<ParamPoly>::generate(s, down(2), order, [&](std::span<const int> i) {
    return i[0] == i[1] ? h[static_cast<std::size_t>(i[0] / 2)] : ExactJet(s, order);
  });
  auto w = Tensor<ParamPoly>::generate(s, down(2), order, [&](std::span<const int> i) {
    if (i[0] / 2 != i[1] / 2 || i[0] == i[1]) return ExactJet(s, order);
    const auto& f = h[static_cast<std::size_t>(i[0] / 2)];
    return i[0] < i[1] ? f : -f;
  });
  return {MetricJet<ParamPoly>(g), w};
}

/// Kahler pair on R^6 = C^3 from the potential |z|^2 + x0^2 x1^2 / 2 + y0 x2 y2 y1 / 3 +
/// x0 y1^2 y2^2 with z_j = x_j + i y_j and real coordinates (x0, y0, x1, y1, x2, y2).
inline KahlerPair potential_kahler(const JetSpacePtr& s, int order) {
  const int big = order + 2;
  auto X = [&](int d) { return ExactJet::coordinate(s, big, d); };
  ExactJet F(s, big);
  for (int d = 0; d < 6; ++d) F += X(d) * X(d);
  F += (X(0) * X(0) * X(2) * X(2)).scaled(Rational(1, 2)) + (X(1) * X(4) * X(5) * X(3)).scaled(Rational(1, 3)) +
       X(0) * X(3) * X(3) * X(5) * X(5);
  auto d2 = [&](int a, int b) { return F.partial(a).partial(b).truncated(order); };
  auto A = [&](int j, int k) { return (d2(2 * j, 2 * k) + d2(2 * j + 1, 2 * k + 1)).scaled(Rational(1, 4)); };
  auto B = [&](int j, int k) { return (d2(2 * j, 2 * k + 1) - d2(2 * j + 1, 2 * k)).scaled(Rational(1, 4)); };
  auto g = Tensor<ParamPoly>::generate(s, down(2), order, [&](std::span<const int> i) {
    const int j = i[0] / 2, k = i[1] / 2, p = i[0] % 2, q = i[1] % 2;
    if (p == q) return A(j, k);
    return p == 0 ? B(j, k) : B(k, j);
  });
  auto w = Tensor<ParamPoly>::generate(s, down(2), order, [&](std::span<const int> i) {
    const int j = i[0] / 2, k = i[1] / 2, p = i[0] % 2, q = i[1] % 2;
    if (p == q) return -B(j, k);
    return p == 0 ? A(j, k) : -A(k, j);
  });
  return {MetricJet<ParamPoly>(g), w};
}

/// 1 + sum of x_a x_b over `squares` + sum of x_d over `linear`.
inline ExactJet one_plus(const JetSpacePtr& s, int order, std::initializer_list<std::pair<int, int>> squares,
                         std::initializer_list<int> linear) {
  ExactJet f = ExactJet::constant(s, order, Rational(1));
  for (int d : linear) f += ExactJet::coordinate(s, order, d);
  for (auto [a, b] : squares) f += ExactJet::coordinate(s, order, a) * ExactJet::coordinate(s, order, b);
  return f;
}

inline MetricJet<double> to_float(const MetricJet<ParamPoly>& m, std::vector<double> params) {
  return MetricJet<double>(evaluate_parameters(m.g(), params));
}

}  // namespace ckahler::testing
