#include "ckahler/tractor.hpp"

#include <algorithm>
#include <numeric>

#include "ckahler/constraints.hpp"

namespace ckahler {

namespace {

template <class S>
Jet<S> cut(const Jet<S>& j, int order) {
  return order < j.order() ? j.truncated(order) : j;
}

template <class S>
Tensor<S> cut(const Tensor<S>& t, int order) {
  return order < t.order() ? t.truncated(order) : t;
}

template <class S>
Tensor<S> times(const Tensor<S>& t, const Jet<S>& f) {
  const int o = std::min(t.order(), f.order());
  return cut(t, o).multiplied(cut(f, o));
}

template <class S>
Jet<S> scalar_of(const Tensor<S>& t) {
  return t.components().front();
}

template <class S>
Tensor<S> gradient(const Jet<S>& f) {
  return Tensor<S>::generate(f.space(), down(1), f.order() - 1, [&](std::span<const int> i) { return f.partial(i[0]); });
}

template <class S>
bool zero_jet(const Jet<S>& j, double scale, double eps) {
  return vanishes(j, scale, eps);
}

// Strictly increasing r-tuples from [0, N).
inline std::vector<std::vector<int>> combinations(int N, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(static_cast<std::size_t>(r));
  std::iota(c.begin(), c.end(), 0);
  if (r > N) return out;
  while (true) {
    out.push_back(c);
    int i = r - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == N - r + i) --i;
    if (i < 0) return out;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// Sorts in place; returns the permutation sign, or 0 on a repeated index.
inline int sort_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (idx[i] == idx[i - 1]) return 0;
  }
  return sign;
}

inline long factorial(int k) {
  long f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Inverse tractor metric on the lower frame: h^{Y X} = 1, h^{Z^b Z^c} = g^bc.
template <class S>
std::vector<std::vector<Jet<S>>> gram(const MetricJet<S>& m, int order) {
  const int n = m.dim();
  const int N = n + 2;
  const Jet<S> zero(m.space(), order);
  std::vector<std::vector<Jet<S>>> G(static_cast<std::size_t>(N), std::vector<Jet<S>>(static_cast<std::size_t>(N), zero));
  const auto one = Jet<S>::constant(m.space(), order, Rational(1));
  G[0][static_cast<std::size_t>(N - 1)] = one;
  G[static_cast<std::size_t>(N - 1)][0] = one;
  for (int b = 0; b < n; ++b) {
    for (int c = 0; c < n; ++c) G[static_cast<std::size_t>(1 + b)][static_cast<std::size_t>(1 + c)] = cut(m.g_inv()(b, c), order);
  }
  return G;
}

template <class S>
void require_same_scale(const std::string& a, const std::string& b) {
  if (a != b) throw Error(ErrorCode::ScaleMismatch, "tractors are expressed in scales '" + a + "' and '" + b + "'");
}

}  // namespace

template <class S>
Density<S> Density<S>::rescaled(const Jet<S>& Omega) const {
  const int o = std::min(value.order(), Omega.order());
  const Jet<S> base = weight >= 0 ? cut(Omega, o) : cut(Omega, o).inverse();
  return {cut(value, o) * base.pow(static_cast<unsigned>(std::abs(weight))), weight};
}

template <class S>
int TractorVector<S>::order() const {
  return std::min({sigma.order(), mu.order(), rho.order()});
}

template <class S>
TractorVector<S> TractorVector<S>::truncated(int o) const {
  return {scale, cut(sigma, o), cut(mu, o), cut(rho, o)};
}

template <class S>
TractorVector<S> TractorDerivative<S>::direction(int a) const {
  const Tensor<S> m =
      Tensor<S>::generate(mu.space(), down(1), mu.order(), [&](std::span<const int> i) { return mu(a, i[0]); });
  return {scale, sigma(a), m, rho(a)};
}

template <class S>
TractorForm<S>::TractorForm(int n, int rank, JetSpacePtr space, int order, std::string scale)
    : n_(n), rank_(rank), space_(std::move(space)), order_(order), scale_(std::move(scale)) {}

template <class S>
Jet<S> TractorForm<S>::at(std::vector<int> idx) const {
  const int sign = sort_sign(idx);
  if (sign == 0) return Jet<S>(space_, order_);
  auto it = comps_.find(idx);
  if (it == comps_.end()) return Jet<S>(space_, order_);
  return sign > 0 ? it->second : -it->second;
}

template <class S>
void TractorForm<S>::set(std::vector<int> idx, const Jet<S>& value) {
  if (static_cast<int>(idx.size()) != rank_) throw Error(ErrorCode::SlotMismatch, "tractor index count differs from rank");
  const int sign = sort_sign(idx);
  if (sign == 0) throw Error(ErrorCode::SymmetryViolation, "repeated index in an alternating tractor");
  const Jet<S> v = cut(value, order_);
  if (v.order() != order_) throw Error(ErrorCode::OrderExhausted, "tractor component is shorter than the form");
  if (v.is_zero()) {
    comps_.erase(idx);
  } else {
    comps_[idx] = sign > 0 ? v : -v;
  }
}

template <class S>
bool TractorForm<S>::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

template <class S>
double TractorForm<S>::magnitude() const {
  double m = 0.0;
  for (const auto& [k, v] : comps_) m = std::max(m, v.magnitude());
  return m;
}

template <class S>
TractorForm<S> TractorForm<S>::truncated(int o) const {
  TractorForm r(n_, rank_, space_, std::min(o, order_), scale_);
  for (const auto& [k, v] : comps_) r.comps_[k] = cut(v, r.order_);
  return r;
}

template <class S>
TractorForm<S> TractorForm<S>::operator-(const TractorForm& o) const {
  require_same_scale<S>(scale_, o.scale_);
  if (n_ != o.n_ || rank_ != o.rank_) throw Error(ErrorCode::SlotMismatch, "tractor forms of different shape");
  const int ord = std::min(order_, o.order_);
  TractorForm r = truncated(ord);
  for (const auto& [k, v] : o.comps_) {
    auto it = r.comps_.find(k);
    if (it == r.comps_.end()) {
      r.comps_[k] = -cut(v, ord);
    } else {
      it->second -= cut(v, ord);
    }
  }
  return r;
}

template <class S>
TractorForm<S> TractorForm<S>::scaled(const Rational& q) const {
  TractorForm r = *this;
  for (auto& [k, v] : r.comps_) v = v.scaled(q);
  return r;
}

template <class S>
TractorForm<S> to_form(const TractorVector<S>& v) {
  const int n = v.mu.dim();
  TractorForm<S> f(n, 1, v.mu.space(), v.order(), v.scale);
  f.set({0}, v.sigma);
  for (int b = 0; b < n; ++b) f.set({1 + b}, v.mu(b));
  f.set({n + 1}, v.rho);
  return f;
}

template <class S>
TractorForm<S> to_form(const TractorThreeForm<S>& t) {
  const int n = t.sigma.dim();
  const int ord = std::min({t.sigma.order(), t.nu.order(), t.phi.order(), t.rho.order()});
  TractorForm<S> f(n, 3, t.sigma.space(), ord, t.scale);
  const int X = n + 1;
  for (int b = 0; b < n; ++b) {
    for (int c = b + 1; c < n; ++c) {
      f.set({0, 1 + b, 1 + c}, t.sigma(b, c));
      f.set({1 + b, 1 + c, X}, -t.rho(b, c));
      for (int a = c + 1; a < n; ++a) f.set({1 + b, 1 + c, 1 + a}, t.nu(b, c, a));
    }
    f.set({0, 1 + b, X}, t.phi(b).scaled(Rational(1, 2)));
  }
  return f;
}

template <class S>
TractorForm<S> x_tractor(int n, const JetSpacePtr& space, int order, const std::string& scale) {
  TractorForm<S> f(n, 1, space, order, scale);
  f.set({n + 1}, Jet<S>::constant(space, order, Rational(1)));
  return f;
}

template <class S>
TractorForm<S> wedge(const TractorForm<S>& a, const TractorForm<S>& b) {
  require_same_scale<S>(a.scale(), b.scale());
  const int p = a.rank();
  const int q = b.rank();
  const int ord = std::min(a.order(), b.order());
  TractorForm<S> r(a.n(), p + q, a.space(), ord, a.scale());
  const Rational norm(factorial(p) * factorial(q), factorial(p + q));
  for (const auto& target : combinations(a.size(), p + q)) {
    Jet<S> sum(a.space(), ord);
    for (const auto& pick : combinations(p + q, p)) {
      std::vector<int> left, right, order;
      std::vector<bool> used(static_cast<std::size_t>(p + q), false);
      for (int k : pick) {
        left.push_back(target[static_cast<std::size_t>(k)]);
        used[static_cast<std::size_t>(k)] = true;
        order.push_back(k);
      }
      for (int k = 0; k < p + q; ++k) {
        if (!used[static_cast<std::size_t>(k)]) {
          right.push_back(target[static_cast<std::size_t>(k)]);
          order.push_back(k);
        }
      }
      const Jet<S> av = cut(a.at(left), ord);
      if (av.is_zero()) continue;
      const Jet<S> bv = cut(b.at(right), ord);
      if (bv.is_zero()) continue;
      const int sign = sort_sign(order);
      if (sign > 0) {
        sum += av * bv;
      } else {
        sum -= av * bv;
      }
    }
    r.set(target, sum.scaled(norm));
  }
  return r;
}

template <class S>
TractorForm<S> interior(const TractorForm<S>& v, const TractorForm<S>& t, const MetricJet<S>& m) {
  require_same_scale<S>(v.scale(), t.scale());
  if (v.rank() != 1 || t.rank() < 1) throw Error(ErrorCode::SlotMismatch, "interior product needs a tractor and a form");
  const int ord = std::min({v.order(), t.order(), m.order()});
  const int N = t.size();
  const auto G = gram(m, ord);
  std::vector<Jet<S>> vu;
  for (int A = 0; A < N; ++A) {
    Jet<S> s(t.space(), ord);
    for (int B = 0; B < N; ++B) s += G[static_cast<std::size_t>(A)][static_cast<std::size_t>(B)] * cut(v.at({B}), ord);
    vu.push_back(s);
  }
  TractorForm<S> r(t.n(), t.rank() - 1, t.space(), ord, t.scale());
  for (const auto& rest : combinations(N, t.rank() - 1)) {
    Jet<S> s(t.space(), ord);
    for (int A = 0; A < N; ++A) {
      if (vu[static_cast<std::size_t>(A)].is_zero()) continue;
      std::vector<int> idx{A};
      idx.insert(idx.end(), rest.begin(), rest.end());
      s += vu[static_cast<std::size_t>(A)] * cut(t.at(idx), ord);
    }
    r.set(rest, s);
  }
  return r;
}

template <class S>
Jet<S> h_norm(const TractorForm<S>& t, const MetricJet<S>& m) {
  const int ord = std::min(t.order(), m.order());
  const int N = t.size();
  const int r = t.rank();
  const auto G = gram(m, ord);
  const std::size_t total = Tensor<S>::power(N, r);
  std::vector<Jet<S>> low(total, Jet<S>(t.space(), ord));
  std::size_t f = 0;
  for_each_index(N, r, [&](std::span<const int> idx) {
    low[f++] = cut(t.at(std::vector<int>(idx.begin(), idx.end())), ord);
  });
  std::vector<Jet<S>> high = low;
  std::size_t stride = total;
  for (int slot = 0; slot < r; ++slot) {
    stride /= static_cast<std::size_t>(N);
    std::vector<Jet<S>> next(total, Jet<S>(t.space(), ord));
    for (std::size_t i = 0; i < total; ++i) {
      const std::size_t A = (i / stride) % static_cast<std::size_t>(N);
      const std::size_t base = i - A * stride;
      for (std::size_t B = 0; B < static_cast<std::size_t>(N); ++B) {
        const auto& gab = G[A][B];
        if (gab.is_zero()) continue;
        const auto& src = high[base + B * stride];
        if (src.is_zero()) continue;
        next[i] += gab * src;
      }
    }
    high = std::move(next);
  }
  Jet<S> sum(t.space(), ord);
  for (std::size_t i = 0; i < total; ++i) {
    if (!low[i].is_zero() && !high[i].is_zero()) sum += low[i] * high[i];
  }
  return sum;
}

template <class S>
TractorVector<S> splitting_D(const Density<S>& sigma, const CurvaturePack<S>& pack, const MetricJet<S>& m,
                             const std::string& scale) {
  if (sigma.weight != 1) throw Error(ErrorCode::SlotMismatch, "D acts on densities of weight one");
  if (sigma.value.order() < 2) throw Error(ErrorCode::OrderExhausted, "D needs the 2-jet of the density");
  const int n = m.dim();
  const auto grad = gradient(sigma.value);
  const auto hess = covariant_derivative(grad, pack.gamma);
  const auto lap = scalar_of(contract(raise(hess, 0, m), 0, 1));
  const int o = std::min(lap.order(), pack.schouten_trace.order());
  const auto rho = (cut(lap, o) + cut(pack.schouten_trace, o) * cut(sigma.value, o)).scaled(Rational(-1, n));
  return {scale, sigma.value, grad, rho};
}

template <class S>
Jet<S> tractor_metric(const TractorVector<S>& v, const TractorVector<S>& w, const MetricJet<S>& m) {
  require_same_scale<S>(v.scale, w.scale);
  const int o = std::min({v.order(), w.order(), m.order()});
  const auto vt = v.truncated(o);
  const auto wt = w.truncated(o);
  const auto mm = scalar_of(contract(outer(vt.mu, raise(wt.mu, 0, m.truncated(o))), 0, 1));
  return vt.sigma * wt.rho + vt.rho * wt.sigma + cut(mm, o);
}

template <class S>
TractorDerivative<S> tractor_connection(const TractorVector<S>& v, const CurvaturePack<S>& pack,
                                        const MetricJet<S>& m) {
  const auto& P = pack.schouten;
  TractorDerivative<S> d;
  d.scale = v.scale;
  d.sigma = gradient(v.sigma) - v.mu;
  d.mu = covariant_derivative(v.mu, pack.gamma) + times(P, v.sigma) + times(m.g(), v.rho);
  d.rho = gradient(v.rho) - contract(outer(P, raise(v.mu, 0, m)), 1, 2);
  return d;
}

namespace {

// Row A of the change-of-scale matrix: pairs (column, entry).
template <class S>
std::vector<std::vector<std::pair<int, Jet<S>>>> scale_matrix(const Jet<S>& Omega, const MetricJet<S>& m, int ord) {
  const int n = m.dim();
  const Jet<S> Om = cut(Omega, ord + 1);
  const Tensor<S> ups = times(gradient(Om), Om.truncated(ord).inverse());
  const Tensor<S> upsu = raise(ups, 0, m.truncated(ord));
  const Jet<S> O = Om.truncated(ord);
  const Jet<S> Oi = O.inverse();
  const Jet<S> u2 = scalar_of(contract(outer(ups, upsu), 0, 1));
  std::vector<std::vector<std::pair<int, Jet<S>>>> M(static_cast<std::size_t>(n + 2));
  M[0].push_back({0, O});
  for (int b = 0; b < n; ++b) {
    M[static_cast<std::size_t>(1 + b)].push_back({1 + b, O});
    M[static_cast<std::size_t>(1 + b)].push_back({0, O * ups(b)});
  }
  auto& last = M[static_cast<std::size_t>(n + 1)];
  last.push_back({n + 1, Oi});
  for (int b = 0; b < n; ++b) last.push_back({1 + b, -(Oi * upsu(b))});
  last.push_back({0, (Oi * u2).scaled(Rational(-1, 2))});
  return M;
}

}  // namespace

template <class S>
TractorVector<S> change_of_scale(const TractorVector<S>& v, const Jet<S>& Omega, const MetricJet<S>& m,
                                 const std::string& new_scale) {
  const int ord = std::min({v.order(), Omega.order() - 1, m.order()});
  auto f = change_of_scale(to_form(v.truncated(ord)), Omega, m, new_scale);
  const int n = m.dim();
  TractorVector<S> r;
  r.scale = new_scale;
  r.sigma = f.at({0});
  r.mu = Tensor<S>::generate(m.space(), down(1), f.order(), [&](std::span<const int> i) { return f.at({1 + i[0]}); });
  r.rho = f.at({n + 1});
  return r;
}

template <class S>
TractorForm<S> change_of_scale(const TractorForm<S>& f, const Jet<S>& Omega, const MetricJet<S>& m,
                               const std::string& new_scale) {
  const int ord = std::min({f.order(), Omega.order() - 1, m.order()});
  if (ord < 0) throw Error(ErrorCode::OrderExhausted, "change of scale needs the 1-jet of the conformal factor");
  const auto M = scale_matrix(Omega, m, ord);
  const int N = f.size();
  const int r = f.rank();
  TractorForm<S> out(f.n(), r, f.space(), ord, new_scale);
  for (const auto& target : combinations(N, r)) {
    Jet<S> sum(f.space(), ord);
    std::vector<int> src(static_cast<std::size_t>(r));
    auto rec = [&](auto&& self, int k, const Jet<S>& coef) -> void {
      if (k == r) {
        const Jet<S> val = f.at(src);
        if (!val.is_zero()) sum += coef * cut(val, ord);
        return;
      }
      for (const auto& [col, entry] : M[static_cast<std::size_t>(target[static_cast<std::size_t>(k)])]) {
        if (entry.is_zero()) continue;
        src[static_cast<std::size_t>(k)] = col;
        self(self, k + 1, coef * entry);
      }
    };
    rec(rec, 0, Jet<S>::constant(f.space(), ord, Rational(1)));
    out.set(target, sum);
  }
  return out;
}

template <class S>
Tensor<S> ky_residual(const Tensor<S>& s, const MetricJet<S>& m) {
  const int n = m.dim();
  const auto ds = covariant_derivative(s, christoffel(m));
  const auto div = contract(raise(ds, 0, m), 0, 1);  // nabla^b s_bc
  return ds - alternate(ds, {0, 1, 2}) - alternate(outer(m.g(), div), {1, 2}).scaled(Rational(2, n - 1));
}

template <class S>
TractorThreeForm<S> L_split(const Tensor<S>& s, const CurvaturePack<S>& pack, const MetricJet<S>& m,
                            const std::string& scale) {
  const int n = m.dim();
  const auto ds = covariant_derivative(s, pack.gamma);
  const auto div = contract(raise(ds, 0, m), 0, 1);
  const auto ky = ds - alternate(ds, {0, 1, 2}) - alternate(outer(m.g(), div), {1, 2}).scaled(Rational(2, n - 1));
  const auto dky = contract(raise(covariant_derivative(ky, pack.gamma), 0, m), 0, 1);  // nabla^p KY_pbc
  const auto ddiv = covariant_derivative(div, pack.gamma);
  const auto Ps = contract(outer(raise(pack.schouten, 1, m), s), 1, 2);  // P_b^p s_pc
  TractorThreeForm<S> t;
  t.scale = scale;
  t.sigma = s;
  t.nu = alternate(ds, {0, 1, 2});
  t.phi = div.scaled(Rational(2, n - 1));
  t.rho = alternate(dky.scaled(Rational(1, 2 * n)) - ddiv.scaled(Rational(1, n - 1)) - Ps, {0, 1});
  return t;
}

template <class S>
TractorThreeForm<S> psi_to_phi(const ProlongationSection<S>& psi, const std::string& scale) {
  return {scale, psi.omega, psi.mu, psi.K.scaled(2), -psi.Sigma};
}

template <class S>
Density<S> scale_of_form(const Tensor<S>& omega, const MetricJet<S>& m) {
  const auto n2 = form_norm2(omega, m);
  if (!ScalarTraits<S>::is_positive_constant(n2.constant_term())) {
    throw Error(ErrorCode::DegenerateOmega, "|w|^2 is not positive at the point");
  }
  return {n2.scaled(form_length_factor(m.dim())).sqrt(), 1};
}

template <class S>
KahlerCharacterisation<S> kahler_characterisation_check(const Tensor<S>& omega, const CurvaturePack<S>& pack,
                                                        const MetricJet<S>& m, std::optional<Density<S>> sigma,
                                                        double eps) {
  KahlerCharacterisation<S> k;
  k.sigma = sigma ? *sigma : scale_of_form(omega, m);
  const double scale = omega.magnitude();
  const auto ww = contract(outer(raise(omega, 1, m), omega), 1, 2);  // w_a^c w_cb
  k.herm = ww + times(m.g(), k.sigma.value * k.sigma.value);
  k.I = splitting_D(k.sigma, pack, m);
  k.phi = L_split(omega, pack, m);
  k.ky = ky_residual(omega, m);
  const auto If = to_form(k.I);
  const auto Pf = to_form(k.phi);
  const int ord = std::min(If.order(), Pf.order());
  const auto X = x_tractor<S>(m.dim(), m.space(), ord);
  k.x_i_phi = wedge(wedge(X, If.truncated(ord)), Pf.truncated(ord));
  k.x_i_phi_inner = interior(If.truncated(ord), interior(X, Pf.truncated(ord), m), m);
  k.phi_norm = h_norm(Pf, m);

  auto form_zero = [&](const TractorForm<S>& f) {
    if constexpr (ScalarTraits<S>::exact) {
      return f.is_zero();
    } else {
      return f.magnitude() <= eps * std::max(1.0, scale);
    }
  };
  k.herm_zero = vanishes(k.herm, scale * scale, eps);
  k.wedge_zero = form_zero(k.x_i_phi);
  k.inner_zero = form_zero(k.x_i_phi_inner);
  k.ky_zero = vanishes(k.ky, scale, eps);
  return k;
}

template <class S>
EinsteinVariants<S> einstein_variants_check(const Tensor<S>& omega, const CurvaturePack<S>& pack,
                                            const MetricJet<S>& m, std::optional<Density<S>> sigma, double eps) {
  EinsteinVariants<S> e;
  e.kahler = kahler_characterisation_check(omega, pack, m, sigma, eps);
  e.I_derivative = tractor_connection(e.kahler.I, pack, m);
  e.I_norm = tractor_metric(e.kahler.I, e.kahler.I, m);
  const auto If = to_form(e.kahler.I);
  const auto Pf = to_form(e.kahler.phi);
  const int ord = std::min(If.order(), Pf.order());
  e.i_phi = wedge(If.truncated(ord), Pf.truncated(ord));
  const double scale = omega.magnitude();
  if constexpr (ScalarTraits<S>::exact) {
    e.parallel = e.I_derivative.is_zero();
    e.i_phi_zero = e.i_phi.is_zero();
  } else {
    e.parallel = e.I_derivative.magnitude() <= eps * std::max(1.0, scale);
    e.i_phi_zero = e.i_phi.magnitude() <= eps * std::max(1.0, scale);
  }
  e.null = zero_jet(e.I_norm, scale, eps);
  return e;
}

#define CKAHLER_INSTANTIATE(S)                                                                                    \
  template struct Density<S>;                                                                                     \
  template struct TractorVector<S>;                                                                               \
  template struct TractorDerivative<S>;                                                                           \
  template class TractorForm<S>;                                                                                  \
  template TractorForm<S> to_form(const TractorVector<S>&);                                                       \
  template TractorForm<S> to_form(const TractorThreeForm<S>&);                                                    \
  template TractorForm<S> x_tractor(int, const JetSpacePtr&, int, const std::string&);                            \
  template TractorForm<S> wedge(const TractorForm<S>&, const TractorForm<S>&);                                    \
  template TractorForm<S> interior(const TractorForm<S>&, const TractorForm<S>&, const MetricJet<S>&);            \
  template Jet<S> h_norm(const TractorForm<S>&, const MetricJet<S>&);                                             \
  template TractorVector<S> splitting_D(const Density<S>&, const CurvaturePack<S>&, const MetricJet<S>&,         \
                                        const std::string&);                                                      \
  template Jet<S> tractor_metric(const TractorVector<S>&, const TractorVector<S>&, const MetricJet<S>&);          \
  template TractorDerivative<S> tractor_connection(const TractorVector<S>&, const CurvaturePack<S>&,              \
                                                   const MetricJet<S>&);                                          \
  template TractorVector<S> change_of_scale(const TractorVector<S>&, const Jet<S>&, const MetricJet<S>&,         \
                                            const std::string&);                                                  \
  template TractorForm<S> change_of_scale(const TractorForm<S>&, const Jet<S>&, const MetricJet<S>&,             \
                                          const std::string&);                                                    \
  template Tensor<S> ky_residual(const Tensor<S>&, const MetricJet<S>&);                                          \
  template TractorThreeForm<S> L_split(const Tensor<S>&, const CurvaturePack<S>&, const MetricJet<S>&,           \
                                       const std::string&);                                                       \
  template TractorThreeForm<S> psi_to_phi(const ProlongationSection<S>&, const std::string&);                     \
  template Density<S> scale_of_form(const Tensor<S>&, const MetricJet<S>&);                                       \
  template KahlerCharacterisation<S> kahler_characterisation_check(const Tensor<S>&, const CurvaturePack<S>&,     \
                                                                   const MetricJet<S>&, std::optional<Density<S>>, \
                                                                   double);                                       \
  template EinsteinVariants<S> einstein_variants_check(const Tensor<S>&, const CurvaturePack<S>&,                 \
                                                       const MetricJet<S>&, std::optional<Density<S>>, double);

CKAHLER_INSTANTIATE(ParamPoly)
CKAHLER_INSTANTIATE(double)

#undef CKAHLER_INSTANTIATE

}  // namespace ckahler
