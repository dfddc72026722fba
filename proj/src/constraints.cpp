#include "ckahler/constraints.hpp"

#include <Eigen/SVD>

namespace ckahler {

namespace {

template <class S>
Jet<S> scalar_of(const Tensor<S>& t) {
  return t.components().front();
}

// w^ab
template <class S>
Tensor<S> raised_form(const Tensor<S>& omega, const MetricJet<S>& m) {
  return raise(raise(omega, 0, m), 1, m);
}

// v_c = K_d w^d_c
template <class S>
Tensor<S> k_dot_form(const Tensor<S>& omega, const Tensor<S>& K, const MetricJet<S>& m) {
  return contract(outer(K, raise(omega, 0, m)), 0, 1);
}

template <class S>
Jet<S> inverse_norm2(const Jet<S>& n2) {
  if (ScalarTraits<S>::is_zero(n2.constant_term())) {
    throw Error(ErrorCode::DegenerateOmega, "|omega|^2 vanishes at the point");
  }
  return n2.inverse();
}

}  // namespace

template <class S>
Jet<S> form_norm2(const Tensor<S>& omega, const MetricJet<S>& m) {
  return scalar_of(contract(contract(outer(omega, raised_form(omega, m)), 0, 2), 0, 1));
}

template <class S>
Tensor<S> mu_from_omega_K(const Tensor<S>& omega_in, const Tensor<S>& K_in, const MetricJet<S>& m_in) {
  const int ord = std::min({omega_in.order(), K_in.order(), m_in.order()});
  const auto omega = omega_in.truncated(ord);
  const auto K = K_in.truncated(ord);
  const auto m = m_in.truncated(ord);
  const int n = m.dim();
  const auto inv = inverse_norm2(form_norm2(omega, m));
  return alternate(outer(omega, k_dot_form(omega, K, m)), {0, 1, 2}).multiplied(inv).scaled(-3 * n);
}

template <class S>
Tensor<S> sigma_from_omega_K(const Tensor<S>& omega_in, const Tensor<S>& K_in, const Tensor<S>& weyl_in,
                             const MetricJet<S>& m_in) {
  const int n = m_in.dim();
  if (n == 4) {
    throw Error(ErrorCode::DimensionFour,
                "Sigma is not determined by omega and K in dimension four; this relation holds identically there");
  }
  const int ord = std::min({omega_in.order(), K_in.order(), weyl_in.order(), m_in.order()});
  const auto omega = omega_in.truncated(ord);
  const auto K = K_in.truncated(ord);
  const auto weyl = weyl_in.truncated(ord);
  const auto m = m_in.truncated(ord);
  const auto inv = inverse_norm2(form_norm2(omega, m));
  const auto wu = raised_form(omega, m);
  const auto Cw = contract(contract(outer(wu, weyl), 0, 2), 0, 1);  // C_cdab w^cd
  const auto Cww = scalar_of(contract(contract(outer(wu, Cw), 0, 2), 0, 1));
  const auto K2 = scalar_of(contract(outer(K, raise(K, 0, m)), 0, 1));
  const Jet<S> coeff = (K2.scaled(Rational(n, 2)) + Cww.scaled(Rational(n, 4 * (n - 2) * (n - 4)))) * inv;
  const auto KvK = alternate(outer(K, k_dot_form(omega, K, m)), {0, 1});  // K_c w^c_[b K_a]
  return -omega.multiplied(coeff) + Cw.scaled(Rational(1, 2 * (n - 4))) + KvK.multiplied(inv).scaled(2 * n);
}

template <class S>
Tensor<S> upsilon_from_omega(const Tensor<S>& omega, const MetricJet<S>& m) {
  const auto n2 = form_norm2(omega, m);
  if (n2.order() < 1) throw Error(ErrorCode::OrderExhausted, "Upsilon needs the 1-jet of |omega|^2");
  const auto inv = inverse_norm2(n2).truncated(n2.order() - 1);
  return Tensor<S>::generate(m.space(), down(1), n2.order() - 1, [&](std::span<const int> i) {
    return (n2.partial(i[0]) * inv).scaled(Rational(-1, 2));
  });
}

template <class S>
bool ConstraintReport<S>::all_zero() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const auto& r) { return r.zero; });
}

template <class S>
const NamedResidual<S>* ConstraintReport<S>::find(const std::string& name) const {
  for (const auto& r : residuals) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

template <class S>
std::vector<std::string> ConstraintReport<S>::failed() const {
  std::vector<std::string> out;
  for (const auto& r : residuals) {
    if (!r.zero) out.push_back(r.name);
  }
  return out;
}

template <class S>
ConstraintReport<S> q_residuals(const ProlongationSection<S>& psi_in, const CurvaturePack<S>& pack,
                                const MetricJet<S>& m_in, double eps) {
  const int ord = std::min({psi_in.omega.order(), psi_in.K.order(), psi_in.mu.order(),
                                   psi_in.Sigma.order(), m_in.order()});
  const MetricJet<S> m = m_in.truncated(ord);
  const auto w = psi_in.omega.truncated(ord);
  const auto K = psi_in.K.truncated(ord);
  const auto mu = psi_in.mu.truncated(ord);
  const auto Sigma = psi_in.Sigma.truncated(ord);
  const int n = m.dim();
  const auto n2 = form_norm2(w, m);
  (void)inverse_norm2(n2);
  const double scale = std::max({w.magnitude(), K.magnitude(), mu.magnitude(), Sigma.magnitude()});

  ConstraintReport<S> rep;
  auto add = [&](std::string name, std::string eq, Tensor<S> value) {
    const bool z = vanishes(value, scale * scale * scale, eps);
    rep.residuals.push_back({std::move(name), std::move(eq), std::move(value), z});
  };

  const auto wmix = raise(w, 1, m);  // w_a^b
  add("complex_structure", "w_a^b w_bc + (1/n)|w|^2 g_ac = 0",
      contract(outer(wmix, w), 1, 2) + m.g().multiplied(n2).scaled(Rational(1, n)));
  add("mu_from_K", "mu_abc + (3n/|w|^2) w_[ab w^d_c] K_d = 0", mu - mu_from_omega_K(w, K, m));
  if (n == 4) {
    rep.notice = "sigma_formula skipped: in dimension four Sigma is not fixed by omega and K";
  } else {
    add("sigma_formula", "Sigma_ab = sigma(w, K, C)", Sigma - sigma_from_omega_K(w, K, pack.weyl, m));
  }
  const auto wu = raised_form(w, m);
  const auto mw = contract(contract(outer(mu, wu), 1, 3), 1, 2);  // mu_apq w^pq
  add("mu_pure_trace", "|w|^2 mu_abc - (3n/(n-2)) w_[bc mu_a]pq w^pq = 0",
      mu.multiplied(n2) - alternate(outer(w, mw), {0, 1, 2}).scaled(Rational(3 * n, n - 2)));
  add("K_mu_trace", "(n-2) K_c w^c_a + w^bc mu_abc = 0",
      k_dot_form(w, K, m).scaled(n - 2) + mw);
  add("mu_K_transverse", "mu_abc K^c = 0", contract(outer(mu, raise(K, 0, m)), 2, 3));
  const auto wS = contract(outer(raise(w, 0, m), Sigma), 0, 3);  // w^a_b Sigma_ca as (b, c)
  add("sigma_hermitian", "w^a_[b Sigma_c]a = 0", alternate(wS, {0, 1}));
  if (ord >= 1) {
    const auto U = raise(upsilon_from_omega(w, m), 0, m.truncated(ord - 1));
    add("K_from_upsilon", "K_a = w_ab Upsilon^b", K - contract(outer(w, U), 1, 2));
  }
  return rep;
}

namespace {

struct FiberLayout {
  int n;
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::array<int, 3>> triples;

  explicit FiberLayout(int dim) : n(dim) {
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) pairs.push_back({a, b});
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int c = b + 1; c < n; ++c) triples.push_back({a, b, c});
  }
  std::size_t size() const { return 2 * pairs.size() + static_cast<std::size_t>(n) + triples.size(); }
};

int parity(std::array<int, 3> v) {
  int s = 1;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(j)]) s = -s;
  return s;
}

Eigen::VectorXd pack_section(const ProlongationSection<double>& p, const FiberLayout& L) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(L.size()));
  Eigen::Index k = 0;
  for (auto [a, b] : L.pairs) x[k++] = p.omega(a, b).constant_term();
  for (int a = 0; a < L.n; ++a) x[k++] = p.K(a).constant_term();
  for (auto t : L.triples) x[k++] = p.mu(t[0], t[1], t[2]).constant_term();
  for (auto [a, b] : L.pairs) x[k++] = p.Sigma(a, b).constant_term();
  return x;
}

ProlongationSection<double> unpack_section(const Eigen::VectorXd& x, const FiberLayout& L, const JetSpacePtr& s) {
  const int n = L.n;
  std::vector<double> w(static_cast<std::size_t>(n * n), 0.0), S(w), mu(static_cast<std::size_t>(n * n * n), 0.0);
  Eigen::Index k = 0;
  for (auto [a, b] : L.pairs) {
    w[static_cast<std::size_t>(a * n + b)] = x[k];
    w[static_cast<std::size_t>(b * n + a)] = -x[k++];
  }
  std::vector<double> K(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) K[static_cast<std::size_t>(a)] = x[k++];
  for (auto t : L.triples) {
    std::array<int, 3> p = t;
    std::sort(p.begin(), p.end());
    do {
      mu[static_cast<std::size_t>((p[0] * n + p[1]) * n + p[2])] = parity(p) * x[k];
    } while (std::next_permutation(p.begin(), p.end()));
    ++k;
  }
  for (auto [a, b] : L.pairs) {
    S[static_cast<std::size_t>(a * n + b)] = x[k];
    S[static_cast<std::size_t>(b * n + a)] = -x[k++];
  }
  auto make = [&](const std::vector<double>& v, int rank) {
    return Tensor<double>::generate(s, down(rank), 0, [&](std::span<const int> i) {
      std::size_t f = 0;
      for (int j : i) f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
      return Jet<double>::constant(s, 0, v[f]);
    });
  };
  return {make(w, 2), make(K, 1), make(mu, 3), make(S, 2)};
}

Eigen::VectorXd core_map(const Eigen::VectorXd& x, const FiberLayout& L, const Tensor<double>& weyl,
                         const MetricJet<double>& m) {
  const auto p = unpack_section(x, L, m.space());
  const int n = L.n;
  const auto n2 = form_norm2(p.omega, m);
  const auto alg1 = contract(outer(raise(p.omega, 1, m), p.omega), 1, 2) + m.g().multiplied(n2).scaled(Rational(1, n));
  const auto muK = p.mu - mu_from_omega_K(p.omega, p.K, m);
  const auto sig = p.Sigma - sigma_from_omega_K(p.omega, p.K, weyl, m);
  std::vector<double> out;
  for (const auto* t : {&alg1, &muK, &sig}) {
    for (const auto& c : t->components()) out.push_back(c.constant_term());
  }
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

}  // namespace

VarietyEstimate variety_dimension_estimate(const ProlongationSection<double>& sample,
                                           const CurvaturePack<double>& pack, const MetricJet<double>& m_in,
                                           double step, double cutoff, double tolerance) {
  const int n = m_in.dim();
  const MetricJet<double> m = m_in.truncated(0);
  const auto weyl = pack.weyl.truncated(0);
  const FiberLayout L(n);
  const Eigen::VectorXd x0 = pack_section(
      {sample.omega.truncated(0), sample.K.truncated(0), sample.mu.truncated(0), sample.Sigma.truncated(0)}, L);
  const Eigen::VectorXd f0 = core_map(x0, L, weyl, m);
  const double xs = std::max(1.0, x0.cwiseAbs().maxCoeff());
  if (f0.cwiseAbs().maxCoeff() > tolerance * xs * xs) {
    throw Error(ErrorCode::SampleNotOnVariety,
                "sample misses the constraint system by " + std::to_string(f0.cwiseAbs().maxCoeff()));
  }
  Eigen::MatrixXd jac(f0.size(), x0.size());
  for (Eigen::Index j = 0; j < x0.size(); ++j) {
    Eigen::VectorXd xp = x0, xm = x0;
    xp[j] += step;
    xm[j] -= step;
    jac.col(j) = (core_map(xp, L, weyl, m) - core_map(xm, L, weyl, m)) / (2 * step);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const auto& sv = svd.singularValues();
  VarietyEstimate est;
  est.fiber_dimension = L.size();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    est.singular_values.push_back(sv[i]);
    if (sv[i] > cutoff * smax) ++est.rank;
  }
  est.dimension = est.fiber_dimension - est.rank;
  est.bound = static_cast<std::size_t>((n * n + 2 * n + 4) / 4);
  est.rank_drop = est.dimension != est.bound;
  return est;
}

template struct ConstraintReport<ParamPoly>;
template struct ConstraintReport<double>;

#define CKAHLER_INSTANTIATE(S)                                                                                    \
  template Jet<S> form_norm2(const Tensor<S>&, const MetricJet<S>&);                                            \
  template Tensor<S> mu_from_omega_K(const Tensor<S>&, const Tensor<S>&, const MetricJet<S>&);                   \
  template Tensor<S> sigma_from_omega_K(const Tensor<S>&, const Tensor<S>&, const Tensor<S>&, const MetricJet<S>&); \
  template Tensor<S> upsilon_from_omega(const Tensor<S>&, const MetricJet<S>&);                                  \
  template ConstraintReport<S> q_residuals(const ProlongationSection<S>&, const CurvaturePack<S>&,                \
                                           const MetricJet<S>&, double);

CKAHLER_INSTANTIATE(ParamPoly)
CKAHLER_INSTANTIATE(double)

#undef CKAHLER_INSTANTIATE

}  // namespace ckahler
