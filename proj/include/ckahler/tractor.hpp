#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ckahler/prolongation.hpp"

namespace ckahler {

/// sigma^2 = form_length_factor(n) * |w|^2. The scale of a two-form uses the
/// normalized length, the algebraic constraints the full contraction |w|^2.
inline Rational form_length_factor(int n) { return Rational(1, n); }

/// A density of the given weight, represented in the working scale.
template <class S>
struct Density {
  Jet<S> value;
  int weight = 0;

  /// Representative in the scale Omega^2 g: value * Omega^weight.
  Density rescaled(const Jet<S>& Omega) const;
};

/// Standard tractor in a scale: V = sigma Y + mu_b Z^b + rho X with
/// h(V, V) = 2 sigma rho + g^bc mu_b mu_c.
template <class S>
struct TractorVector {
  std::string scale = "g";
  Jet<S> sigma;  // weight 1
  Tensor<S> mu;  // one-form, weight 1
  Jet<S> rho;    // weight -1

  int order() const;
  TractorVector truncated(int order) const;
};

/// Normal tractor connection applied to V, one entry per direction a.
template <class S>
struct TractorDerivative {
  std::string scale = "g";
  Tensor<S> sigma;  // (a)    nabla_a sigma - mu_a
  Tensor<S> mu;     // (a, b) nabla_a mu_b + P_ab sigma + g_ab rho
  Tensor<S> rho;    // (a)    nabla_a rho - P_ab mu^b

  bool is_zero() const { return sigma.is_zero() && mu.is_zero() && rho.is_zero(); }
  double magnitude() const { return std::max({sigma.magnitude(), mu.magnitude(), rho.magnitude()}); }
  TractorVector<S> direction(int a) const;
};

/// Tractor three-form in a scale, slots (sigma_bc; nu_abc, phi_c; rho_bc).
template <class S>
struct TractorThreeForm {
  std::string scale = "g";
  Tensor<S> sigma;  // two-form, weight 3
  Tensor<S> nu;     // three-form, weight 3
  Tensor<S> phi;    // one-form, weight 1
  Tensor<S> rho;    // two-form, weight 1
};

/// Alternating tractor tensor with lower indices in the frame
/// (Y, Z^1..Z^n, X); slot 0 is Y, slot 1+b is Z^b, slot n+1 is X.
/// Only strictly increasing index tuples are stored.
template <class S>
class TractorForm {
 public:
  TractorForm() = default;
  TractorForm(int n, int rank, JetSpacePtr space, int order, std::string scale);

  int n() const { return n_; }
  int size() const { return n_ + 2; }
  int rank() const { return rank_; }
  int order() const { return order_; }
  const JetSpacePtr& space() const { return space_; }
  const std::string& scale() const { return scale_; }
  const std::map<std::vector<int>, Jet<S>>& components() const { return comps_; }

  static int Y() { return 0; }
  static int Z(int b) { return 1 + b; }
  int X() const { return n_ + 1; }

  /// Any index tuple; repeated indices give zero.
  Jet<S> at(std::vector<int> idx) const;
  /// Sets the component and, implicitly, all its permutations.
  void set(std::vector<int> idx, const Jet<S>& value);

  bool is_zero() const;
  double magnitude() const;
  TractorForm truncated(int order) const;
  TractorForm operator-(const TractorForm& o) const;
  TractorForm scaled(const Rational& r) const;

 private:
  int n_ = 0;
  int rank_ = 0;
  JetSpacePtr space_;
  int order_ = 0;
  std::string scale_;
  std::map<std::vector<int>, Jet<S>> comps_;
};

template <class S>
TractorForm<S> to_form(const TractorVector<S>& v);

/// Components: [Y Z^b Z^c] = sigma_bc, [Z^a Z^b Z^c] = nu_abc,
/// [Y Z^c X] = phi_c / 2, [Z^b Z^c X] = -rho_bc. The slots are only
/// meaningful up to these factors; the normalization is the one under
/// which change_of_scale and re-derivation in the new scale agree.
template <class S>
TractorForm<S> to_form(const TractorThreeForm<S>& f);

template <class S>
TractorForm<S> x_tractor(int n, const JetSpacePtr& space, int order, const std::string& scale = "g");

/// Normalized antisymmetrization of the tensor product.
template <class S>
TractorForm<S> wedge(const TractorForm<S>& a, const TractorForm<S>& b);
/// v^A T_A...
template <class S>
TractorForm<S> interior(const TractorForm<S>& v, const TractorForm<S>& t, const MetricJet<S>& m);
/// T^{A...} T_{A...} summed over all index tuples.
template <class S>
Jet<S> h_norm(const TractorForm<S>& t, const MetricJet<S>& m);

/// I = D sigma = (sigma, nabla sigma, -(1/n)(Laplacian sigma + J sigma)).
/// Needs the 2-jet of sigma; the density must have weight 1.
template <class S>
TractorVector<S> splitting_D(const Density<S>& sigma, const CurvaturePack<S>& pack, const MetricJet<S>& m,
                             const std::string& scale = "g");

/// h(V, W). Throws ScaleMismatch when the scale tags differ.
template <class S>
Jet<S> tractor_metric(const TractorVector<S>& v, const TractorVector<S>& w, const MetricJet<S>& m);

template <class S>
TractorDerivative<S> tractor_connection(const TractorVector<S>& v, const CurvaturePack<S>& pack,
                                        const MetricJet<S>& m);

/// The same tractors in the scale Omega^2 g: sigma' = Omega sigma,
/// mu'_b = Omega (mu_b + Upsilon_b sigma),
/// rho' = Omega^-1 (rho - Upsilon^b mu_b - |Upsilon|^2 sigma / 2), applied to
/// every tractor index.
template <class S>
TractorVector<S> change_of_scale(const TractorVector<S>& v, const Jet<S>& Omega, const MetricJet<S>& m,
                                 const std::string& new_scale);
template <class S>
TractorForm<S> change_of_scale(const TractorForm<S>& f, const Jet<S>& Omega, const MetricJet<S>& m,
                               const std::string& new_scale);

/// nabla_a s_bc - nabla_[a s_bc] + (2/(n-1)) g_a[b nabla^p s_c]p
template <class S>
Tensor<S> ky_residual(const Tensor<S>& s, const MetricJet<S>& m);

/// (s; nabla_[a s_bc], (2/(n-1)) nabla^b s_bc;
///  skew_bc[(1/(2n)) nabla^p KY(s)_pbc - (1/(n-1)) nabla_b nabla^p s_pc - P_b^p s_pc]).
template <class S>
TractorThreeForm<S> L_split(const Tensor<S>& s, const CurvaturePack<S>& pack, const MetricJet<S>& m,
                            const std::string& scale = "g");

/// (w; mu, 2K; -Sigma)
template <class S>
TractorThreeForm<S> psi_to_phi(const ProlongationSection<S>& psi, const std::string& scale = "g");

/// sigma = sqrt(|w|^2 / n) as a weight-1 density. Throws
/// NonPerfectSquareConstantTerm in the exact backend when the constant term
/// has no rational root.
template <class S>
Density<S> scale_of_form(const Tensor<S>& omega, const MetricJet<S>& m);

template <class S>
struct KahlerCharacterisation {
  Density<S> sigma;
  TractorVector<S> I;
  TractorThreeForm<S> phi;
  Tensor<S> herm;                // w_a^c w_cb + sigma^2 g_ab
  TractorForm<S> x_i_phi;        // X ^ I ^ Phi
  TractorForm<S> x_i_phi_inner;  // X^A I^B Phi_ABC
  Jet<S> phi_norm;               // Phi^ABC Phi_ABC
  Tensor<S> ky;                  // KY(w)

  bool herm_zero = false;
  bool wedge_zero = false;
  bool inner_zero = false;
  bool ky_zero = false;
  bool holds() const { return herm_zero && wedge_zero && inner_zero; }
};

/// Pass `sigma` to bypass the square root of |w|^2 / n.
template <class S>
KahlerCharacterisation<S> kahler_characterisation_check(const Tensor<S>& omega, const CurvaturePack<S>& pack,
                                                        const MetricJet<S>& m,
                                                        std::optional<Density<S>> sigma = std::nullopt,
                                                        double eps = 1e-9);

template <class S>
struct EinsteinVariants {
  KahlerCharacterisation<S> kahler;
  TractorDerivative<S> I_derivative;  // nabla^T I
  Jet<S> I_norm;                      // h(I, I)
  TractorForm<S> i_phi;               // I ^ Phi

  bool parallel = false;
  bool null = false;
  bool i_phi_zero = false;
  bool kahler_einstein() const { return kahler.holds() && parallel; }
  bool ricci_flat_kahler() const { return kahler.herm_zero && parallel && null && i_phi_zero; }
};

template <class S>
EinsteinVariants<S> einstein_variants_check(const Tensor<S>& omega, const CurvaturePack<S>& pack,
                                            const MetricJet<S>& m, std::optional<Density<S>> sigma = std::nullopt,
                                            double eps = 1e-9);

}  // namespace ckahler
