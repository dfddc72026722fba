#include "ckahler/sampling.hpp"

#include <Eigen/Dense>

namespace ckahler {

namespace {

std::size_t at4(int n, int a, int b, int c, int d) {
  return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
}

// R_abcd = 1/2 (H_adbc + H_bcad - H_acbd - H_bdac), then the trace-free part.
std::vector<double> weyl_from_h(int n, const std::vector<double>& h) {
  const auto H = [&](int a, int b, int c, int d) { return h[at4(n, a, b, c, d)]; };
  std::vector<double> R(h.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          R[at4(n, a, b, c, d)] = 0.5 * (H(a, d, b, c) + H(b, c, a, d) - H(a, c, b, d) - H(b, d, a, c));
  std::vector<double> ric(static_cast<std::size_t>(n * n), 0.0);
  double scalar = 0.0;
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += R[at4(n, a, b, a, d)];
      ric[static_cast<std::size_t>(b * n + d)] = s;
      if (b == d) scalar += s;
    }
  const auto P = [&](int a, int b) {
    return (ric[static_cast<std::size_t>(a * n + b)] - (a == b ? scalar / (2.0 * (n - 1)) : 0.0)) / (n - 2);
  };
  const auto g = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  std::vector<double> C(R.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          C[at4(n, a, b, c, d)] = R[at4(n, a, b, c, d)] - (P(a, c) * g(b, d) - P(b, c) * g(a, d) +
                                                         P(b, d) * g(a, c) - P(a, d) * g(b, c));
  return C;
}

WeylAtPoint<double> wrap(int n, std::vector<double> c) {
  WeylAtPoint<double> w;
  w.n = n;
  w.mixed = c;
  w.down = std::move(c);
  return w;
}

// H with the pair symmetries from a parameter vector over (a<=b, c<=d).
std::vector<double> h_from_params(int n, const Eigen::VectorXd& p) {
  std::vector<double> h(static_cast<std::size_t>(n) * n * n * n, 0.0);
  Eigen::Index k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c; d < n; ++d, ++k) {
          h[at4(n, a, b, c, d)] = p(k);
          h[at4(n, b, a, c, d)] = p(k);
          h[at4(n, a, b, d, c)] = p(k);
          h[at4(n, b, a, d, c)] = p(k);
        }
  return h;
}

std::vector<double> residual(int n, const std::vector<double>& C, const Matrix<double>& w) {
  std::vector<double> out(C.size(), 0.0);
  const auto c = [&](int a, int b, int e, int d) { return C[at4(n, a, b, e, d)]; };
  const auto om = [&](int a, int b) { return w(static_cast<std::size_t>(a), static_cast<std::size_t>(b)); };
  for (int b = 0; b < n; ++b)
    for (int cc = 0; cc < n; ++cc)
      for (int a = 0; a < n; ++a)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int e = 0; e < n; ++e) {
            s += 0.5 * (c(b, cc, a, e) * om(d, e) - c(b, cc, d, e) * om(a, e));
            s += 0.5 * (c(a, d, b, e) * om(cc, e) - c(a, d, cc, e) * om(b, e));
          }
          out[at4(n, b, cc, a, d)] = s;
        }
  return out;
}

}  // namespace

WeylAtPoint<double> random_weyl(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const Eigen::Index p = static_cast<Eigen::Index>(n * (n + 1) / 2);
  Eigen::VectorXd v(p * p);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = g(rng);
  return wrap(n, weyl_from_h(n, h_from_params(n, v)));
}

Matrix<double> random_two_form(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const auto sn = static_cast<std::size_t>(n);
  Matrix<double> w(sn, sn);
  for (std::size_t i = 0; i < sn; ++i)
    for (std::size_t j = i + 1; j < sn; ++j) {
      w(i, j) = g(rng);
      w(j, i) = -w(i, j);
    }
  return w;
}

WeylAtPoint<double> random_weyl_commuting_with(const Matrix<double>& omega, std::mt19937_64& rng) {
  const int n = static_cast<int>(omega.rows());
  const Eigen::Index p = static_cast<Eigen::Index>(n * (n + 1) / 2);
  const Eigen::Index cols = p * p;
  const Eigen::Index rows = static_cast<Eigen::Index>(n) * n * n * n;
  // columns: residual of the Weyl part of each basis H; the Weyl part itself
  // is stacked below so that the kernel excludes pure-trace directions
  Eigen::MatrixXd A(rows, cols), W(rows, cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(cols);
    e(k) = 1.0;
    const auto C = weyl_from_h(n, h_from_params(n, e));
    const auto r = residual(n, C, omega);
    for (Eigen::Index i = 0; i < rows; ++i) {
      A(i, k) = r[static_cast<std::size_t>(i)];
      W(i, k) = C[static_cast<std::size_t>(i)];
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = 1e-10 * std::max(1.0, sv(0));
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  std::normal_distribution<double> g;
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(cols);
  for (Eigen::Index k = rank; k < cols; ++k) coeff += g(rng) * svd.matrixV().col(k);
  const Eigen::VectorXd c = W * coeff;
  if (c.norm() < 1e-8) throw Error(ErrorCode::InvariantViolation, "no nonzero Weyl tensor commutes with the form");
  std::vector<double> out(c.data(), c.data() + c.size());
  const double scale = 1.0 / c.cwiseAbs().maxCoeff();
  for (auto& x : out) x *= scale;
  return wrap(n, std::move(out));
}

Matrix<double> random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
  const auto sn = static_cast<std::size_t>(n);
  Matrix<double> out(sn, sn);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = q(i, j);
  return out;
}

WeylAtPoint<double> rotate(const WeylAtPoint<double>& w, const Matrix<double>& q) {
  const int n = w.n;
  std::vector<double> cur = w.down;
  // one slot at a time
  for (int slot = 0; slot < 4; ++slot) {
    std::vector<double> next(cur.size(), 0.0);
    for_each_index(n, 4, [&](std::span<const int> idx) {
      int src[4] = {idx[0], idx[1], idx[2], idx[3]};
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        src[slot] = k;
        s += q(static_cast<std::size_t>(idx[static_cast<std::size_t>(slot)]), static_cast<std::size_t>(k)) *
             cur[at4(n, src[0], src[1], src[2], src[3])];
      }
      next[at4(n, idx[0], idx[1], idx[2], idx[3])] = s;
    });
    cur = std::move(next);
  }
  return wrap(n, std::move(cur));
}

Matrix<double> rotate(const Matrix<double>& omega, const Matrix<double>& q) {
  Matrix<double> qt(q.cols(), q.rows());
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) qt(j, i) = q(i, j);
  return q * omega * qt;
}

Tensor<double> weyl_tensor(const WeylAtPoint<double>& w, const JetSpacePtr& space) {
  return Tensor<double>::generate(space, down(4), 0, [&](std::span<const int> i) {
    return FloatJet::constant(space, 0, w.C(i[0], i[1], i[2], i[3]));
  });
}

Tensor<double> two_form_tensor(const Matrix<double>& omega, const JetSpacePtr& space) {
  return Tensor<double>::generate(space, down(2), 0, [&](std::span<const int> i) {
    return FloatJet::constant(space, 0, omega(static_cast<std::size_t>(i[0]), static_cast<std::size_t>(i[1])));
  });
}

}  // namespace ckahler
