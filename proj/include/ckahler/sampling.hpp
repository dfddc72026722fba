#pragma once

#include <random>

#include "ckahler/obstruction.hpp"

namespace ckahler {

/// Algebraic Weyl tensors at a point in an orthonormal frame (g = delta),
/// so that raised and lowered components coincide.

/// Trace-free projection of the curvature tensor built from a random H
/// symmetric in its first and in its last pair.
WeylAtPoint<double> random_weyl(int n, std::mt19937_64& rng);

Matrix<double> random_two_form(int n, std::mt19937_64& rng);

/// A random Weyl tensor from the kernel of C -> C_{bc[a}^e w_{d]e} + C_{ad[b}^e w_{c]e}.
/// Throws InvariantViolation if that kernel is trivial.
WeylAtPoint<double> random_weyl_commuting_with(const Matrix<double>& omega, std::mt19937_64& rng);

/// Random orthogonal matrix from the QR factorization of a Gaussian one.
Matrix<double> random_orthogonal(int n, std::mt19937_64& rng);

/// Q acting on every slot: C'_abcd = Q_ai Q_bj Q_ck Q_dl C_ijkl.
WeylAtPoint<double> rotate(const WeylAtPoint<double>& w, const Matrix<double>& q);
Matrix<double> rotate(const Matrix<double>& omega, const Matrix<double>& q);

/// Tensor views over a single-point jet space, for the tensor-level
/// residual. The metric is the identity.
Tensor<double> weyl_tensor(const WeylAtPoint<double>& w, const JetSpacePtr& space);
Tensor<double> two_form_tensor(const Matrix<double>& omega, const JetSpacePtr& space);

}  // namespace ckahler
