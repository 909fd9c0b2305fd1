#pragma once

// Coordinates on SU(N) and Haar sampling.

#include <random>
#include <vector>

#include "qgame/linalg.hpp"

namespace qgame {

/// Generalized Gell-Mann matrices: N(N-1)/2 symmetric, N(N-1)/2 antisymmetric,
/// then N-1 diagonal, each traceless Hermitian with Tr(G_a G_b) = 2 delta_ab.
std::vector<ComplexMatrix> gell_mann_basis(int n);

/// exp(i sum_a x_a G_a). The coordinate vector has N^2 - 1 entries.
ComplexMatrix su_exp(const RealVector &coordinates, const std::vector<ComplexMatrix> &basis);
ComplexMatrix su_exp(int n, const RealVector &coordinates);

/// Coordinates x with su_exp(x) = u for u in SU(N), taking principal logarithms
/// of the eigenphases and shifting by 2pi where needed to keep the generator traceless.
RealVector su_log(const ComplexMatrix &u, const std::vector<ComplexMatrix> &basis);

/// Haar-distributed element of SU(N): QR of a complex Ginibre matrix, column
/// phases fixed from R's diagonal, then the determinant divided out.
ComplexMatrix haar_special_unitary(int n, std::mt19937_64 &rng);

/// An N x N strategy: a special unitary together with its N^2 - 1 coordinates.
struct StrategyPoint {
    ComplexMatrix matrix;
    RealVector parameters;

    static StrategyPoint from_coordinates(int n, const RealVector &coordinates);
    static StrategyPoint from_matrix(const ComplexMatrix &u);

    int n() const { return static_cast<int>(matrix.rows()); }

    /// Throws InvalidInput unless unitary within 1e-9 with determinant 1 within 1e-8.
    void validate() const;
};

} // namespace qgame
