#pragma once

// The entangling gate J of a 2-player N-strategy quantum game and its building blocks.
//
// The gate J is constrained to commute with U (x) 1 and 1 (x) U, where U is
// the cyclic shift. Conjugating by V (x) V, with V diagonalizing U, turns J
// into a diagonal J~ = exp(i sum_k lambda_k L_k(x)L_k
//                          + i sum_{k != l} mu_kl (L_k(x)L_l + L_l(x)L_k))
// over a Cartan basis L_1..L_{N-1} of su(N).

#include <optional>
#include <vector>

#include "qgame/linalg.hpp"

namespace qgame {

/// Free parameters of the diagonal gate plus the shift-matrix phases.
///
/// `mu` is stored as a full symmetric (N-1)x(N-1) array with zero diagonal;
/// the exponent sums over ordered pairs k != l, so each unordered pair
/// contributes twice. Only the strict upper triangle is independent.
struct GateParams {
    int n = 2;
    RealVector lambda;
    RealMatrix mu;
    RealVector phi;

    /// All coefficients and phases zero: J is the identity.
    static GateParams zero(int n);

    /// Builds params from the packed free-parameter vector (see `packed()`).
    static GateParams from_packed(int n, const RealVector &packed, const RealVector &phi);

    /// Number of independent real gate parameters, N(N-1)/2.
    static int free_parameter_count(int n) { return n * (n - 1) / 2; }

    /// lambda_1..lambda_{N-1} followed by mu_kl for k < l in row-major order.
    RealVector packed() const;

    bool phases_zero() const { return phi.size() == 0 || phi.isZero(0.0); }

    /// Throws InvalidInput with a field path ("mu[0][1]", "phi", ...) on the first defect.
    void validate() const;
};

/// Diagonals of the Cartan generators L_1..L_{N-1}.
struct CartanBasis {
    int n = 0;
    std::vector<RealVector> generators;

    ComplexMatrix matrix(int k) const { return generators.at(static_cast<std::size_t>(k)).cast<Complex>().asDiagonal(); }
};

/// Generalized diagonal Gell-Mann basis, Tr(L_k L_l) = 2 delta_kl:
/// L_k = sqrt(2/(k(k+1))) diag(1,..,1, -k, 0,..,0) with k leading ones.
CartanBasis build_cartan(int n);

/// Shift with entry e^{i phi_s} at (s+1, s) and e^{i phi_N} at (1, N), one-based.
ComplexMatrix build_shift(int n, const RealVector &phi);
ComplexMatrix build_shift(int n);

/// Phase of the classical strategy s (one-based) acting on |1>: pi(N-1)(s-1)/N.
double classical_phase(int n, int sigma);

/// U_s = e^{i pi (N-1)(s-1)/N} U^{s-1}, s = 1..N, for the plain shift.
std::vector<ComplexMatrix> build_classical_strategies(int n);

/// Same construction on the phase-generalized shift, with the scalar prefactor
/// chosen so that every U_s has unit determinant. With phi = 0 this equals the
/// plain construction.
std::vector<ComplexMatrix> build_classical_strategies(int n, const RealVector &phi);

/// Phases e^{i theta_s} with U_s|1> = e^{i theta_s}|s> for the generalized strategies.
std::vector<double> classical_phases(int n, const RealVector &phi);

/// V_ik = N^{-1/2} conj(eps)^{(i-1)(k-1)}, eps = exp(2 pi i / N).
ComplexMatrix build_dft(int n);

/// Matrix diagonalizing the (possibly phase-generalized) shift. For zero phases
/// this is build_dft(n); otherwise the canonical eigenvector matrix of the shift.
ComplexMatrix build_diagonalizer(int n, const RealVector &phi);

/// i * (the Hermitian exponent of J~), assembled from Kronecker products of
/// the Cartan generators. Diagonal by construction.
ComplexMatrix gate_exponent(const GateParams &params, const CartanBasis &cartan);

struct Gate {
    ComplexMatrix j;        ///< J = (V (x) V) J~ (V^+ (x) V^+)
    ComplexMatrix j_tilde;  ///< diagonal
    ComplexMatrix v;        ///< diagonalizer of the shift
    ComplexMatrix shift;
};

Gate build_gate(const GateParams &params);

struct EmbeddingReport {
    int n = 0;
    double tol = kExactTol;
    /// commutator_norms(s, s') = ||[J, U_s (x) U_s']||_F
    RealMatrix commutator_norms;
    /// ||U_s|1> - e^{i phi_s}|s>||
    RealVector condition_i_residuals;
    bool condition_i_passed = false;
    bool condition_ii_passed = false;
    /// Set when the phases checked in condition (i) are not the plain-shift phases.
    bool condition_i_informational = false;

    bool passed() const { return condition_ii_passed && (condition_i_passed || condition_i_informational); }
};

/// Checks U_s|1> = e^{i phi_s}|s> and [J, U_s (x) U_s'] = 0. Without explicit
/// `phases` the plain-shift phases pi(N-1)(s-1)/N are used.
EmbeddingReport verify_embedding_conditions(const ComplexMatrix &j, const std::vector<ComplexMatrix> &strategies,
                                            double tol = kExactTol,
                                            const std::optional<std::vector<double>> &phases = std::nullopt);

} // namespace qgame
