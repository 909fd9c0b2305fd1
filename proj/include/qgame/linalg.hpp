#pragma once

// Dense complex linear algebra shared by the gate, game and analysis code.
//
// Basis convention: ket |s> (one-based) is index s-1; the joint ket |s>|s'>
// of two N-level systems is index N*(s-1) + (s'-1). kron() realizes exactly
// this ordering, so (a (x) b)(x (x) y) = (a x) (x) (b y).

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qgame {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kExactTol = 1e-10;
inline constexpr double kEigenTol = 1e-8;
inline constexpr Index kMaxDimension = 4096;
inline constexpr double kPi = 3.14159265358979323846;

/// Raised on malformed numeric input: wrong shapes, non-unitary operators,
/// inconsistent parameters. `field()` names the offending item when known.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string &what, std::string field = {})
        : std::invalid_argument(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    const std::string &field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class Subsystem { A, B };

/// Kronecker product; throws if either dimension of the result exceeds `cap`.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
kron(const Eigen::MatrixBase<DerivedA> &a, const Eigen::MatrixBase<DerivedB> &b, Index cap = kMaxDimension) {
    const Index rows = a.rows() * b.rows();
    const Index cols = a.cols() * b.cols();
    if (rows > cap || cols > cap) {
        throw InvalidInput("kron result " + std::to_string(rows) + "x" + std::to_string(cols) +
                           " exceeds dimension cap " + std::to_string(cap));
    }
    Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(rows, cols);
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// ||[a, b]||_F
template <typename DerivedA, typename DerivedB>
double commutator_norm(const Eigen::MatrixBase<DerivedA> &a, const Eigen::MatrixBase<DerivedB> &b) {
    return (a * b - b * a).norm();
}

/// ||m^dagger m - 1||_F
template <typename Derived>
double unitarity_residual(const Eigen::MatrixBase<Derived> &m) {
    if (m.rows() != m.cols()) {
        throw InvalidInput("unitarity check needs a square matrix");
    }
    return (m.adjoint() * m - Derived::PlainObject::Identity(m.rows(), m.cols())).norm();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived> &m, double tol = kExactTol) {
    return unitarity_residual(m) <= tol;
}

/// Sum of squared moduli of the off-diagonal entries, square-rooted.
template <typename Derived>
double off_diagonal_norm(const Eigen::MatrixBase<Derived> &m) {
    typename Derived::PlainObject off = m;
    off.diagonal().setZero();
    return off.norm();
}

bool all_finite(const ComplexMatrix &m);

/// Throws InvalidInput naming `what` unless `m` is square and unitary within `tol`.
void require_unitary(const ComplexMatrix &m, double tol, const std::string &what);

/// Reduced density matrix of an n^2 x n^2 state, tracing out `traced`.
ComplexMatrix partial_trace(const ComplexMatrix &rho, Subsystem traced, Index n, double tol = kExactTol);

/// Eigenvalues sorted by principal argument in [0, 2pi); column k of
/// `vectors` belongs to `values[k]`. Vectors inside a degenerate cluster are
/// the Gram-Schmidt orthonormalization of the standard basis projected onto
/// the cluster's eigenspace, so the result does not depend on solver details.
struct UnitaryEigen {
    ComplexVector values;
    ComplexMatrix vectors;
};

UnitaryEigen eig_unitary(const ComplexMatrix &u, double tol = kExactTol);

/// Argument mapped to [0, 2pi), with values within `snap` below 2pi folded to 0.
double principal_argument(Complex z, double snap = 1e-9);

/// Multiplies by the phase that makes the first entry with modulus above
/// `threshold * max|m|` (row-major scan) real and positive.
ComplexMatrix strip_global_phase(const ComplexMatrix &m, double threshold = 1e-6);

/// ||strip(a) - strip(b)||_F
double phase_stripped_distance(const ComplexMatrix &a, const ComplexMatrix &b);

/// min over theta of ||a - e^{i theta} b||_F
double phase_invariant_distance(const ComplexMatrix &a, const ComplexMatrix &b);

/// Computational-basis ket |index> of the given dimension (zero-based index).
ComplexVector basis_ket(Index dim, Index index);

/// Normalized complex vector. Amplitudes of a joint state follow the kron ordering.
class StateVector {
public:
    static constexpr double kNormTol = 1e-10;

    explicit StateVector(ComplexVector amplitudes);

    Index dim() const noexcept { return amplitudes_.size(); }
    const ComplexVector &amplitudes() const noexcept { return amplitudes_; }
    Complex operator[](Index i) const { return amplitudes_(i); }

    /// |psi><psi|
    ComplexMatrix density_matrix() const { return amplitudes_ * amplitudes_.adjoint(); }

private:
    ComplexVector amplitudes_;
};

} // namespace qgame
