#include "qgame/linalg.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numeric>

namespace qgame {

bool all_finite(const ComplexMatrix &m) {
    return m.real().allFinite() && m.imag().allFinite();
}

void require_unitary(const ComplexMatrix &m, double tol, const std::string &what) {
    if (m.rows() != m.cols()) {
        throw InvalidInput("expected a square matrix, got " + std::to_string(m.rows()) + "x" +
                               std::to_string(m.cols()),
                           what);
    }
    if (!all_finite(m)) {
        throw InvalidInput("matrix has non-finite entries", what);
    }
    const double residual = unitarity_residual(m);
    if (!(residual <= tol)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", residual);
        throw InvalidInput(std::string("matrix is not unitary (residual ") + buf + ")", what);
    }
}

ComplexMatrix partial_trace(const ComplexMatrix &rho, Subsystem traced, Index n, double tol) {
    if (n <= 0 || rho.rows() != n * n || rho.cols() != n * n) {
        throw InvalidInput("partial trace expects an n^2 x n^2 matrix with n = " + std::to_string(n));
    }
    if ((rho - rho.adjoint()).norm() > tol) {
        throw InvalidInput("partial trace input is not Hermitian");
    }
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            Complex acc{0.0, 0.0};
            for (Index k = 0; k < n; ++k) {
                acc += traced == Subsystem::B ? rho(i * n + k, j * n + k) : rho(k * n + i, k * n + j);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

double principal_argument(Complex z, double snap) {
    double theta = std::arg(z);
    if (theta < 0.0) {
        theta += 2.0 * kPi;
    }
    if (2.0 * kPi - theta < snap) {
        theta = 0.0;
    }
    return theta;
}

UnitaryEigen eig_unitary(const ComplexMatrix &u, double tol) {
    require_unitary(u, tol, "eig_unitary input");
    const Index n = u.rows();
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(u, true);
    if (solver.info() != Eigen::Success) {
        throw InvalidInput("eigendecomposition did not converge");
    }
    const ComplexVector raw_values = solver.eigenvalues();
    const ComplexMatrix raw_vectors = solver.eigenvectors();

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::vector<double> args(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) {
        args[static_cast<std::size_t>(k)] = principal_argument(raw_values(k));
    }
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return args[static_cast<std::size_t>(a)] < args[static_cast<std::size_t>(b)];
    });

    UnitaryEigen out{ComplexVector(n), ComplexMatrix(n, n)};
    Index start = 0;
    while (start < n) {
        // cluster by distance on the unit circle
        Index stop = start + 1;
        while (stop < n && std::abs(raw_values(order[stop]) - raw_values(order[start])) < kEigenTol) {
            ++stop;
        }
        const Index size = stop - start;
        ComplexMatrix block(n, size);
        Complex mean{0.0, 0.0};
        for (Index k = 0; k < size; ++k) {
            block.col(k) = raw_vectors.col(order[start + k]);
            mean += raw_values(order[start + k]);
        }
        mean /= static_cast<double>(size);
        // orthonormal basis of the cluster's eigenspace, then its projector
        Eigen::HouseholderQR<ComplexMatrix> qr(block);
        const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, size);
        const ComplexMatrix projector = q * q.adjoint();

        Index filled = 0;
        for (Index e = 0; e < n && filled < size; ++e) {
            ComplexVector v = projector.col(e);
            for (Index k = 0; k < filled; ++k) {
                const ComplexVector prev = out.vectors.col(start + k);
                v -= prev * prev.dot(v);
            }
            const double norm = v.norm();
            if (norm > 1e-6) {
                out.vectors.col(start + filled) = v / norm;
                ++filled;
            }
        }
        for (Index k = 0; k < size; ++k) {
            out.values(start + k) = size == 1 ? raw_values(order[start]) : mean / std::abs(mean);
        }
        start = stop;
    }
    return out;
}

ComplexMatrix strip_global_phase(const ComplexMatrix &m, double threshold) {
    const double cutoff = threshold * m.cwiseAbs().maxCoeff();
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            const double mag = std::abs(m(i, j));
            if (mag > cutoff && mag > 0.0) {
                return m * (std::conj(m(i, j)) / mag);
            }
        }
    }
    return m;
}

double phase_stripped_distance(const ComplexMatrix &a, const ComplexMatrix &b) {
    return (strip_global_phase(a) - strip_global_phase(b)).norm();
}

double phase_invariant_distance(const ComplexMatrix &a, const ComplexMatrix &b) {
    // the minimizing phase aligns e^{it} <a, b> with the positive real axis; evaluating the
    // residual directly avoids the cancellation in |a|^2 + |b|^2 - 2|<a, b>|
    const Complex overlap = a.conjugate().cwiseProduct(b).sum();
    const double mag = std::abs(overlap);
    const Complex phase = mag > 0.0 ? std::conj(overlap) / mag : Complex{1.0, 0.0};
    return (a - phase * b).norm();
}

ComplexVector basis_ket(Index dim, Index index) {
    if (index < 0 || index >= dim) {
        throw InvalidInput("basis index " + std::to_string(index) + " out of range for dimension " +
                           std::to_string(dim));
    }
    ComplexVector v = ComplexVector::Zero(dim);
    v(index) = 1.0;
    return v;
}

StateVector::StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) {
        throw InvalidInput("state vector must be nonempty");
    }
    if (!amplitudes_.real().allFinite() || !amplitudes_.imag().allFinite()) {
        throw InvalidInput("state vector has non-finite amplitudes");
    }
    if (std::abs(amplitudes_.norm() - 1.0) > kNormTol) {
        throw InvalidInput("state vector is not normalized");
    }
}

} // namespace qgame
