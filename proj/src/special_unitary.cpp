#include "qgame/special_unitary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qgame {

std::vector<ComplexMatrix> gell_mann_basis(int n) {
    if (n < 2) {
        throw InvalidInput("SU(N) needs N >= 2", "n");
    }
    std::vector<ComplexMatrix> basis;
    basis.reserve(static_cast<std::size_t>(n * n - 1));
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            ComplexMatrix g = ComplexMatrix::Zero(n, n);
            g(j, k) = 1.0;
            g(k, j) = 1.0;
            basis.push_back(std::move(g));
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            ComplexMatrix g = ComplexMatrix::Zero(n, n);
            g(j, k) = Complex{0.0, -1.0};
            g(k, j) = Complex{0.0, 1.0};
            basis.push_back(std::move(g));
        }
    }
    for (int l = 1; l < n; ++l) {
        ComplexMatrix g = ComplexMatrix::Zero(n, n);
        const double scale = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
        for (int j = 0; j < l; ++j) {
            g(j, j) = scale;
        }
        g(l, l) = -scale * l;
        basis.push_back(std::move(g));
    }
    return basis;
}

ComplexMatrix su_exp(const RealVector &coordinates, const std::vector<ComplexMatrix> &basis) {
    if (basis.empty() || coordinates.size() != static_cast<Index>(basis.size())) {
        throw InvalidInput("coordinate count does not match the generator basis", "parameters");
    }
    const Index n = basis.front().rows();
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (std::size_t a = 0; a < basis.size(); ++a) {
        h += coordinates(static_cast<Index>(a)) * basis[a];
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    const ComplexVector phases =
        solver.eigenvalues().unaryExpr([](double t) { return std::polar(1.0, t); }).cast<Complex>();
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

ComplexMatrix su_exp(int n, const RealVector &coordinates) { return su_exp(coordinates, gell_mann_basis(n)); }

RealVector su_log(const ComplexMatrix &u, const std::vector<ComplexMatrix> &basis) {
    const UnitaryEigen eig = eig_unitary(u, 1e-9);
    const Index n = u.rows();
    std::vector<double> theta(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) {
        theta[static_cast<std::size_t>(k)] = std::arg(eig.values(k));
    }
    const double total = std::accumulate(theta.begin(), theta.end(), 0.0);
    const auto winding = static_cast<long>(std::llround(total / (2.0 * kPi)));
    std::vector<std::size_t> order(theta.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return theta[a] > theta[b]; });
    if (winding > 0) {
        for (long m = 0; m < winding; ++m) {
            theta[order[static_cast<std::size_t>(m)]] -= 2.0 * kPi;
        }
    } else {
        for (long m = 0; m < -winding; ++m) {
            theta[order[order.size() - 1 - static_cast<std::size_t>(m)]] += 2.0 * kPi;
        }
    }
    RealVector diag(n);
    for (Index k = 0; k < n; ++k) {
        diag(k) = theta[static_cast<std::size_t>(k)];
    }
    const ComplexMatrix h = eig.vectors * diag.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    RealVector x(static_cast<Index>(basis.size()));
    for (std::size_t a = 0; a < basis.size(); ++a) {
        x(static_cast<Index>(a)) = 0.5 * (h * basis[a]).trace().real();
    }
    return x;
}

ComplexMatrix haar_special_unitary(int n, std::mt19937_64 &rng) {
    if (n < 2) {
        throw InvalidInput("SU(N) needs N >= 2", "n");
    }
    std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
    ComplexMatrix z(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            z(i, j) = Complex{re, im};
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < n; ++k) {
        const Complex d = r(k, k);
        const double mag = std::abs(d);
        q.col(k) *= mag > 0.0 ? d / mag : Complex{1.0, 0.0};
    }
    const Complex det = q.determinant();
    q *= std::polar(1.0, -std::arg(det) / n);
    return q;
}

StrategyPoint StrategyPoint::from_coordinates(int n, const RealVector &coordinates) {
    return StrategyPoint{su_exp(n, coordinates), coordinates};
}

StrategyPoint StrategyPoint::from_matrix(const ComplexMatrix &u) {
    StrategyPoint point{u, RealVector()};
    point.validate();
    point.parameters = su_log(u, gell_mann_basis(static_cast<int>(u.rows())));
    return point;
}

void StrategyPoint::validate() const {
    require_unitary(matrix, 1e-9, "strategy");
    if (std::abs(matrix.determinant() - Complex{1.0, 0.0}) > 1e-8) {
        throw InvalidInput("strategy determinant is not 1", "strategy");
    }
}

} // namespace qgame
