#include "qgame/gate.hpp"

#include <cmath>
#include <string>

namespace qgame {

namespace {

void require_n(int n) {
    if (n < 2) {
        throw InvalidInput("strategy count must be at least 2, got " + std::to_string(n), "n");
    }
}

std::string entry_path(const char *name, Index i, Index j) {
    return std::string(name) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

} // namespace

GateParams GateParams::zero(int n) {
    require_n(n);
    return GateParams{n, RealVector::Zero(n - 1), RealMatrix::Zero(n - 1, n - 1), RealVector::Zero(n)};
}

GateParams GateParams::from_packed(int n, const RealVector &packed, const RealVector &phi) {
    GateParams p = zero(n);
    if (packed.size() != free_parameter_count(n)) {
        throw InvalidInput("expected " + std::to_string(free_parameter_count(n)) + " packed parameters, got " +
                               std::to_string(packed.size()),
                           "params");
    }
    if (phi.size() != n) {
        throw InvalidInput("expected " + std::to_string(n) + " phases, got " + std::to_string(phi.size()), "phi");
    }
    const Index m = n - 1;
    p.lambda = packed.head(m);
    Index at = m;
    for (Index k = 0; k < m; ++k) {
        for (Index l = k + 1; l < m; ++l) {
            p.mu(k, l) = packed(at);
            p.mu(l, k) = packed(at);
            ++at;
        }
    }
    p.phi = phi;
    return p;
}

RealVector GateParams::packed() const {
    const Index m = n - 1;
    RealVector out(free_parameter_count(n));
    out.head(m) = lambda;
    Index at = m;
    for (Index k = 0; k < m; ++k) {
        for (Index l = k + 1; l < m; ++l) {
            out(at++) = mu(k, l);
        }
    }
    return out;
}

void GateParams::validate() const {
    require_n(n);
    const Index m = n - 1;
    if (lambda.size() != m) {
        throw InvalidInput("expected length " + std::to_string(m) + ", got " + std::to_string(lambda.size()),
                           "lambda");
    }
    if (mu.rows() != m || mu.cols() != m) {
        throw InvalidInput("expected a " + std::to_string(m) + "x" + std::to_string(m) + " array", "mu");
    }
    if (phi.size() != n) {
        throw InvalidInput("expected length " + std::to_string(n) + ", got " + std::to_string(phi.size()), "phi");
    }
    for (Index k = 0; k < m; ++k) {
        if (!std::isfinite(lambda(k))) {
            throw InvalidInput("not finite", "lambda[" + std::to_string(k) + "]");
        }
        for (Index l = 0; l < m; ++l) {
            if (!std::isfinite(mu(k, l))) {
                throw InvalidInput("not finite", entry_path("mu", k, l));
            }
        }
        if (mu(k, k) != 0.0) {
            throw InvalidInput("diagonal entries of mu must be zero", entry_path("mu", k, k));
        }
        for (Index l = k + 1; l < m; ++l) {
            if (mu(k, l) != mu(l, k)) {
                throw InvalidInput("mu must be symmetric (mu[" + std::to_string(l) + "][" + std::to_string(k) +
                                       "] differs)",
                                   entry_path("mu", k, l));
            }
        }
    }
    for (Index s = 0; s < n; ++s) {
        if (!std::isfinite(phi(s))) {
            throw InvalidInput("not finite", "phi[" + std::to_string(s) + "]");
        }
    }
}

CartanBasis build_cartan(int n) {
    require_n(n);
    CartanBasis basis{n, {}};
    basis.generators.reserve(static_cast<std::size_t>(n - 1));
    for (int k = 1; k < n; ++k) {
        RealVector d = RealVector::Zero(n);
        d.head(k).setOnes();
        d(k) = -static_cast<double>(k);
        d *= std::sqrt(2.0 / (static_cast<double>(k) * (k + 1)));
        basis.generators.push_back(std::move(d));
    }
    return basis;
}

ComplexMatrix build_shift(int n, const RealVector &phi) {
    require_n(n);
    if (phi.size() != n) {
        throw InvalidInput("expected " + std::to_string(n) + " phases, got " + std::to_string(phi.size()), "phi");
    }
    ComplexMatrix u = ComplexMatrix::Zero(n, n);
    for (int s = 0; s < n; ++s) {
        u((s + 1) % n, s) = std::polar(1.0, phi(s));
    }
    return u;
}

ComplexMatrix build_shift(int n) { return build_shift(n, RealVector::Zero(n)); }

double classical_phase(int n, int sigma) {
    return kPi * (n - 1) * (sigma - 1) / static_cast<double>(n);
}

std::vector<ComplexMatrix> build_classical_strategies(int n) {
    require_n(n);
    const ComplexMatrix u = build_shift(n);
    std::vector<ComplexMatrix> out;
    out.reserve(static_cast<std::size_t>(n));
    ComplexMatrix power = ComplexMatrix::Identity(n, n);
    for (int s = 1; s <= n; ++s) {
        out.push_back(std::polar(1.0, classical_phase(n, s)) * power);
        power = u * power;
    }
    return out;
}

namespace {

// Scalar prefactor angle for U_s so that det(c U^{s-1}) = 1:
// det U = exp(i (pi (N-1) + sum phi)), and c = exp(i (s-1)(pi (N-1) - sum phi) / N).
double prefactor_angle(int n, int sigma, const RealVector &phi) {
    return (sigma - 1) * (kPi * (n - 1) - phi.sum()) / static_cast<double>(n);
}

} // namespace

std::vector<ComplexMatrix> build_classical_strategies(int n, const RealVector &phi) {
    const ComplexMatrix u = build_shift(n, phi);
    std::vector<ComplexMatrix> out;
    out.reserve(static_cast<std::size_t>(n));
    ComplexMatrix power = ComplexMatrix::Identity(n, n);
    for (int s = 1; s <= n; ++s) {
        out.push_back(std::polar(1.0, prefactor_angle(n, s, phi)) * power);
        power = u * power;
    }
    return out;
}

std::vector<double> classical_phases(int n, const RealVector &phi) {
    require_n(n);
    if (phi.size() != n) {
        throw InvalidInput("expected " + std::to_string(n) + " phases", "phi");
    }
    std::vector<double> out;
    double accumulated = 0.0;
    for (int s = 1; s <= n; ++s) {
        out.push_back(prefactor_angle(n, s, phi) + accumulated);
        accumulated += phi(s - 1);
    }
    return out;
}

ComplexMatrix build_dft(int n) {
    require_n(n);
    ComplexMatrix v(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            // reduce the exponent first so the angle stays small
            const int power = (i * k) % n;
            v(i, k) = std::polar(scale, -2.0 * kPi * power / n);
        }
    }
    return v;
}

ComplexMatrix build_diagonalizer(int n, const RealVector &phi) {
    if (phi.size() == 0 || phi.isZero(0.0)) {
        return build_dft(n);
    }
    return eig_unitary(build_shift(n, phi)).vectors;
}

ComplexMatrix gate_exponent(const GateParams &params, const CartanBasis &cartan) {
    const int n = params.n;
    const Index dim = static_cast<Index>(n) * n;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k < n - 1; ++k) {
        const ComplexMatrix lk = cartan.matrix(k);
        h += params.lambda(k) * kron(lk, lk);
        for (int l = 0; l < n - 1; ++l) {
            if (l == k || params.mu(k, l) == 0.0) {
                continue;
            }
            const ComplexMatrix ll = cartan.matrix(l);
            h += params.mu(k, l) * (kron(lk, ll) + kron(ll, lk));
        }
    }
    return Complex{0.0, 1.0} * h;
}

Gate build_gate(const GateParams &params) {
    params.validate();
    const int n = params.n;
    const CartanBasis cartan = build_cartan(n);
    const ComplexMatrix exponent = gate_exponent(params, cartan);

    Gate gate;
    const Index dim = static_cast<Index>(n) * n;
    gate.j_tilde = ComplexMatrix::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        gate.j_tilde(i, i) = std::exp(exponent(i, i));
    }
    gate.shift = build_shift(n, params.phi);
    gate.v = build_diagonalizer(n, params.phi);
    const ComplexMatrix vv = kron(gate.v, gate.v);
    gate.j = vv * gate.j_tilde * vv.adjoint();
    return gate;
}

EmbeddingReport verify_embedding_conditions(const ComplexMatrix &j, const std::vector<ComplexMatrix> &strategies,
                                            double tol, const std::optional<std::vector<double>> &phases) {
    const auto n = static_cast<Index>(strategies.size());
    if (n < 2) {
        throw InvalidInput("need at least two strategies", "strategies");
    }
    if (j.rows() != n * n || j.cols() != n * n) {
        throw InvalidInput("gate is " + std::to_string(j.rows()) + "x" + std::to_string(j.cols()) + ", expected " +
                               std::to_string(n * n) + "x" + std::to_string(n * n),
                           "J");
    }
    for (Index s = 0; s < n; ++s) {
        const auto &u = strategies[static_cast<std::size_t>(s)];
        if (u.rows() != n || u.cols() != n) {
            throw InvalidInput("strategy has wrong dimension", "strategies[" + std::to_string(s) + "]");
        }
    }
    if (phases && static_cast<Index>(phases->size()) != n) {
        throw InvalidInput("expected one phase per strategy", "phases");
    }

    EmbeddingReport report;
    report.n = static_cast<int>(n);
    report.tol = tol;
    report.condition_i_informational = phases.has_value();
    report.commutator_norms.resize(n, n);
    report.condition_i_residuals.resize(n);
    for (Index s = 0; s < n; ++s) {
        const auto &us = strategies[static_cast<std::size_t>(s)];
        const double phase = phases ? (*phases)[static_cast<std::size_t>(s)]
                                    : classical_phase(static_cast<int>(n), static_cast<int>(s) + 1);
        const ComplexVector expected = std::polar(1.0, phase) * basis_ket(n, s);
        report.condition_i_residuals(s) = (us.col(0) - expected).norm();
        for (Index t = 0; t < n; ++t) {
            report.commutator_norms(s, t) = commutator_norm(j, kron(us, strategies[static_cast<std::size_t>(t)]));
        }
    }
    report.condition_i_passed = report.condition_i_residuals.maxCoeff() <= tol;
    report.condition_ii_passed = report.commutator_norms.maxCoeff() <= tol;
    return report;
}

} // namespace qgame
