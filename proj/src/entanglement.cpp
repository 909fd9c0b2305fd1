#include "qgame/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qgame/optimize.hpp"

namespace qgame {

namespace {

int strategy_count(const ComplexMatrix &j) {
    const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(j.rows()))));
    if (n < 2 || n * n != j.rows() || (j.cols() != j.rows() && j.cols() != 1)) {
        throw InvalidInput("gate must be N^2 x N^2 with N >= 2", "J");
    }
    return static_cast<int>(n);
}

// Tr_B of |psi><psi| from the reshaped amplitudes M: M M^dagger.
ComplexMatrix reduced_from_column(const ComplexMatrix &j, int n) {
    ComplexMatrix grid(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            grid(a, b) = j(a * n + b, 0);
        }
    }
    return grid * grid.adjoint();
}

std::vector<int> degeneracy_pattern(const RealVector &descending) {
    std::vector<int> pattern;
    Index start = 0;
    while (start < descending.size()) {
        Index stop = start + 1;
        while (stop < descending.size() && descending(stop - 1) - descending(stop) < kDegeneracyTol) {
            ++stop;
        }
        pattern.push_back(static_cast<int>(stop - start));
        start = stop;
    }
    std::sort(pattern.rbegin(), pattern.rend());
    return pattern;
}

double reduce_angle(double x) {
    double r = std::fmod(x, 2.0 * kPi);
    if (r < 0.0) {
        r += 2.0 * kPi;
    }
    if (2.0 * kPi - r < 1e-9) {
        r = 0.0;
    }
    return r;
}

double circular_gap(double a, double b) {
    const double d = std::abs(a - b);
    return std::min(d, 2.0 * kPi - d);
}

} // namespace

ComplexMatrix reduced_density_matrix(const ComplexMatrix &j, Subsystem traced) {
    require_unitary(j, kExactTol, "J");
    const int n = strategy_count(j);
    const StateVector psi(j.col(0));
    return partial_trace(psi.density_matrix(), traced, n);
}

EntanglementReport analyze_state(const StateVector &psi, int n) {
    if (psi.dim() != static_cast<Index>(n) * n) {
        throw InvalidInput("state dimension does not match N^2", "psi");
    }
    EntanglementReport report;
    report.n = n;
    report.reduced = partial_trace(psi.density_matrix(), Subsystem::B, n);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(report.reduced, Eigen::EigenvaluesOnly);
    RealVector spectrum = solver.eigenvalues().reverse();
    spectrum = spectrum.cwiseMax(0.0).cwiseMin(1.0);
    report.spectrum = spectrum;
    report.entropy = 0.0;
    for (Index k = 0; k < spectrum.size(); ++k) {
        if (spectrum(k) > 0.0) {
            report.entropy -= spectrum(k) * std::log(spectrum(k));
        }
    }
    report.entropy = std::max(report.entropy, 0.0);
    report.distance_to_maximal =
        (report.reduced - ComplexMatrix::Identity(n, n) / static_cast<double>(n)).norm();
    report.degeneracy_pattern = degeneracy_pattern(spectrum);
    return report;
}

EntanglementReport analyze(const ComplexMatrix &j) {
    require_unitary(j, kExactTol, "J");
    const int n = strategy_count(j);
    return analyze_state(StateVector(j.col(0)), n);
}

double distance_to_maximal(const ComplexMatrix &j) {
    const int n = strategy_count(j);
    return (reduced_from_column(j, n) - ComplexMatrix::Identity(n, n) / static_cast<double>(n)).norm();
}

RealVector maximal_entanglement_residual(const ComplexMatrix &j) {
    const int n = strategy_count(j);
    const ComplexMatrix diff = reduced_from_column(j, n) - ComplexMatrix::Identity(n, n) / static_cast<double>(n);
    RealVector r(static_cast<Index>(n) * n);
    Index at = 0;
    const double root2 = std::sqrt(2.0);
    for (int a = 0; a < n; ++a) {
        r(at++) = diff(a, a).real();
        for (int b = a + 1; b < n; ++b) {
            r(at++) = root2 * diff(a, b).real();
            r(at++) = root2 * diff(a, b).imag();
        }
    }
    return r;
}

MaxEntanglementResult find_maximal_entanglement(int n, const RealVector &phi, const MaxEntanglementOptions &options) {
    if (n < 2 || n > 6) {
        throw InvalidInput("maximal-entanglement search supports N in 2..6", "n");
    }
    if (phi.size() != n) {
        throw InvalidInput("expected " + std::to_string(n) + " phases", "phi");
    }
    if (options.seeds < 0 || options.budget < 0) {
        throw InvalidInput("seeds and budget must be nonnegative", "search");
    }
    const Index dim = GateParams::free_parameter_count(n);
    const ComplexMatrix v = build_diagonalizer(n, phi);
    const ComplexMatrix vv = kron(v, v);
    const CartanBasis cartan = build_cartan(n);

    // Only column 0 of J is needed: J|11> = (V(x)V) J~ (V^+(x)V^+)|11>.
    const ComplexVector start_ket = vv.adjoint().col(0);
    auto initial_column = [&](const RealVector &packed) {
        const GateParams params = GateParams::from_packed(n, packed, phi);
        const ComplexMatrix exponent = gate_exponent(params, cartan);
        ComplexVector column = start_ket;
        for (Index i = 0; i < column.size(); ++i) {
            column(i) *= std::exp(exponent(i, i));
        }
        return ComplexMatrix(vv * column);
    };
    auto distance = [&](const RealVector &packed) { return distance_to_maximal(initial_column(packed)); };
    auto residual = [&](const RealVector &packed) { return maximal_entanglement_residual(initial_column(packed)); };

    MaxEntanglementResult result;
    result.best_distance = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(options.rng_seed);
    std::uniform_real_distribution<double> uniform(-kPi, kPi);
    const auto budget = static_cast<std::size_t>(options.budget);

    std::vector<MaxEntanglementSolution> found;
    for (int seed = 0; seed < options.seeds; ++seed) {
        RealVector x0(dim);
        for (Index i = 0; i < dim; ++i) {
            x0(i) = uniform(rng);
        }
        ++result.seeds_run;
        optimize::NelderMeadOptions nm;
        nm.initial_step = 0.5;
        nm.max_evaluations = budget / 2;
        nm.value_tol = 1e-6;
        nm.size_tol = 1e-4;
        const auto coarse = optimize::nelder_mead(distance, x0, nm);

        optimize::LevenbergMarquardtOptions lm;
        lm.max_evaluations = budget - coarse.evaluations;
        const auto fine = optimize::levenberg_marquardt(residual, coarse.evaluations > 0 ? coarse.x : x0, lm);
        result.evaluations += coarse.evaluations + fine.evaluations;

        // re-verify on a gate rebuilt from scratch
        RealVector reduced = fine.x;
        for (Index i = 0; i < dim; ++i) {
            reduced(i) = reduce_angle(reduced(i));
        }
        const GateParams params = GateParams::from_packed(n, reduced, phi);
        const double verified = distance_to_maximal(build_gate(params).j);
        result.best_distance = std::min(result.best_distance, verified);
        if (verified < options.target) {
            found.push_back({params, verified});
        }
    }

    std::sort(found.begin(), found.end(), [](const auto &a, const auto &b) {
        const RealVector pa = a.params.packed();
        const RealVector pb = b.params.packed();
        return std::lexicographical_compare(pa.data(), pa.data() + pa.size(), pb.data(), pb.data() + pb.size());
    });
    for (auto &candidate : found) {
        const RealVector pc = candidate.params.packed();
        const bool duplicate = std::any_of(result.solutions.begin(), result.solutions.end(), [&](const auto &kept) {
            const RealVector pk = kept.params.packed();
            for (Index i = 0; i < pc.size(); ++i) {
                if (circular_gap(pc(i), pk(i)) > 1e-6) {
                    return false;
                }
            }
            return true;
        });
        if (!duplicate) {
            result.solutions.push_back(std::move(candidate));
        }
    }
    if (result.seeds_run == 0) {
        result.best_distance = distance(RealVector::Zero(dim));
    }
    return result;
}

} // namespace qgame
