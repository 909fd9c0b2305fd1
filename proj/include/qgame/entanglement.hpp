#pragma once

#include <cstdint>
#include <vector>

#include "qgame/gate.hpp"

namespace qgame {

/// Eigenvalues closer than this share a multiplicity class.
inline constexpr double kDegeneracyTol = 1e-7;

struct EntanglementReport {
    int n = 0;
    RealVector spectrum;       ///< eigenvalues of the reduced density matrix, descending
    double entropy = 0.0;      ///< von Neumann entropy, natural log
    double distance_to_maximal = 0.0;  ///< ||rho_red - 1/N||_F
    std::vector<int> degeneracy_pattern;  ///< multiplicities, descending
    ComplexMatrix reduced;     ///< Tr_B of the initial-state projector
};

/// Reduced density matrix of J|11>, tracing out `traced`.
ComplexMatrix reduced_density_matrix(const ComplexMatrix &j, Subsystem traced = Subsystem::B);

EntanglementReport analyze_state(const StateVector &psi, int n);
EntanglementReport analyze(const ComplexMatrix &j);

/// ||Tr_B |psi><psi| - 1/N||_F for psi = J|11>, with no unitarity check.
/// Accepts J itself or just its first column.
double distance_to_maximal(const ComplexMatrix &j);

/// Same as above written as a residual vector whose Euclidean norm is the distance.
RealVector maximal_entanglement_residual(const ComplexMatrix &j);

struct MaxEntanglementOptions {
    int seeds = 16;
    int budget = 2000;          ///< objective evaluations per seed
    std::uint64_t rng_seed = 1;
    double target = 1e-8;
};

struct MaxEntanglementSolution {
    GateParams params;
    double distance = 0.0;
};

struct MaxEntanglementResult {
    std::vector<MaxEntanglementSolution> solutions;  ///< canonical order, deduplicated
    int seeds_run = 0;
    std::size_t evaluations = 0;
    double best_distance = 0.0;  ///< over all seeds, including failures

    bool found() const { return !solutions.empty(); }
};

/// Multi-start search over the packed gate parameters for rho_red = 1/N.
/// Each seed starts uniformly in [-pi, pi]^d, runs Nelder-Mead and then
/// a Levenberg-Marquardt polish on the residual. Solutions are reduced
/// component-wise into [0, 2pi) before deduplication.
MaxEntanglementResult find_maximal_entanglement(int n, const RealVector &phi, const MaxEntanglementOptions &options);

} // namespace qgame
