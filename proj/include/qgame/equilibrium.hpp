#pragma once

// Numerical probes of best responses and pure-strategy Nash equilibria over SU(N).

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "qgame/game.hpp"
#include "qgame/special_unitary.hpp"

namespace qgame {

inline constexpr double kDefaultGapTol = 1e-6;
inline constexpr double kCounterstrategyMargin = 1e-3;

struct BestResponseOptions {
    int budget = 4000;          ///< payoff evaluations
    int random_starts = 4;      ///< Haar-random starts on top of the N classical strategies
    std::uint64_t seed = 1;
};

struct BestResponse {
    StrategyPoint strategy;
    double payoff = 0.0;
    std::size_t evaluations = 0;
    /// The search stopped on its own tolerance or hit the payoff upper bound
    /// (the largest entry of the responder's payoff matrix); false when the budget ran out.
    bool converged = false;
};

/// Maximizes the responder's payoff against a fixed opponent. Starts are the
/// classical strategies, the optional `current` strategy and Haar samples; each
/// is refined by Nelder-Mead on the chart U0 exp(i sum x_a G_a), rebased as it shrinks.
/// The returned payoff is never below the best start, so including `current`
/// bounds the deviation gain from below by zero.
BestResponse best_response(const PreparedGame &game, const ComplexMatrix &opponent, Player responder,
                           const BestResponseOptions &options, const ComplexMatrix *current = nullptr);

BestResponse best_response(const GameDefinition &game, const StrategyPoint &opponent, Player responder,
                           const BestResponseOptions &options);

struct SamplingSpec {
    enum class Kind { Classical, Haar, Explicit };
    Kind kind = Kind::Classical;
    int count = 0;                ///< Haar profiles to draw
    std::uint64_t seed = 1;       ///< Haar sampler seed
    std::vector<std::pair<ComplexMatrix, ComplexMatrix>> profiles;  ///< explicit (alice, bob) pairs

    static SamplingSpec classical() { return {}; }
    static SamplingSpec haar(int count, std::uint64_t seed) { return {Kind::Haar, count, seed, {}}; }
    static SamplingSpec explicit_profiles(std::vector<std::pair<ComplexMatrix, ComplexMatrix>> profiles) {
        return {Kind::Explicit, 0, 0, std::move(profiles)};
    }

    void validate() const;
};

enum class DeviationSet {
    Quantum,    ///< best response over SU(N)
    Classical,  ///< only the N classical strategies
};

struct NashOptions {
    double gap_tol = kDefaultGapTol;
    DeviationSet deviations = DeviationSet::Quantum;
    BestResponseOptions search;
};

enum class Verdict { EquilibriumCandidate, Refuted };

struct ProfileResult {
    std::size_t index = 0;
    /// Classical labels (one-based) when the profile is a classical pair, else 0.
    int classical_a = 0;
    int classical_b = 0;
    double payoff_a = 0.0;
    double payoff_b = 0.0;
    double gap_a = 0.0;
    double gap_b = 0.0;
    Verdict verdict = Verdict::Refuted;
    /// Outcome distribution concentrated on one basis state |s s'>.
    bool classical_outcome = false;
    bool converged = true;

    double best_response_gap() const { return std::max(gap_a, gap_b); }
};

struct CounterstrategyRecord {
    std::size_t trial = 0;
    StrategyPoint opponent;
    double achieved = 0.0;
    double target = 0.0;
    bool success = false;
    bool converged = true;
};

struct EquilibriumReport {
    std::size_t profiles_examined = 0;
    std::vector<ProfileResult> profiles;
    std::vector<CounterstrategyRecord> counterstrategy_records;
    std::vector<std::string> warnings;
    double gap_tol = kDefaultGapTol;
    Player responder = Player::Bob;

    std::size_t equilibrium_candidates() const;
    /// Candidates whose outcome is not a single classical basis state.
    std::size_t nontrivial_candidates() const;
    std::size_t counterstrategy_successes() const;
    /// Every counterstrategy trial succeeded (and there was at least one).
    bool counterstrategy_passed() const;
    bool all_converged() const;
};

EquilibriumReport nash_scan(const GameDefinition &game, const SamplingSpec &sampling, const NashOptions &options);

struct CounterOptions {
    Player responder = Player::Bob;
    double margin = kCounterstrategyMargin;
    BestResponseOptions search;
};

/// Haar-random opponents; success when the responder reaches its largest payoff entry minus the margin.
EquilibriumReport counterstrategy_check(const GameDefinition &game, int trials, std::uint64_t seed,
                                        const CounterOptions &options);

/// Same with the opponent strategies supplied.
EquilibriumReport counterstrategy_check(const GameDefinition &game, const std::vector<ComplexMatrix> &opponents,
                                        const CounterOptions &options);

} // namespace qgame
