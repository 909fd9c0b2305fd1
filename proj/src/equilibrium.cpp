#include "qgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "qgame/entanglement.hpp"
#include "qgame/optimize.hpp"

namespace qgame {

namespace {

struct Candidate {
    ComplexMatrix matrix;
    double value;
};

double evaluate(const PreparedGame &game, Player responder, const ComplexMatrix &opponent, const ComplexMatrix &u) {
    return responder == Player::Alice ? game.payoff(Player::Alice, u, opponent)
                                      : game.payoff(Player::Bob, opponent, u);
}

// Nelder-Mead on the chart base * exp(i sum x_a G_a), rebasing at each round's optimum.
// Returns the evaluations used; updates `best` in place.
std::size_t refine(const PreparedGame &game, Player responder, const ComplexMatrix &opponent,
                   const std::vector<ComplexMatrix> &basis, double bound, std::size_t budget, Candidate &best,
                   bool &converged) {
    std::size_t used = 0;
    double step = 0.6;
    converged = false;
    const auto dim = static_cast<Index>(basis.size());
    while (used < budget) {
        if (best.value >= bound - 1e-13) {
            converged = true;
            break;
        }
        if (step < 1e-7) {
            converged = true;
            break;
        }
        const ComplexMatrix base = best.matrix;
        auto objective = [&](const RealVector &x) {
            return -evaluate(game, responder, opponent, base * su_exp(x, basis));
        };
        optimize::NelderMeadOptions nm;
        nm.initial_step = step;
        nm.max_evaluations = budget - used;
        nm.value_tol = 1e-14;
        nm.size_tol = step * 1e-2;
        const auto run = optimize::nelder_mead(objective, RealVector::Zero(dim), nm);
        used += run.evaluations;
        // drifting along a flat ridge of maxima is not progress; only a real gain keeps the step
        const bool moved = run.x.lpNorm<Eigen::Infinity>() > step;
        const bool gained = -run.value > best.value + 1e-12 * (1.0 + std::abs(best.value));
        if (-run.value > best.value) {
            best.matrix = base * su_exp(run.x, basis);
            best.value = -run.value;
        }
        if (run.converged && !gained) {
            // settled: the simplex collapsed and the round found nothing above rounding noise
            converged = true;
            break;
        }
        if (!(moved && gained)) {
            step *= 0.1;
        }
    }
    if (best.value >= bound - 1e-13) {
        converged = true;
    }
    return used;
}

} // namespace

BestResponse best_response(const PreparedGame &game, const ComplexMatrix &opponent, Player responder,
                           const BestResponseOptions &options, const ComplexMatrix *current) {
    const int n = game.n();
    if (opponent.rows() != n || opponent.cols() != n) {
        throw InvalidInput("opponent strategy has wrong dimension", "opponent");
    }
    require_unitary(opponent, 1e-9, "opponent");
    const auto basis = gell_mann_basis(n);
    const double bound = game.definition().payoff(responder).maxCoeff();
    std::mt19937_64 rng(options.seed);

    std::vector<ComplexMatrix> starts;
    if (current != nullptr) {
        starts.push_back(*current);
    }
    for (auto &u : build_classical_strategies(n, game.definition().gate.phi)) {
        starts.push_back(std::move(u));
    }
    for (int k = 0; k < std::max(options.random_starts, 0); ++k) {
        starts.push_back(haar_special_unitary(n, rng));
    }

    const auto budget = static_cast<std::size_t>(std::max(options.budget, 0));
    // A budget too small to score every start truncates the search: the first
    // start is always scored so there is an answer, but it is never converged.
    const bool truncated = budget < starts.size();
    if (truncated) {
        starts.resize(std::max<std::size_t>(budget, 1));
    }
    std::size_t used = 0;
    std::vector<Candidate> candidates;
    for (const auto &u : starts) {
        candidates.push_back({u, evaluate(game, responder, opponent, u)});
        ++used;
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate &a, const Candidate &b) { return a.value > b.value; });

    Candidate best = candidates.front();
    bool converged = best.value >= bound - 1e-13;
    for (std::size_t k = 0; k < candidates.size() && used < budget && !(best.value >= bound - 1e-13); ++k) {
        const std::size_t share = (budget - used) / (candidates.size() - k);
        Candidate local = candidates[k];
        bool local_converged = false;
        used += refine(game, responder, opponent, basis, bound, share, local, local_converged);
        if (local.value > best.value) {
            best = local;
            converged = local_converged;
        } else if (k == 0) {
            converged = local_converged;
        }
    }
    if (best.value >= bound - 1e-13) {
        converged = true;
    }
    if (truncated) {
        converged = false;
    }

    BestResponse out{StrategyPoint{best.matrix, su_log(best.matrix, basis)}, best.value, used, converged};
    return out;
}

BestResponse best_response(const GameDefinition &game, const StrategyPoint &opponent, Player responder,
                           const BestResponseOptions &options) {
    return best_response(PreparedGame(game), opponent.matrix, responder, options);
}

void SamplingSpec::validate() const {
    if (kind == Kind::Haar && count < 0) {
        throw InvalidInput("sample count must be nonnegative", "samples.count");
    }
}

std::size_t EquilibriumReport::equilibrium_candidates() const {
    return static_cast<std::size_t>(std::count_if(profiles.begin(), profiles.end(), [](const ProfileResult &p) {
        return p.verdict == Verdict::EquilibriumCandidate;
    }));
}

std::size_t EquilibriumReport::nontrivial_candidates() const {
    return static_cast<std::size_t>(std::count_if(profiles.begin(), profiles.end(), [](const ProfileResult &p) {
        return p.verdict == Verdict::EquilibriumCandidate && !p.classical_outcome;
    }));
}

std::size_t EquilibriumReport::counterstrategy_successes() const {
    return static_cast<std::size_t>(std::count_if(counterstrategy_records.begin(), counterstrategy_records.end(),
                                                  [](const CounterstrategyRecord &r) { return r.success; }));
}

bool EquilibriumReport::counterstrategy_passed() const {
    return !counterstrategy_records.empty() && counterstrategy_successes() == counterstrategy_records.size();
}

bool EquilibriumReport::all_converged() const {
    return std::all_of(profiles.begin(), profiles.end(), [](const ProfileResult &p) { return p.converged; }) &&
           std::all_of(counterstrategy_records.begin(), counterstrategy_records.end(),
                       [](const CounterstrategyRecord &r) { return r.converged; });
}

namespace {

struct Profile {
    ComplexMatrix alice;
    ComplexMatrix bob;
    int classical_a = 0;
    int classical_b = 0;
};

double best_classical(const PreparedGame &game, Player responder, const ComplexMatrix &opponent,
                      const std::vector<ComplexMatrix> &strategies) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto &u : strategies) {
        best = std::max(best, evaluate(game, responder, opponent, u));
    }
    return best;
}

std::vector<Profile> sample_profiles(int n, const RealVector &phi, const SamplingSpec &sampling) {
    std::vector<Profile> profiles;
    switch (sampling.kind) {
    case SamplingSpec::Kind::Classical: {
        const auto strategies = build_classical_strategies(n, phi);
        for (int s = 0; s < n; ++s) {
            for (int t = 0; t < n; ++t) {
                profiles.push_back({strategies[static_cast<std::size_t>(s)], strategies[static_cast<std::size_t>(t)],
                                    s + 1, t + 1});
            }
        }
        break;
    }
    case SamplingSpec::Kind::Haar: {
        std::mt19937_64 rng(sampling.seed);
        for (int k = 0; k < sampling.count; ++k) {
            ComplexMatrix a = haar_special_unitary(n, rng);
            ComplexMatrix b = haar_special_unitary(n, rng);
            profiles.push_back({std::move(a), std::move(b), 0, 0});
        }
        break;
    }
    case SamplingSpec::Kind::Explicit:
        for (const auto &[a, b] : sampling.profiles) {
            if (a.rows() != n || b.rows() != n) {
                throw InvalidInput("profile strategy has wrong dimension", "samples.profiles");
            }
            profiles.push_back({a, b, 0, 0});
        }
        break;
    }
    return profiles;
}

} // namespace

EquilibriumReport nash_scan(const GameDefinition &game, const SamplingSpec &sampling, const NashOptions &options) {
    sampling.validate();
    if (!(options.gap_tol > 0.0)) {
        throw InvalidInput("gap tolerance must be positive", "nash.gap_tol");
    }
    const PreparedGame prepared(game);
    const int n = game.n;
    const auto strategies = build_classical_strategies(n, game.gate.phi);
    const auto profiles = sample_profiles(n, game.gate.phi, sampling);

    EquilibriumReport report;
    report.gap_tol = options.gap_tol;
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        const Profile &profile = profiles[k];
        const GameOutcome outcome = prepared.play(profile.alice, profile.bob, 1e-9);
        ProfileResult result;
        result.index = k;
        result.classical_a = profile.classical_a;
        result.classical_b = profile.classical_b;
        result.payoff_a = outcome.payoff_a;
        result.payoff_b = outcome.payoff_b;
        result.classical_outcome = outcome.probabilities.maxCoeff() >= 1.0 - 1e-9;

        double deviation_a = 0.0;
        double deviation_b = 0.0;
        if (options.deviations == DeviationSet::Classical) {
            deviation_a = std::max(prepared.payoff(Player::Alice, profile.alice, profile.bob),
                                   best_classical(prepared, Player::Alice, profile.bob, strategies));
            deviation_b = std::max(prepared.payoff(Player::Bob, profile.alice, profile.bob),
                                   best_classical(prepared, Player::Bob, profile.alice, strategies));
        } else {
            BestResponseOptions search = options.search;
            search.seed = options.search.seed + 2 * k;
            const BestResponse br_a = best_response(prepared, profile.bob, Player::Alice, search, &profile.alice);
            search.seed = options.search.seed + 2 * k + 1;
            const BestResponse br_b = best_response(prepared, profile.alice, Player::Bob, search, &profile.bob);
            deviation_a = br_a.payoff;
            deviation_b = br_b.payoff;
            result.converged = br_a.converged && br_b.converged;
        }
        // gaps against the same evaluation path the search uses, so a retained start gives exactly zero
        result.gap_a = deviation_a - prepared.payoff(Player::Alice, profile.alice, profile.bob);
        result.gap_b = deviation_b - prepared.payoff(Player::Bob, profile.alice, profile.bob);
        result.verdict = result.best_response_gap() > options.gap_tol ? Verdict::Refuted : Verdict::EquilibriumCandidate;
        report.profiles.push_back(result);
    }
    report.profiles_examined = report.profiles.size();
    return report;
}

EquilibriumReport counterstrategy_check(const GameDefinition &game, const std::vector<ComplexMatrix> &opponents,
                                        const CounterOptions &options) {
    const PreparedGame prepared(game);
    EquilibriumReport report;
    report.responder = options.responder;
    const double distance = distance_to_maximal(prepared.gate());
    if (!(distance < 1e-8)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "gate is not maximally entangled (distance_to_maximal = %.3e)", distance);
        report.warnings.emplace_back(buf);
    }
    const double target = game.payoff(options.responder).maxCoeff();
    for (std::size_t k = 0; k < opponents.size(); ++k) {
        BestResponseOptions search = options.search;
        search.seed = options.search.seed + k;
        const BestResponse br = best_response(prepared, opponents[k], options.responder, search);
        CounterstrategyRecord record{k, StrategyPoint{opponents[k], RealVector()}, br.payoff, target,
                                     br.payoff >= target - options.margin, br.converged};
        record.opponent.parameters = su_log(opponents[k], gell_mann_basis(game.n));
        report.counterstrategy_records.push_back(std::move(record));
    }
    report.profiles_examined = report.counterstrategy_records.size();
    return report;
}

EquilibriumReport counterstrategy_check(const GameDefinition &game, int trials, std::uint64_t seed,
                                        const CounterOptions &options) {
    if (trials < 0) {
        throw InvalidInput("trial count must be nonnegative", "counter.trials");
    }
    std::mt19937_64 rng(seed);
    std::vector<ComplexMatrix> opponents;
    opponents.reserve(static_cast<std::size_t>(trials));
    for (int k = 0; k < trials; ++k) {
        opponents.push_back(haar_special_unitary(game.n, rng));
    }
    return counterstrategy_check(game, opponents, options);
}

} // namespace qgame
