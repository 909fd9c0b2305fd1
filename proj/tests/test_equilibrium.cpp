#include <cmath>
#include <set>
#include <utility>

#include <gtest/gtest.h>

#include "qgame/entanglement.hpp"
#include "qgame/equilibrium.hpp"

using namespace qgame;

namespace {

GateParams ewl_maximal() {
    GateParams p = GateParams::zero(2);
    p.phi << kPi, 0.0;
    p.lambda(0) = 3.0 * kPi / 4.0;
    return p;
}

RealMatrix random_payoffs(int n, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0.0, 10.0);
    RealMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a(i, j) = u(rng);
        }
    }
    return a;
}

// Pure Nash equilibria of the bimatrix game by exhaustive enumeration.
std::set<std::pair<int, int>> classical_equilibria(const RealMatrix &a, const RealMatrix &b) {
    std::set<std::pair<int, int>> out;
    const Index n = a.rows();
    for (Index s = 0; s < n; ++s) {
        for (Index t = 0; t < n; ++t) {
            bool stable = true;
            for (Index d = 0; d < n; ++d) {
                stable = stable && a(d, t) <= a(s, t) && b(s, d) <= b(s, t);
            }
            if (stable) {
                out.insert({static_cast<int>(s) + 1, static_cast<int>(t) + 1});
            }
        }
    }
    return out;
}

std::set<std::pair<int, int>> scan_candidates(const EquilibriumReport &report) {
    std::set<std::pair<int, int>> out;
    for (const auto &p : report.profiles) {
        if (p.verdict == Verdict::EquilibriumCandidate) {
            out.insert({p.classical_a, p.classical_b});
        }
    }
    return out;
}

} // namespace

TEST(MaximalGate, IsMaximallyEntangled) {
    EXPECT_LT(distance_to_maximal(build_gate(ewl_maximal()).j), 1e-12);
}

TEST(BestResponse, ClassicalDefectAgainstCooperate) {
    const PreparedGame pd(GameDefinition::prisoners_dilemma(GateParams::zero(2)));
    const auto u = build_classical_strategies(2);
    const BestResponse bob = best_response(pd, u[0], Player::Bob, {});
    EXPECT_NEAR(bob.payoff, 5.0, 1e-6);
    EXPECT_TRUE(bob.converged);
    const BestResponse alice = best_response(pd, u[0], Player::Alice, {});
    EXPECT_NEAR(alice.payoff, 5.0, 1e-6);
    EXPECT_NO_THROW(alice.strategy.validate());
}

TEST(BestResponse, CounterstrategyAtMaximalGate) {
    const PreparedGame pd(GameDefinition::prisoners_dilemma(ewl_maximal()));
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const BestResponse br = best_response(pd, haar_special_unitary(2, rng), Player::Bob, {});
        EXPECT_GE(br.payoff, 5.0 - 1e-3) << trial;
        EXPECT_LE(br.payoff, 5.0 + 1e-12);
    }
}

TEST(BestResponse, IterationDoesNotDecrease) {
    std::mt19937_64 rng(22);
    const GameDefinition def = GameDefinition::symmetric_game(random_payoffs(3, rng), GateParams::zero(3));
    const PreparedGame game(def);
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix opponent = haar_special_unitary(3, rng);
        BestResponseOptions options;
        options.budget = 600;
        const BestResponse first = best_response(game, opponent, Player::Alice, options);
        options.seed = 99;
        const BestResponse second = best_response(game, opponent, Player::Alice, options, &first.strategy.matrix);
        EXPECT_GE(second.payoff, first.payoff);
    }
}

TEST(BestResponse, Deterministic) {
    const PreparedGame pd(GameDefinition::prisoners_dilemma(ewl_maximal()));
    std::mt19937_64 rng(23);
    const ComplexMatrix opponent = haar_special_unitary(2, rng);
    BestResponseOptions options;
    options.seed = 17;
    const BestResponse a = best_response(pd, opponent, Player::Alice, options);
    const BestResponse b = best_response(pd, opponent, Player::Alice, options);
    EXPECT_EQ(a.payoff, b.payoff);
    EXPECT_EQ((a.strategy.matrix - b.strategy.matrix).norm(), 0.0);
    EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(BestResponse, BudgetIsRespected) {
    std::mt19937_64 rng(24);
    const PreparedGame game(GameDefinition::symmetric_game(random_payoffs(3, rng), GateParams::zero(3)));
    const ComplexMatrix opponent = haar_special_unitary(3, rng);
    for (int budget : {0, 3, 50, 300}) {
        BestResponseOptions options;
        options.budget = budget;
        const BestResponse br = best_response(game, opponent, Player::Bob, options);
        EXPECT_LE(br.evaluations, static_cast<std::size_t>(std::max(budget, 1)));
        if (budget < 8) {
            EXPECT_FALSE(br.converged) << budget;
        }
    }
}

TEST(BestResponse, RejectsBadOpponent) {
    const PreparedGame pd(GameDefinition::prisoners_dilemma(GateParams::zero(2)));
    EXPECT_THROW(best_response(pd, ComplexMatrix::Identity(3, 3), Player::Bob, {}), InvalidInput);
    EXPECT_THROW(best_response(pd, ComplexMatrix(2.0 * ComplexMatrix::Identity(2, 2)), Player::Bob, {}),
                 InvalidInput);
}

TEST(NashScan, ClassicalPrisonersDilemma) {
    const GameDefinition pd = GameDefinition::prisoners_dilemma(GateParams::zero(2));
    for (auto deviations : {DeviationSet::Classical, DeviationSet::Quantum}) {
        NashOptions options;
        options.deviations = deviations;
        const EquilibriumReport report = nash_scan(pd, SamplingSpec::classical(), options);
        EXPECT_EQ(report.profiles_examined, 4u);
        EXPECT_EQ(scan_candidates(report), (std::set<std::pair<int, int>>{{2, 2}}));
        for (const auto &p : report.profiles) {
            if (p.classical_a == 2 && p.classical_b == 2) {
                EXPECT_LE(p.gap_a, 1e-6);
                EXPECT_LE(p.gap_b, 1e-6);
                EXPECT_TRUE(p.classical_outcome);
            }
        }
    }
}

TEST(NashScan, EmptySpecGivesEmptyReport) {
    const GameDefinition pd = GameDefinition::prisoners_dilemma(GateParams::zero(2));
    const EquilibriumReport report = nash_scan(pd, SamplingSpec::explicit_profiles({}), {});
    EXPECT_EQ(report.profiles_examined, 0u);
    EXPECT_TRUE(report.profiles.empty());
    const EquilibriumReport none = nash_scan(pd, SamplingSpec::haar(0, 1), {});
    EXPECT_EQ(none.profiles_examined, 0u);
    EXPECT_THROW(nash_scan(pd, SamplingSpec::haar(-1, 1), {}), InvalidInput);
}

TEST(NashScan, MaximalGateRefutesSampledProfiles) {
    const GameDefinition pd = GameDefinition::prisoners_dilemma(ewl_maximal());
    const EquilibriumReport report = nash_scan(pd, SamplingSpec::haar(20, 3), {});
    EXPECT_EQ(report.profiles_examined, 20u);
    EXPECT_EQ(report.equilibrium_candidates(), 0u);
    for (const auto &p : report.profiles) {
        EXPECT_GT(p.best_response_gap(), 0.5);
        EXPECT_GE(p.gap_a, -1e-9);
        EXPECT_GE(p.gap_b, -1e-9);
    }
}

TEST(NashScanProperty, GapsNonnegative) {
    std::mt19937_64 rng(25);
    GateParams gate = GateParams::zero(3);
    gate.lambda << 0.8, -0.3;
    gate.mu(0, 1) = gate.mu(1, 0) = 1.1;
    const GameDefinition def = GameDefinition::symmetric_game(random_payoffs(3, rng), gate);
    NashOptions options;
    options.search.budget = 800;
    const EquilibriumReport report = nash_scan(def, SamplingSpec::haar(6, 4), options);
    for (const auto &p : report.profiles) {
        EXPECT_GE(p.gap_a, -1e-9);
        EXPECT_GE(p.gap_b, -1e-9);
    }
}

TEST(NashScanProperty, ClassicalConsistency) {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 2 + trial % 3;
        RealMatrix a = random_payoffs(n, rng);
        // round to small integers so ties (and several equilibria) occur
        a = a.unaryExpr([](double x) { return std::floor(x / 3.0); });
        const GameDefinition def = GameDefinition::symmetric_game(a, GateParams::zero(n));
        const auto expected = classical_equilibria(def.payoff_a, def.payoff_b);
        NashOptions classical;
        classical.deviations = DeviationSet::Classical;
        EXPECT_EQ(scan_candidates(nash_scan(def, SamplingSpec::classical(), classical)), expected) << trial;
        NashOptions quantum;
        quantum.search.budget = 1500;
        EXPECT_EQ(scan_candidates(nash_scan(def, SamplingSpec::classical(), quantum)), expected) << trial;
    }
}

TEST(Counterstrategy, MaximalGateTwoStrategies) {
    const GameDefinition pd = GameDefinition::prisoners_dilemma(ewl_maximal());
    const EquilibriumReport report = counterstrategy_check(pd, 30, 11, {});
    EXPECT_EQ(report.counterstrategy_records.size(), 30u);
    EXPECT_TRUE(report.counterstrategy_passed());
    EXPECT_TRUE(report.warnings.empty());
    for (const auto &r : report.counterstrategy_records) {
        EXPECT_DOUBLE_EQ(r.target, 5.0);
        EXPECT_NO_THROW(r.opponent.validate());
    }
}

TEST(Counterstrategy, MaximalGateThreeStrategies) {
    MaxEntanglementOptions search;
    search.seeds = 8;
    const auto found = find_maximal_entanglement(3, RealVector::Zero(3), search);
    ASSERT_TRUE(found.found());
    std::mt19937_64 rng(27);
    const GameDefinition def = GameDefinition::symmetric_game(random_payoffs(3, rng), found.solutions.front().params);
    const EquilibriumReport report = counterstrategy_check(def, 10, 12, {});
    EXPECT_TRUE(report.counterstrategy_passed());
}

TEST(Counterstrategy, UnentangledGateDiscriminates) {
    const GameDefinition pd = GameDefinition::prisoners_dilemma(GateParams::zero(2));
    const auto u = build_classical_strategies(2);
    const EquilibriumReport report = counterstrategy_check(pd, std::vector<ComplexMatrix>{u[1]}, {});
    ASSERT_EQ(report.counterstrategy_records.size(), 1u);
    EXPECT_NEAR(report.counterstrategy_records[0].achieved, 1.0, 1e-6);
    EXPECT_FALSE(report.counterstrategy_records[0].success);
    EXPECT_FALSE(report.counterstrategy_passed());
    EXPECT_EQ(report.warnings.size(), 1u);
}

TEST(Counterstrategy, EmptyAndInvalid) {
    const GameDefinition pd = GameDefinition::prisoners_dilemma(ewl_maximal());
    EXPECT_FALSE(counterstrategy_check(pd, 0, 1, {}).counterstrategy_passed());
    EXPECT_THROW(counterstrategy_check(pd, -1, 1, {}), InvalidInput);
}
