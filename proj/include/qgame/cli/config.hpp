#pragma once

// Run configuration read from a JSON file. Every schema error is raised as
// InvalidInput carrying the dotted field path, e.g. "gate.mu[0][1]".

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgame/equilibrium.hpp"
#include "qgame/game.hpp"

namespace qgame::cli {

/// A player's strategy: a classical label (one-based) or an explicit matrix.
struct StrategySpec {
    int classical = 1;
    std::optional<ComplexMatrix> matrix;

    ComplexMatrix resolve(const GameDefinition &game) const;
};

struct SweepAxis {
    enum class Target { Lambda, Mu, Phi };
    std::string name;
    Target target = Target::Lambda;
    int index = 0;
    int second = 0;  ///< column for mu entries
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    double value(int k) const;
    void apply(GateParams &params, double x) const;
};

struct SweepSpec {
    std::vector<SweepAxis> axes;
    bool payoffs = false;
};

struct SearchSpec {
    int seeds = 16;
    int budget = 2000;
};

struct NashSpec {
    SamplingSpec::Kind samples = SamplingSpec::Kind::Classical;
    int count = 0;
    double gap_tol = kDefaultGapTol;
    DeviationSet deviations = DeviationSet::Quantum;
    int budget = 4000;
    int random_starts = 4;
};

struct CounterSpec {
    int trials = 100;
    Player responder = Player::Bob;
    double margin = kCounterstrategyMargin;
    int budget = 4000;
    int random_starts = 4;
};

struct RunConfig {
    GameDefinition game;
    std::optional<std::uint64_t> seed;
    double tol = kExactTol;
    StrategySpec alice;
    StrategySpec bob;
    SweepSpec sweep;
    SearchSpec search;
    NashSpec nash;
    CounterSpec counter;

    /// The seed, or InvalidInput("seed") when randomness needs one and none was given.
    std::uint64_t require_seed() const;
};

/// `base_dir` resolves relative strategy file references.
RunConfig parse_config(const nlohmann::json &j, const std::filesystem::path &base_dir = {});
RunConfig load_config(const std::string &file);

} // namespace qgame::cli
