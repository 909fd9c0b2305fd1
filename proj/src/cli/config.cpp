#include "qgame/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <regex>

#include "qgame/cli/serialize.hpp"

namespace qgame::cli {

namespace {

using nlohmann::json;

std::string join(const std::string &path, const std::string &key) { return path.empty() ? key : path + "." + key; }

std::string at_index(const std::string &path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json *member(const json &obj, const std::string &key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void require_object(const json &j, const std::string &path) {
    if (!j.is_object()) {
        throw InvalidInput("expected an object", path);
    }
}

double as_number(const json &j, const std::string &path) {
    if (!j.is_number()) {
        throw InvalidInput("expected a number", path);
    }
    const double x = j.get<double>();
    if (!std::isfinite(x)) {
        throw InvalidInput("not finite", path);
    }
    return x;
}

long long as_integer(const json &j, const std::string &path) {
    if (!j.is_number_integer()) {
        throw InvalidInput("expected an integer", path);
    }
    return j.get<long long>();
}

int as_int_in(const json &j, const std::string &path, long long lo, long long hi) {
    const long long v = as_integer(j, path);
    if (v < lo || v > hi) {
        throw InvalidInput("must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                               std::to_string(v),
                           path);
    }
    return static_cast<int>(v);
}

double positive(double x, const std::string &path) {
    if (!(x > 0.0)) {
        throw InvalidInput("must be positive", path);
    }
    return x;
}

RealVector as_vector(const json &j, const std::string &path, Index expected) {
    if (!j.is_array()) {
        throw InvalidInput("expected an array", path);
    }
    if (static_cast<Index>(j.size()) != expected) {
        throw InvalidInput("expected " + std::to_string(expected) + " entries, got " + std::to_string(j.size()), path);
    }
    RealVector v(expected);
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Index>(i)) = as_number(j[i], at_index(path, i));
    }
    return v;
}

RealMatrix as_matrix(const json &j, const std::string &path, Index rows, Index cols) {
    if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
        throw InvalidInput("expected " + std::to_string(rows) + " rows", path);
    }
    RealMatrix m(rows, cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        m.row(static_cast<Index>(i)) = as_vector(j[i], at_index(path, i), cols).transpose();
    }
    return m;
}

std::string as_string(const json &j, const std::string &path) {
    if (!j.is_string()) {
        throw InvalidInput("expected a string", path);
    }
    return j.get<std::string>();
}

GateParams parse_gate(const json *j, int n) {
    GateParams params = GateParams::zero(n);
    if (j == nullptr) {
        return params;
    }
    require_object(*j, "gate");
    for (const auto &[key, value] : j->items()) {
        if (key != "lambda" && key != "mu" && key != "phi") {
            throw InvalidInput("unknown key", join("gate", key));
        }
    }
    if (const json *l = member(*j, "lambda")) {
        params.lambda = as_vector(*l, "gate.lambda", n - 1);
    }
    if (const json *m = member(*j, "mu")) {
        params.mu = as_matrix(*m, "gate.mu", n - 1, n - 1);
    }
    if (const json *p = member(*j, "phi")) {
        params.phi = as_vector(*p, "gate.phi", n);
    }
    try {
        params.validate();
    } catch (const InvalidInput &e) {
        const std::string what = e.what();
        const std::string prefix = e.field() + ": ";
        throw InvalidInput(what.substr(what.rfind(prefix, 0) == 0 ? prefix.size() : 0), join("gate", e.field()));
    }
    return params;
}

GameDefinition parse_game(const json &root, int n) {
    GateParams gate = parse_gate(member(root, "gate"), n);
    bool symmetric = true;
    if (const json *s = member(root, "symmetric")) {
        if (!s->is_boolean()) {
            throw InvalidInput("expected true or false", "symmetric");
        }
        symmetric = s->get<bool>();
    }
    const json *payoffs = member(root, "payoffs");
    if (payoffs == nullptr) {
        if (n != 2) {
            throw InvalidInput("required for N > 2", "payoffs");
        }
        return GameDefinition::prisoners_dilemma(std::move(gate));
    }
    require_object(*payoffs, "payoffs");
    if (member(*payoffs, "r") != nullptr) {
        if (n != 2) {
            throw InvalidInput("the r, s, t, p form needs N = 2", "payoffs");
        }
        double v[4];
        const char *keys[4] = {"r", "s", "t", "p"};
        for (int k = 0; k < 4; ++k) {
            const json *x = member(*payoffs, keys[k]);
            if (x == nullptr) {
                throw InvalidInput("missing", join("payoffs", keys[k]));
            }
            v[k] = as_number(*x, join("payoffs", keys[k]));
        }
        return GameDefinition::two_by_two(v[0], v[1], v[2], v[3], std::move(gate));
    }
    const json *alice = member(*payoffs, "alice");
    if (alice == nullptr) {
        throw InvalidInput("missing", "payoffs.alice");
    }
    GameDefinition game;
    game.n = n;
    game.gate = std::move(gate);
    game.symmetric = symmetric;
    game.payoff_a = as_matrix(*alice, "payoffs.alice", n, n);
    if (const json *bob = member(*payoffs, "bob")) {
        game.payoff_b = as_matrix(*bob, "payoffs.bob", n, n);
    } else if (symmetric) {
        game.payoff_b = game.payoff_a.transpose();
    } else {
        throw InvalidInput("required when the game is not symmetric", "payoffs.bob");
    }
    game.validate();
    return game;
}

StrategySpec parse_strategy(const json &j, const std::string &path, int n, const std::filesystem::path &base_dir) {
    StrategySpec spec;
    if (j.is_number_integer()) {
        spec.classical = as_int_in(j, path, 1, n);
        return spec;
    }
    require_object(j, path);
    if (const json *c = member(j, "classical")) {
        spec.classical = as_int_in(*c, join(path, "classical"), 1, n);
    } else if (const json *f = member(j, "file")) {
        std::filesystem::path file = as_string(*f, join(path, "file"));
        if (file.is_relative()) {
            file = base_dir / file;
        }
        spec.matrix = read_matrix_file(file.string());
    } else if (const json *m = member(j, "matrix")) {
        spec.matrix = matrix_from_json(*m, join(path, "matrix"));
    } else {
        throw InvalidInput("expected one of classical, file, matrix", path);
    }
    if (spec.matrix && spec.matrix->rows() != n) {
        throw InvalidInput("strategy must be " + std::to_string(n) + "x" + std::to_string(n), path);
    }
    return spec;
}

SweepAxis parse_axis(const json &j, const std::string &path, int n) {
    require_object(j, path);
    SweepAxis axis;
    const json *param = member(j, "param");
    if (param == nullptr) {
        throw InvalidInput("missing", join(path, "param"));
    }
    axis.name = as_string(*param, join(path, "param"));
    static const std::regex pattern(R"(^(lambda|phi)\[(\d+)\]$|^mu\[(\d+)\]\[(\d+)\]$)");
    std::smatch match;
    if (!std::regex_match(axis.name, match, pattern)) {
        throw InvalidInput("expected lambda[k], mu[k][l] or phi[s]", join(path, "param"));
    }
    if (match[1].matched) {
        axis.target = match[1] == "lambda" ? SweepAxis::Target::Lambda : SweepAxis::Target::Phi;
        axis.index = std::stoi(match[2]);
        const int limit = axis.target == SweepAxis::Target::Lambda ? n - 1 : n;
        if (axis.index >= limit) {
            throw InvalidInput("index out of range", join(path, "param"));
        }
    } else {
        axis.target = SweepAxis::Target::Mu;
        axis.index = std::stoi(match[3]);
        axis.second = std::stoi(match[4]);
        if (axis.index >= n - 1 || axis.second >= n - 1 || axis.index == axis.second) {
            throw InvalidInput("needs distinct indices below N-1", join(path, "param"));
        }
    }
    for (const char *key : {"start", "stop", "count"}) {
        if (member(j, key) == nullptr) {
            throw InvalidInput("missing", join(path, key));
        }
    }
    axis.start = as_number(j["start"], join(path, "start"));
    axis.stop = as_number(j["stop"], join(path, "stop"));
    axis.count = as_int_in(j["count"], join(path, "count"), 0, 100000);
    return axis;
}

int budget_field(const json &section, const std::string &path, const char *key, int fallback) {
    const json *b = member(section, key);
    return b == nullptr ? fallback : as_int_in(*b, join(path, key), 0, 100000000);
}

} // namespace

ComplexMatrix StrategySpec::resolve(const GameDefinition &game) const {
    if (matrix) {
        return *matrix;
    }
    return build_classical_strategies(game.n, game.gate.phi).at(static_cast<std::size_t>(classical - 1));
}

double SweepAxis::value(int k) const {
    if (count <= 1) {
        return start;
    }
    return start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1);
}

void SweepAxis::apply(GateParams &params, double x) const {
    switch (target) {
    case Target::Lambda:
        params.lambda(index) = x;
        break;
    case Target::Phi:
        params.phi(index) = x;
        break;
    case Target::Mu:
        params.mu(index, second) = x;
        params.mu(second, index) = x;
        break;
    }
}

std::uint64_t RunConfig::require_seed() const {
    if (!seed) {
        throw InvalidInput("required for commands that use randomness (config key or --seed)", "seed");
    }
    return *seed;
}

RunConfig parse_config(const json &j, const std::filesystem::path &base_dir) {
    require_object(j, "config");
    static const char *known[] = {"n", "gate", "payoffs", "symmetric", "seed", "tol", "strategies",
                                  "sweep", "search", "nash", "counter"};
    for (const auto &[key, value] : j.items()) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw InvalidInput("unknown key", key);
        }
    }
    const json *n_field = member(j, "n");
    if (n_field == nullptr) {
        throw InvalidInput("missing", "n");
    }
    const int n = as_int_in(*n_field, "n", 2, 64);

    RunConfig config{parse_game(j, n), std::nullopt, kExactTol, {}, {}, {}, {}, {}, {}};
    if (const json *s = member(j, "seed")) {
        if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0)) {
            throw InvalidInput("expected a nonnegative integer", "seed");
        }
        config.seed = s->get<std::uint64_t>();
    }
    if (const json *t = member(j, "tol")) {
        config.tol = positive(as_number(*t, "tol"), "tol");
    }
    if (const json *s = member(j, "strategies")) {
        require_object(*s, "strategies");
        if (const json *a = member(*s, "alice")) {
            config.alice = parse_strategy(*a, "strategies.alice", n, base_dir);
        }
        if (const json *b = member(*s, "bob")) {
            config.bob = parse_strategy(*b, "strategies.bob", n, base_dir);
        }
    }
    if (const json *s = member(j, "sweep")) {
        require_object(*s, "sweep");
        const json *axes = member(*s, "axes");
        if (axes == nullptr || !axes->is_array()) {
            throw InvalidInput("expected an array", "sweep.axes");
        }
        if (axes->empty() || axes->size() > 2) {
            throw InvalidInput("a sweep takes one or two axes, got " + std::to_string(axes->size()), "sweep.axes");
        }
        for (std::size_t i = 0; i < axes->size(); ++i) {
            config.sweep.axes.push_back(parse_axis((*axes)[i], at_index("sweep.axes", i), n));
        }
        if (const json *p = member(*s, "payoffs")) {
            if (!p->is_boolean()) {
                throw InvalidInput("expected true or false", "sweep.payoffs");
            }
            config.sweep.payoffs = p->get<bool>();
        }
    }
    if (const json *s = member(j, "search")) {
        require_object(*s, "search");
        config.search.seeds = budget_field(*s, "search", "seeds", config.search.seeds);
        config.search.budget = budget_field(*s, "search", "budget", config.search.budget);
    }
    if (const json *s = member(j, "nash")) {
        require_object(*s, "nash");
        if (const json *samples = member(*s, "samples")) {
            if (samples->is_string() && samples->get<std::string>() == "classical") {
                config.nash.samples = SamplingSpec::Kind::Classical;
            } else if (samples->is_object() && member(*samples, "haar") != nullptr) {
                config.nash.samples = SamplingSpec::Kind::Haar;
                config.nash.count = as_int_in((*samples)["haar"], "nash.samples.haar", 0, 10000000);
            } else {
                throw InvalidInput("expected \"classical\" or {\"haar\": count}", "nash.samples");
            }
        }
        if (const json *g = member(*s, "gap_tol")) {
            config.nash.gap_tol = positive(as_number(*g, "nash.gap_tol"), "nash.gap_tol");
        }
        if (const json *d = member(*s, "deviations")) {
            const std::string v = as_string(*d, "nash.deviations");
            if (v == "quantum") {
                config.nash.deviations = DeviationSet::Quantum;
            } else if (v == "classical") {
                config.nash.deviations = DeviationSet::Classical;
            } else {
                throw InvalidInput("expected quantum or classical", "nash.deviations");
            }
        }
        config.nash.budget = budget_field(*s, "nash", "budget", config.nash.budget);
        config.nash.random_starts = budget_field(*s, "nash", "random_starts", config.nash.random_starts);
    }
    if (const json *s = member(j, "counter")) {
        require_object(*s, "counter");
        config.counter.trials = budget_field(*s, "counter", "trials", config.counter.trials);
        config.counter.budget = budget_field(*s, "counter", "budget", config.counter.budget);
        config.counter.random_starts = budget_field(*s, "counter", "random_starts", config.counter.random_starts);
        if (const json *m = member(*s, "margin")) {
            config.counter.margin = positive(as_number(*m, "counter.margin"), "counter.margin");
        }
        if (const json *r = member(*s, "responder")) {
            const std::string v = as_string(*r, "counter.responder");
            if (v != "alice" && v != "bob") {
                throw InvalidInput("expected alice or bob", "counter.responder");
            }
            config.counter.responder = v == "alice" ? Player::Alice : Player::Bob;
        }
    }
    return config;
}

RunConfig load_config(const std::string &file) {
    std::ifstream in(file);
    if (!in) {
        throw InvalidInput("cannot open config file", file);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what(), file);
    }
    return parse_config(j, std::filesystem::path(file).parent_path());
}

} // namespace qgame::cli
