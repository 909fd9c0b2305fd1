#include "qgame/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qgame/cli/serialize.hpp"

namespace qgame::cli {

namespace {

void require_json(const CommandOptions &options, const char *command) {
    if (options.format != Format::Json) {
        throw InvalidInput(std::string("csv output is not available for ") + command, "format");
    }
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

Json verification_block(const GameDefinition &game, const Gate &gate, double tol) {
    const int n = game.n;
    const ComplexMatrix identity = ComplexMatrix::Identity(n, n);
    const ComplexMatrix vv = kron(gate.v, gate.v);
    const auto strategies = build_classical_strategies(n, game.gate.phi);
    const std::optional<std::vector<double>> phases =
        game.gate.phases_zero() ? std::nullopt : std::optional(classical_phases(n, game.gate.phi));
    const EmbeddingReport embedding = verify_embedding_conditions(gate.j, strategies, tol, phases);

    Json out;
    out["tol"] = tol;
    out["unitarity_J"] = unitarity_residual(gate.j);
    out["unitarity_J_tilde"] = unitarity_residual(gate.j_tilde);
    out["unitarity_V"] = unitarity_residual(gate.v);
    out["unitarity_U"] = unitarity_residual(gate.shift);
    out["commutator_J_1xU"] = commutator_norm(gate.j, kron(identity, gate.shift));
    out["commutator_J_Ux1"] = commutator_norm(gate.j, kron(gate.shift, identity));
    out["dft_conjugate_offdiagonal"] = off_diagonal_norm(vv.adjoint() * gate.j * vv);
    out["diagonalization_offdiagonal"] = off_diagonal_norm(gate.v.adjoint() * gate.shift * gate.v);
    out["embedding"] = embedding_to_json(embedding);
    bool passed = embedding.passed();
    for (const char *key : {"unitarity_J", "unitarity_J_tilde", "unitarity_V", "unitarity_U", "commutator_J_1xU",
                            "commutator_J_Ux1", "dft_conjugate_offdiagonal", "diagonalization_offdiagonal"}) {
        passed = passed && out[key].get<double>() <= tol;
    }
    out["passed"] = passed;
    return out;
}

std::string csv_line(const std::vector<std::string> &cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            line += ',';
        }
        line += cells[i];
    }
    return line + "\n";
}

BestResponseOptions search_options(int budget, int random_starts, std::uint64_t seed) {
    BestResponseOptions o;
    o.budget = budget;
    o.random_starts = random_starts;
    o.seed = seed;
    return o;
}

} // namespace

std::string cmd_build_gate(const RunConfig &config, const CommandOptions &options) {
    require_json(options, "build-gate");
    const GameDefinition &game = config.game;
    const Gate gate = build_gate(game.gate);
    Json out;
    out["n"] = game.n;
    out["params"] = params_to_json(game.gate);
    Json matrices;
    matrices["J"] = matrix_to_json(gate.j);
    matrices["J_tilde"] = matrix_to_json(gate.j_tilde);
    matrices["V"] = matrix_to_json(gate.v);
    matrices["U"] = matrix_to_json(gate.shift);
    Json strategies = Json::array();
    for (const auto &u : build_classical_strategies(game.n, game.gate.phi)) {
        strategies.push_back(matrix_to_json(u));
    }
    matrices["strategies"] = std::move(strategies);
    out["matrices"] = std::move(matrices);
    out["verification"] = verification_block(game, gate, config.tol);
    return dump(out);
}

std::string cmd_verify(const RunConfig &config, const CommandOptions &options) {
    require_json(options, "verify");
    const Gate gate = build_gate(config.game.gate);
    Json out;
    out["n"] = config.game.n;
    out["params"] = params_to_json(config.game.gate);
    out["verification"] = verification_block(config.game, gate, config.tol);
    return dump(out);
}

std::string cmd_play(const RunConfig &config, const CommandOptions &options) {
    require_json(options, "play");
    const GameDefinition &game = config.game;
    const ComplexMatrix u_a =
        options.alice_file.empty() ? config.alice.resolve(game) : read_matrix_file(options.alice_file);
    const ComplexMatrix u_b = options.bob_file.empty() ? config.bob.resolve(game) : read_matrix_file(options.bob_file);
    const PreparedGame prepared(game);
    const GameOutcome outcome = prepared.play(u_a, u_b, config.tol);
    Json out;
    out["n"] = game.n;
    out["outcome"] = outcome_to_json(outcome);
    return dump(out);
}

std::string cmd_table(const RunConfig &config, const CommandOptions &options) {
    const PayoffTable table = classical_embedding_table(config.game);
    const int n = config.game.n;
    if (options.format == Format::Csv) {
        std::string text = csv_line({"alice", "bob", "payoff_a", "payoff_b"});
        for (int s = 0; s < n; ++s) {
            for (int t = 0; t < n; ++t) {
                text += csv_line({std::to_string(s + 1), std::to_string(t + 1), format_double(table.alice(s, t)),
                                  format_double(table.bob(s, t))});
            }
        }
        return text;
    }
    Json out;
    out["n"] = n;
    out["alice"] = real_matrix_to_json(table.alice);
    out["bob"] = real_matrix_to_json(table.bob);
    out["max_deviation"] = table.max_deviation;
    out["matches_classical"] = table.max_deviation <= 1e-9;
    return dump(out);
}

std::string cmd_entangle(const RunConfig &config, const CommandOptions &options) {
    require_json(options, "entangle");
    const ComplexMatrix j = build_gate(config.game.gate).j;
    Json out = entanglement_to_json(analyze(j));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> other(reduced_density_matrix(j, Subsystem::A),
                                                       Eigen::EigenvaluesOnly);
    out["spectrum_trace_a"] = real_vector_to_json(other.eigenvalues().reverse());
    return dump(out);
}

std::string cmd_find_max_ent(const RunConfig &config, const CommandOptions &options) {
    require_json(options, "find-max-ent");
    MaxEntanglementOptions search;
    search.seeds = config.search.seeds;
    search.budget = config.search.budget;
    search.rng_seed = config.require_seed();
    const int n = config.game.n;
    const MaxEntanglementResult result = find_maximal_entanglement(n, config.game.gate.phi, search);
    Json out;
    out["n"] = n;
    out["phi"] = real_vector_to_json(config.game.gate.phi);
    out["seed"] = search.rng_seed;
    out["seeds"] = result.seeds_run;
    out["budget_per_seed"] = search.budget;
    out["evaluations"] = result.evaluations;
    out["found"] = result.found();
    out["best_distance"] = result.best_distance;
    Json solutions = Json::array();
    for (const auto &s : result.solutions) {
        Json row = params_to_json(s.params);
        row["distance"] = s.distance;
        solutions.push_back(std::move(row));
    }
    out["solutions"] = std::move(solutions);
    return dump(out);
}

std::string cmd_sweep(const RunConfig &config, const CommandOptions &options) {
    const auto &axes = config.sweep.axes;
    if (axes.empty()) {
        throw InvalidInput("missing sweep section", "sweep");
    }
    std::vector<std::string> columns;
    for (const auto &axis : axes) {
        columns.push_back(axis.name);
    }
    columns.insert(columns.end(), {"entropy", "distance_to_maximal"});
    if (config.sweep.payoffs) {
        columns.insert(columns.end(), {"payoff_a", "payoff_b"});
    }

    const int outer = axes[0].count;
    const int inner = axes.size() > 1 ? axes[1].count : 1;
    std::vector<std::vector<double>> rows;
    for (int a = 0; a < outer; ++a) {
        for (int b = 0; b < inner; ++b) {
            GameDefinition game = config.game;
            std::vector<double> row;
            axes[0].apply(game.gate, axes[0].value(a));
            row.push_back(axes[0].value(a));
            if (axes.size() > 1) {
                axes[1].apply(game.gate, axes[1].value(b));
                row.push_back(axes[1].value(b));
            }
            const ComplexMatrix j = build_gate(game.gate).j;
            const EntanglementReport report = analyze(j);
            row.push_back(report.entropy);
            row.push_back(report.distance_to_maximal);
            if (config.sweep.payoffs) {
                const GameOutcome outcome =
                    PreparedGame(game, j).play(config.alice.resolve(game), config.bob.resolve(game), config.tol);
                row.push_back(outcome.payoff_a);
                row.push_back(outcome.payoff_b);
            }
            rows.push_back(std::move(row));
        }
    }

    if (options.format == Format::Json) {
        Json out;
        out["columns"] = columns;
        out["rows"] = rows;
        return dump(out);
    }
    std::string text = csv_line(columns);
    for (const auto &row : rows) {
        std::vector<std::string> cells;
        std::transform(row.begin(), row.end(), std::back_inserter(cells), format_double);
        text += csv_line(cells);
    }
    return text;
}

std::string cmd_nash(const RunConfig &config, const CommandOptions &options) {
    const NashSpec &spec = config.nash;
    const bool random = spec.samples == SamplingSpec::Kind::Haar || spec.deviations == DeviationSet::Quantum;
    const std::uint64_t seed = random ? config.require_seed() : config.seed.value_or(0);
    const SamplingSpec sampling =
        spec.samples == SamplingSpec::Kind::Haar ? SamplingSpec::haar(spec.count, seed) : SamplingSpec::classical();
    NashOptions nash;
    nash.gap_tol = spec.gap_tol;
    nash.deviations = spec.deviations;
    // offset so the profile sampler and the best-response starts use different streams
    nash.search = search_options(spec.budget, spec.random_starts, seed + 0x9e3779b97f4a7c15ULL);
    const EquilibriumReport report = nash_scan(config.game, sampling, nash);
    if (options.format == Format::Csv) {
        std::string text = csv_line({"index", "classical_a", "classical_b", "payoff_a", "payoff_b", "gap_a", "gap_b",
                                     "verdict", "classical_outcome", "converged"});
        for (const auto &p : report.profiles) {
            text += csv_line({std::to_string(p.index), std::to_string(p.classical_a), std::to_string(p.classical_b),
                              format_double(p.payoff_a), format_double(p.payoff_b), format_double(p.gap_a),
                              format_double(p.gap_b),
                              p.verdict == Verdict::EquilibriumCandidate ? "equilibrium-candidate" : "refuted",
                              p.classical_outcome ? "1" : "0", p.converged ? "1" : "0"});
        }
        return text;
    }
    Json out;
    out["n"] = config.game.n;
    out["report"] = equilibrium_to_json(report);
    return dump(out);
}

std::string cmd_counter(const RunConfig &config, const CommandOptions &options) {
    const CounterSpec &spec = config.counter;
    const std::uint64_t seed = config.require_seed();
    CounterOptions counter;
    counter.responder = spec.responder;
    counter.margin = spec.margin;
    counter.search = search_options(spec.budget, spec.random_starts, seed + 0x9e3779b97f4a7c15ULL);
    const EquilibriumReport report = counterstrategy_check(config.game, spec.trials, seed, counter);
    if (options.format == Format::Csv) {
        std::string text = csv_line({"trial", "achieved", "target", "success", "converged"});
        for (const auto &r : report.counterstrategy_records) {
            text += csv_line({std::to_string(r.trial), format_double(r.achieved), format_double(r.target),
                              r.success ? "1" : "0", r.converged ? "1" : "0"});
        }
        return text;
    }
    Json out;
    out["n"] = config.game.n;
    out["report"] = equilibrium_to_json(report);
    return dump(out);
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum N-strategy game toolkit: gate construction, play, entanglement and equilibrium probes"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_path;
    std::string format_name;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    app.add_option("--config", config_path, "Run configuration (JSON)")->required();
    app.add_option("--out", out_path, "Output file; written atomically. Defaults to stdout");
    app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", seed, "RNG seed, overrides the config");
    app.add_option("--tol", tol, "Verification tolerance, overrides the config");

    using Handler = std::string (*)(const RunConfig &, const CommandOptions &);
    struct Entry {
        const char *name;
        const char *help;
        Handler handler;
        Format default_format;
    };
    const Entry entries[] = {
        {"build-gate", "Construct U, V, J~, J and the classical strategies, with checks", cmd_build_gate, Format::Json},
        {"verify", "Check unitarity, shift commutation and the classical embedding", cmd_verify, Format::Json},
        {"play", "Play one strategy pair and report probabilities and payoffs", cmd_play, Format::Json},
        {"table", "Payoffs of every classical strategy pair on the quantum game", cmd_table, Format::Json},
        {"entangle", "Reduced density matrix spectrum and entropy of the initial state", cmd_entangle, Format::Json},
        {"find-max-ent", "Search gate parameters for a maximally entangled initial state", cmd_find_max_ent,
         Format::Json},
        {"sweep", "Entanglement over a one- or two-axis grid of gate parameters", cmd_sweep, Format::Csv},
        {"nash-scan", "Best-response gaps over sampled pure strategy profiles", cmd_nash, Format::Json},
        {"counter-check", "Counterstrategy search against Haar-random opponents", cmd_counter, Format::Json},
    };
    std::vector<std::pair<CLI::App *, const Entry *>> subcommands;
    CommandOptions options;
    for (const auto &entry : entries) {
        CLI::App *sub = app.add_subcommand(entry.name, entry.help);
        if (std::string(entry.name) == "play") {
            sub->add_option("--alice", options.alice_file, "Alice's strategy matrix file");
            sub->add_option("--bob", options.bob_file, "Bob's strategy matrix file");
        }
        subcommands.emplace_back(sub, &entry);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInvalidInput;
    }

    const Entry *chosen = nullptr;
    for (const auto &[sub, entry] : subcommands) {
        if (sub->parsed()) {
            chosen = entry;
        }
    }
    try {
        RunConfig config = load_config(config_path);
        if (seed) {
            config.seed = seed;
        }
        if (tol) {
            if (!(*tol > 0.0)) {
                throw InvalidInput("must be positive", "--tol");
            }
            config.tol = *tol;
        }
        options.format = format_name.empty() ? chosen->default_format
                                             : (format_name == "csv" ? Format::Csv : Format::Json);
        const std::string text = chosen->handler(config, options);
        if (out_path.empty()) {
            out << text;
        } else {
            write_atomically(out_path, text);
        }
        return kSuccess;
    } catch (const InvalidInput &e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

} // namespace qgame::cli
