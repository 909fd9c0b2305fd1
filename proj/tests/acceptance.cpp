// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qgame/entanglement.hpp"
#include "qgame/equilibrium.hpp"
#include "qgame/game.hpp"

using namespace qgame;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

GateParams random_params(int n, std::mt19937_64 &rng, bool with_phases) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    GateParams p = GateParams::zero(n);
    for (int k = 0; k < n - 1; ++k) {
        p.lambda(k) = u(rng);
        for (int l = k + 1; l < n - 1; ++l) {
            p.mu(k, l) = p.mu(l, k) = u(rng);
        }
    }
    if (with_phases) {
        for (int s = 0; s < n; ++s) {
            p.phi(s) = u(rng);
        }
    }
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

RealVector ewl_phi() {
    RealVector phi(2);
    phi << kPi, 0.0;
    return phi;
}

// exp(i gamma/2 D(x)D) through the eigendecomposition of the Hermitian generator
ComplexMatrix ewl_reference(double gamma) {
    const ComplexMatrix dd = kron(ewl_defect(), ewl_defect());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * gamma * dd);
    ComplexVector phases(4);
    for (int k = 0; k < 4; ++k) {
        phases(k) = std::polar(1.0, es.eigenvalues()(k));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Criterion construction_validity() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    double unitarity = 0.0, commutator = 0.0, offdiag = 0.0;
    for (int n = 2; n <= 6; ++n) {
        const ComplexMatrix identity = ComplexMatrix::Identity(n, n);
        for (int trial = 0; trial < 100; ++trial) {
            const Gate g = build_gate(random_params(n, rng, trial % 2 == 1));
            unitarity = std::max(unitarity, unitarity_residual(g.j));
            commutator = std::max({commutator, commutator_norm(g.j, kron(identity, g.shift)),
                                   commutator_norm(kron(g.shift, identity), g.j)});
            const ComplexMatrix vv = kron(g.v, g.v);
            offdiag = std::max(offdiag, off_diagonal_norm(ComplexMatrix(vv.adjoint() * g.j * vv)));
        }
    }
    const double elapsed = seconds_since(start);
    return {unitarity < 1e-10 && commutator < 1e-10 && offdiag < 1e-10 && elapsed < 60.0,
            fmt("500 gates, max unitarity %.2e, commutator %.2e, off-diagonal %.2e, %.1f s", unitarity, commutator,
                offdiag, elapsed)};
}

Criterion shift_identities() {
    double power = 0.0, det = 0.0;
    for (int n = 2; n <= 8; ++n) {
        const ComplexMatrix u = build_shift(n);
        ComplexMatrix un = ComplexMatrix::Identity(n, n);
        for (int k = 0; k < n; ++k) {
            un = un * u;
        }
        power = std::max(power, (un - ComplexMatrix::Identity(n, n)).norm());
        det = std::max(det, std::abs(u.determinant() - std::pow(-1.0, n - 1)));
    }
    return {power < 1e-12 && det < 1e-12, fmt("N=2..8, max |U^N - 1| %.2e, max |det U - (-1)^(N-1)| %.2e", power, det)};
}

Criterion classical_embedding() {
    std::mt19937_64 rng(7);
    double worst_mass = 1.0, worst_table = 0.0;
    for (int n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const GameDefinition def = GameDefinition::symmetric_game(random_payoffs(n, rng), random_params(n, rng, false));
            const PreparedGame game(def);
            const auto u = build_classical_strategies(n);
            for (int s = 0; s < n; ++s) {
                for (int t = 0; t < n; ++t) {
                    worst_mass = std::min(worst_mass, game.play(u[s], u[t]).probabilities(s, t));
                }
            }
            const PayoffTable table = classical_embedding_table(def);
            worst_table = std::max({worst_table, (table.alice - def.payoff_a).cwiseAbs().maxCoeff(),
                                    (table.bob - def.payoff_b).cwiseAbs().maxCoeff()});
        }
    }
    return {worst_mass >= 1.0 - 1e-10 && worst_table <= 1e-9,
            fmt("N=2,3,4 x 20 gates, min mass on |s s'> 1 - %.2e, max table deviation %.2e", 1.0 - worst_mass,
                worst_table)};
}

Criterion ewl_recovery() {
    const fs::path file = fs::path(QGAME_FIXTURES) / "ewl_calibration.json";
    std::ifstream in(file);
    if (!in) {
        return {false, "missing fixture " + file.string()};
    }
    const auto doc = nlohmann::json::parse(in);
    const auto &points = doc["points"];
    GateParams p = GateParams::zero(2);
    p.phi = ewl_phi();
    double worst = 0.0, lo = 1e300, hi = -1e300;
    for (const auto &point : points) {
        const double gamma = point["gamma"].get<double>();
        p.lambda(0) = point["lambda"].get<double>();
        worst = std::max(worst, phase_stripped_distance(build_gate(p).j, ewl_reference(gamma)));
        lo = std::min(lo, gamma);
        hi = std::max(hi, gamma);
    }
    const bool coverage = points.size() == 20 && lo <= 1e-12 && hi >= kPi - 1e-12;
    return {coverage && worst < 1e-8,
            fmt("%zu calibrated gamma in [%.3f, %.3f], max phase-stripped distance %.2e", points.size(), lo, hi, worst)};
}

Criterion parameter_count() {
    bool ok = true;
    for (int n = 2; n <= 8; ++n) {
        const GateParams p = GateParams::zero(n);
        const Index independent = p.lambda.size() + (n - 1) * (n - 2) / 2;
        const Index expected = n * (n - 1) / 2;
        ok = ok && independent == expected && p.packed().size() == expected &&
             GateParams::free_parameter_count(n) == expected && p.mu.rows() == n - 1 && p.mu.cols() == n - 1;
    }
    return {ok, "N=2..8 expose lambda (N-1) plus strict upper mu ((N-1)(N-2)/2) = N(N-1)/2 reals"};
}

struct MaximalGates {
    bool two_found = false;
    bool three_found = false;
    GateParams two;
    GateParams three;
    double two_distance = 1.0;
    double three_distance = 1.0;
    double ewl_match = 1e300;
    std::size_t three_count = 0;
};

MaximalGates search_maximal() {
    MaximalGates out;
    const MaxEntanglementResult two = find_maximal_entanglement(2, ewl_phi(), {});
    for (const auto &s : two.solutions) {
        const ComplexMatrix j = build_gate(s.params).j;
        const double match = phase_invariant_distance(j, ewl_reference(kPi / 2.0));
        if (match < out.ewl_match) {
            out.ewl_match = match;
            out.two = s.params;
            out.two_distance = distance_to_maximal(j);
            out.two_found = true;
        }
    }
    MaxEntanglementOptions options;
    options.seeds = 32;
    const MaxEntanglementResult three = find_maximal_entanglement(3, RealVector::Zero(3), options);
    out.three_count = three.solutions.size();
    if (three.found()) {
        out.three = three.solutions.front().params;
        out.three_distance = distance_to_maximal(build_gate(out.three).j);
        out.three_found = true;
    }
    return out;
}

Criterion maximal_entanglement(const MaximalGates &m) {
    const bool pass = m.two_found && m.two_distance < 1e-8 && m.ewl_match < 1e-6 && m.three_found &&
                      m.three_distance < 1e-8;
    return {pass, fmt("N=2 distance %.2e, match to EWL J(pi/2) %.2e; N=3 %zu solutions, distance %.2e",
                      m.two_distance, m.ewl_match, m.three_count, m.three_distance)};
}

Criterion counterstrategy(const MaximalGates &m) {
    if (!m.two_found || !m.three_found) {
        return {false, "no maximally entangled gate available"};
    }
    const auto start = std::chrono::steady_clock::now();
    const GameDefinition pd = GameDefinition::prisoners_dilemma(m.two);
    const EquilibriumReport two = counterstrategy_check(pd, 100, 101, {});
    std::mt19937_64 rng(303);
    const GameDefinition game3 = GameDefinition::symmetric_game(random_payoffs(3, rng), m.three);
    const EquilibriumReport three = counterstrategy_check(game3, 50, 202, {});
    const double elapsed = seconds_since(start);
    double worst2 = 1e300, worst3 = 1e300;
    for (const auto &r : two.counterstrategy_records) {
        worst2 = std::min(worst2, r.achieved - r.target);
    }
    for (const auto &r : three.counterstrategy_records) {
        worst3 = std::min(worst3, r.achieved - r.target);
    }
    const bool pass = two.counterstrategy_successes() == 100 && three.counterstrategy_successes() == 50 &&
                      two.warnings.empty() && three.warnings.empty() && elapsed < 300.0;
    return {pass, fmt("N=2 PD %zu/100 (worst shortfall %.2e), N=3 %zu/50 (worst %.2e), %.1f s",
                      two.counterstrategy_successes(), -worst2, three.counterstrategy_successes(), -worst3, elapsed)};
}

Criterion no_pure_nash(const MaximalGates &m) {
    if (!m.two_found) {
        return {false, "no maximally entangled gate available"};
    }
    const GameDefinition pd = GameDefinition::prisoners_dilemma(m.two);
    NashOptions options;
    options.gap_tol = 1e-6;
    const EquilibriumReport sampled = nash_scan(pd, SamplingSpec::haar(200, 404), options);
    double min_gap = 1e300;
    for (const auto &p : sampled.profiles) {
        min_gap = std::min(min_gap, p.best_response_gap());
    }

    NashOptions classical;
    classical.deviations = DeviationSet::Classical;
    const EquilibriumReport table =
        nash_scan(GameDefinition::prisoners_dilemma(GateParams::zero(2)), SamplingSpec::classical(), classical);
    std::set<std::pair<int, int>> candidates;
    for (const auto &p : table.profiles) {
        if (p.verdict == qgame::Verdict::EquilibriumCandidate) {
            candidates.insert({p.classical_a, p.classical_b});
        }
    }
    const bool pass = sampled.profiles_examined == 200 && sampled.equilibrium_candidates() == 0 &&
                      candidates == std::set<std::pair<int, int>>{{2, 2}};
    return {pass, fmt("200 Haar profiles: %zu candidates, min gap %.3f; classical table candidates: %zu (U2,U2)=%s",
                      sampled.equilibrium_candidates(), min_gap, candidates.size(),
                      candidates.count({2, 2}) ? "yes" : "no")};
}

Criterion reproducibility() {
    const fs::path dir = fs::temp_directory_path() / "qgame_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path config = dir / "run.json";
    std::ofstream(config) << R"({
  "n": 2,
  "gate": {"lambda": [2.356194490192345], "phi": [3.141592653589793, 0.0]},
  "payoffs": {"r": 3, "s": 0, "t": 5, "p": 1},
  "seed": 11,
  "strategies": {"alice": 1, "bob": 2},
  "sweep": {"axes": [{"param": "lambda[0]", "start": 0, "stop": 3.14, "count": 9},
                     {"param": "phi[0]", "start": 0, "stop": 3.14, "count": 4}], "payoffs": true},
  "search": {"seeds": 4},
  "nash": {"samples": {"haar": 4}},
  "counter": {"trials": 4}
})";
    const char *commands[] = {"build-gate", "verify", "play", "table", "entangle",
                              "find-max-ent", "sweep", "nash-scan", "counter-check"};
    int identical = 0;
    std::string failures;
    for (const char *command : commands) {
        std::string contents[2];
        bool ok = true;
        for (int k = 0; k < 2; ++k) {
            const fs::path out = dir / (std::string(command) + std::to_string(k));
            const std::string line = std::string(QGAME_EXE) + " --config " + config.string() + " --out " +
                                     out.string() + " " + command + " 2>/dev/null";
            ok = ok && std::system(line.c_str()) == 0;
            std::ifstream in(out, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            contents[k] = ss.str();
        }
        if (ok && !contents[0].empty() && contents[0] == contents[1]) {
            ++identical;
        } else {
            failures += std::string(" ") + command;
        }
    }
    fs::remove_all(dir);
    return {identical == 9, fmt("%d/9 commands byte-identical on rerun%s", identical,
                                failures.empty() ? "" : (";" + failures).c_str())};
}

} // namespace

int main() {
    int failed = 0;
    auto report = [&](int id, const char *name, const Criterion &v) {
        std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    };
    report(1, "construction validity", construction_validity());
    report(2, "shift identities", shift_identities());
    report(3, "classical embedding", classical_embedding());
    report(4, "EWL recovery", ewl_recovery());
    report(5, "parameter count", parameter_count());
    const MaximalGates maximal = search_maximal();
    report(6, "maximal entanglement", maximal_entanglement(maximal));
    report(7, "counterstrategy", counterstrategy(maximal));
    report(8, "no pure Nash", no_pure_nash(maximal));
    report(9, "reproducibility", reproducibility());
    std::printf("%d/9 criteria passed\n", 9 - failed);
    return failed == 0 ? 0 : 1;
}
