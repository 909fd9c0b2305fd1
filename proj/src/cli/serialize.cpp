#include "qgame/cli/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qgame::cli {

namespace {

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

const char *player_name(Player p) { return p == Player::Alice ? "alice" : "bob"; }

} // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json matrix_to_json(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) {
        throw InvalidInput("only square matrices are serialized");
    }
    Json entries = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            entries.push_back(complex_pair(m(i, j)));
        }
    }
    Json out;
    out["dim"] = m.rows();
    out["entries"] = std::move(entries);
    return out;
}

ComplexMatrix matrix_from_json(const nlohmann::json &j, const std::string &path) {
    if (!j.is_object()) {
        throw InvalidInput("expected an object with dim and entries", path);
    }
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() <= 0) {
        throw InvalidInput("missing or invalid positive integer", path + ".dim");
    }
    const auto dim = static_cast<Index>(j["dim"].get<long long>());
    if (dim > kMaxDimension) {
        throw InvalidInput("dimension exceeds cap", path + ".dim");
    }
    if (!j.contains("entries") || !j["entries"].is_array()) {
        throw InvalidInput("missing array", path + ".entries");
    }
    const auto &entries = j["entries"];
    if (static_cast<Index>(entries.size()) != dim * dim) {
        throw InvalidInput("expected " + std::to_string(dim * dim) + " entries, got " + std::to_string(entries.size()),
                           path + ".entries");
    }
    ComplexMatrix m(dim, dim);
    for (Index k = 0; k < dim * dim; ++k) {
        const auto &e = entries[static_cast<std::size_t>(k)];
        const std::string here = path + ".entries[" + std::to_string(k) + "]";
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw InvalidInput("expected [re, im]", here);
        }
        const double re = e[0].get<double>();
        const double im = e[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im)) {
            throw InvalidInput("not finite", here);
        }
        m(k / dim, k % dim) = Complex{re, im};
    }
    return m;
}

ComplexMatrix read_matrix_file(const std::string &file) {
    std::ifstream in(file);
    if (!in) {
        throw InvalidInput("cannot open matrix file", file);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what(), file);
    }
    return matrix_from_json(j, file);
}

Json state_to_json(const StateVector &psi) {
    Json amps = Json::array();
    for (Index i = 0; i < psi.dim(); ++i) {
        amps.push_back(complex_pair(psi[i]));
    }
    Json out;
    out["dim"] = psi.dim();
    out["amplitudes"] = std::move(amps);
    return out;
}

Json real_matrix_to_json(const RealMatrix &m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json real_vector_to_json(const RealVector &v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

Json params_to_json(const GateParams &params) {
    Json out;
    out["n"] = params.n;
    out["lambda"] = real_vector_to_json(params.lambda);
    out["mu"] = real_matrix_to_json(params.mu);
    out["phi"] = real_vector_to_json(params.phi);
    return out;
}

Json outcome_to_json(const GameOutcome &outcome) {
    Json out;
    out["payoff_a"] = outcome.payoff_a;
    out["payoff_b"] = outcome.payoff_b;
    out["probabilities"] = real_matrix_to_json(outcome.probabilities);
    out["final_state"] = state_to_json(outcome.final_state);
    return out;
}

Json entanglement_to_json(const EntanglementReport &report) {
    Json out;
    out["n"] = report.n;
    out["spectrum"] = real_vector_to_json(report.spectrum);
    out["entropy"] = report.entropy;
    out["max_entropy"] = std::log(static_cast<double>(report.n));
    out["distance_to_maximal"] = report.distance_to_maximal;
    out["maximally_entangled"] = report.distance_to_maximal < kEigenTol;
    out["degeneracy_pattern"] = report.degeneracy_pattern;
    out["reduced_density_matrix"] = matrix_to_json(report.reduced);
    return out;
}

Json embedding_to_json(const EmbeddingReport &report) {
    Json out;
    out["tol"] = report.tol;
    out["commutator_norms"] = real_matrix_to_json(report.commutator_norms);
    out["condition_i_residuals"] = real_vector_to_json(report.condition_i_residuals);
    out["condition_i_passed"] = report.condition_i_passed;
    out["condition_i_informational"] = report.condition_i_informational;
    out["condition_ii_passed"] = report.condition_ii_passed;
    out["passed"] = report.passed();
    return out;
}

Json equilibrium_to_json(const EquilibriumReport &report) {
    Json out;
    out["profiles_examined"] = report.profiles_examined;
    out["gap_tol"] = report.gap_tol;
    out["converged"] = report.all_converged();
    out["warnings"] = report.warnings;
    if (!report.profiles.empty() || report.counterstrategy_records.empty()) {
        out["equilibrium_candidates"] = report.equilibrium_candidates();
        out["nontrivial_candidates"] = report.nontrivial_candidates();
        Json profiles = Json::array();
        for (const auto &p : report.profiles) {
            Json row;
            row["index"] = p.index;
            if (p.classical_a > 0) {
                row["classical"] = Json::array({p.classical_a, p.classical_b});
            }
            row["payoff_a"] = p.payoff_a;
            row["payoff_b"] = p.payoff_b;
            row["gap_a"] = p.gap_a;
            row["gap_b"] = p.gap_b;
            row["best_response_gap"] = p.best_response_gap();
            row["verdict"] = p.verdict == Verdict::EquilibriumCandidate ? "equilibrium-candidate" : "refuted";
            row["classical_outcome"] = p.classical_outcome;
            row["converged"] = p.converged;
            profiles.push_back(std::move(row));
        }
        out["profiles"] = std::move(profiles);
    }
    if (!report.counterstrategy_records.empty()) {
        out["responder"] = player_name(report.responder);
        out["successes"] = report.counterstrategy_successes();
        out["trials"] = report.counterstrategy_records.size();
        out["passed"] = report.counterstrategy_passed();
        Json records = Json::array();
        for (const auto &r : report.counterstrategy_records) {
            Json row;
            row["trial"] = r.trial;
            row["opponent"] = matrix_to_json(r.opponent.matrix);
            row["opponent_parameters"] = real_vector_to_json(r.opponent.parameters);
            row["achieved"] = r.achieved;
            row["target"] = r.target;
            row["success"] = r.success;
            row["converged"] = r.converged;
            records.push_back(std::move(row));
        }
        out["counterstrategy_records"] = std::move(records);
    }
    return out;
}

void write_atomically(const std::string &path, const std::string &contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + temp.string() + " for writing");
        }
        out << contents;
        out.flush();
        if (!out) {
            throw std::runtime_error("write to " + temp.string() + " failed");
        }
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        fs::remove(temp);
        throw std::runtime_error("cannot move output into place at " + path + ": " + ec.message());
    }
}

} // namespace qgame::cli
