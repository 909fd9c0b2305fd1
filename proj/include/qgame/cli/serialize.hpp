#pragma once

// JSON and CSV encodings for matrices, states and reports.
//
// Matrix files: {"dim": n, "entries": [[re, im], ...]} with n*n entries in
// row-major order. Doubles are written in shortest round-trip form.

#include <string>

#include <json.hpp>

#include "qgame/entanglement.hpp"
#include "qgame/equilibrium.hpp"
#include "qgame/game.hpp"

namespace qgame::cli {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const ComplexMatrix &m);
/// Throws InvalidInput naming `path` when the object does not parse to a square matrix.
ComplexMatrix matrix_from_json(const nlohmann::json &j, const std::string &path);

ComplexMatrix read_matrix_file(const std::string &file);

Json state_to_json(const StateVector &psi);
Json real_matrix_to_json(const RealMatrix &m);
Json real_vector_to_json(const RealVector &v);
Json params_to_json(const GateParams &params);

Json outcome_to_json(const GameOutcome &outcome);
Json entanglement_to_json(const EntanglementReport &report);
Json embedding_to_json(const EmbeddingReport &report);
Json equilibrium_to_json(const EquilibriumReport &report);

/// %.17g
std::string format_double(double x);

/// Writes through a sibling temporary file and renames it into place.
void write_atomically(const std::string &path, const std::string &contents);

} // namespace qgame::cli
