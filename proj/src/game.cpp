#include "qgame/game.hpp"

#include <algorithm>
#include <cmath>

namespace qgame {

namespace {

ComplexMatrix to_grid(const ComplexVector &psi, int n) {
    ComplexMatrix grid(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            grid(j, k) = psi(j * n + k);
        }
    }
    return grid;
}

ComplexVector from_grid(const ComplexMatrix &grid) {
    const Index n = grid.rows();
    ComplexVector psi(n * n);
    for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
            psi(j * n + k) = grid(j, k);
        }
    }
    return psi;
}

} // namespace

GameDefinition GameDefinition::symmetric_game(RealMatrix payoff_a, GateParams gate) {
    GameDefinition g;
    g.n = gate.n;
    g.payoff_b = payoff_a.transpose();
    g.payoff_a = std::move(payoff_a);
    g.gate = std::move(gate);
    g.symmetric = true;
    g.validate();
    return g;
}

GameDefinition GameDefinition::two_by_two(double r, double s, double t, double p, GateParams gate) {
    if (gate.n != 2) {
        throw InvalidInput("the (r, s, t, p) form needs N = 2", "gate.n");
    }
    RealMatrix a(2, 2);
    a << r, s, t, p;
    return symmetric_game(std::move(a), std::move(gate));
}

GameDefinition GameDefinition::prisoners_dilemma(GateParams gate) {
    return two_by_two(3.0, 0.0, 5.0, 1.0, std::move(gate));
}

void GameDefinition::validate() const {
    gate.validate();
    if (gate.n != n) {
        throw InvalidInput("gate is for N = " + std::to_string(gate.n) + " but the game has N = " + std::to_string(n),
                           "gate.n");
    }
    for (const auto *m : {&payoff_a, &payoff_b}) {
        const char *name = m == &payoff_a ? "payoffs.alice" : "payoffs.bob";
        if (m->rows() != n || m->cols() != n) {
            throw InvalidInput("expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix", name);
        }
        if (!m->allFinite()) {
            throw InvalidInput("payoffs must be finite", name);
        }
    }
    if (symmetric && payoff_b != payoff_a.transpose()) {
        throw InvalidInput("symmetric game requires Bob's payoffs to be the transpose of Alice's", "payoffs.bob");
    }
}

StateVector initial_state(const ComplexMatrix &j) {
    require_unitary(j, kExactTol, "J");
    return StateVector(j.col(0));
}

ComplexMatrix ewl_defect() {
    ComplexMatrix d(2, 2);
    d << 0.0, 1.0, -1.0, 0.0;
    return d;
}

ComplexMatrix ewl_gate(double gamma) {
    const ComplexMatrix d = ewl_defect();
    return std::cos(gamma / 2.0) * ComplexMatrix::Identity(4, 4) +
           Complex{0.0, std::sin(gamma / 2.0)} * kron(d, d);
}

PreparedGame::PreparedGame(GameDefinition definition)
    : PreparedGame(definition, build_gate(definition.gate).j) {}

PreparedGame::PreparedGame(GameDefinition definition, ComplexMatrix j)
    : definition_(std::move(definition)), j_(std::move(j)), initial_(initial_state(j_)) {
    definition_.validate();
    const Index dim = static_cast<Index>(definition_.n) * definition_.n;
    if (j_.rows() != dim) {
        throw InvalidInput("gate dimension does not match N", "J");
    }
    j_adjoint_ = j_.adjoint();
    initial_grid_ = to_grid(initial_.amplitudes(), definition_.n);
}

ComplexVector PreparedGame::final_amplitudes(const ComplexMatrix &u_a, const ComplexMatrix &u_b) const {
    // (A (x) B) psi corresponds to A M B^T on the reshaped amplitudes
    const ComplexMatrix moved = u_a * initial_grid_ * u_b.transpose();
    return j_adjoint_ * from_grid(moved);
}

double PreparedGame::payoff(Player who, const ComplexMatrix &u_a, const ComplexMatrix &u_b) const {
    const ComplexVector psi = final_amplitudes(u_a, u_b);
    const RealMatrix &table = definition_.payoff(who);
    const int n = definition_.n;
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            total += table(j, k) * std::norm(psi(j * n + k));
        }
    }
    return total;
}

GameOutcome PreparedGame::play(const ComplexMatrix &u_a, const ComplexMatrix &u_b, double tol) const {
    const int n = definition_.n;
    for (const auto *u : {&u_a, &u_b}) {
        const char *name = u == &u_a ? "alice" : "bob";
        if (u->rows() != n || u->cols() != n) {
            throw InvalidInput("strategy must be " + std::to_string(n) + "x" + std::to_string(n), name);
        }
        require_unitary(*u, tol, name);
    }
    ComplexVector psi = final_amplitudes(u_a, u_b);
    psi.normalize();
    RealMatrix probabilities(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            probabilities(j, k) = std::norm(psi(j * n + k));
        }
    }
    const double payoff_a = (definition_.payoff_a.array() * probabilities.array()).sum();
    const double payoff_b = (definition_.payoff_b.array() * probabilities.array()).sum();
    return GameOutcome{StateVector(std::move(psi)), std::move(probabilities), payoff_a, payoff_b};
}

GameOutcome play(const GameDefinition &game, const ComplexMatrix &u_a, const ComplexMatrix &u_b) {
    return PreparedGame(game).play(u_a, u_b);
}

PayoffTable classical_embedding_table(const GameDefinition &game) {
    const PreparedGame prepared(game);
    const int n = game.n;
    const auto strategies = build_classical_strategies(n, game.gate.phi);
    PayoffTable table{RealMatrix(n, n), RealMatrix(n, n), 0.0};
    for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) {
            const GameOutcome outcome = prepared.play(strategies[static_cast<std::size_t>(s)],
                                                      strategies[static_cast<std::size_t>(t)]);
            table.alice(s, t) = outcome.payoff_a;
            table.bob(s, t) = outcome.payoff_b;
        }
    }
    table.max_deviation = std::max((table.alice - game.payoff_a).cwiseAbs().maxCoeff(),
                                   (table.bob - game.payoff_b).cwiseAbs().maxCoeff());
    return table;
}

} // namespace qgame
