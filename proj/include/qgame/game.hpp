#pragma once

#include <vector>

#include "qgame/gate.hpp"

namespace qgame {

enum class Player { Alice, Bob };

/// Classical 2-player N-strategy game together with the gate that quantizes it.
/// Payoff entry (s, s') is the payoff when Alice plays s and Bob plays s'.
struct GameDefinition {
    int n = 2;
    RealMatrix payoff_a;
    RealMatrix payoff_b;
    GateParams gate;
    bool symmetric = true;

    /// Symmetric game: Bob's payoff matrix is the transpose of Alice's.
    static GameDefinition symmetric_game(RealMatrix payoff_a, GateParams gate);

    /// N=2 game from the (r, s, t, p) table: CC -> (r, r), CD -> (s, t),
    /// DC -> (t, s), DD -> (p, p).
    static GameDefinition two_by_two(double r, double s, double t, double p, GateParams gate);

    /// Conventional Prisoner's Dilemma values (r, s, t, p) = (3, 0, 5, 1).
    static GameDefinition prisoners_dilemma(GateParams gate);

    const RealMatrix &payoff(Player who) const { return who == Player::Alice ? payoff_a : payoff_b; }

    void validate() const;
};

struct GameOutcome {
    StateVector final_state;
    RealMatrix probabilities;
    double payoff_a = 0.0;
    double payoff_b = 0.0;

    double payoff(Player who) const { return who == Player::Alice ? payoff_a : payoff_b; }
};

/// J (|1> (x) |1>)
StateVector initial_state(const ComplexMatrix &j);

/// exp(i gamma/2 D (x) D) with D = i sigma_2, evaluated in closed form
/// (D (x) D squares to the identity).
ComplexMatrix ewl_gate(double gamma);

/// D = [[0, 1], [-1, 0]]
ComplexMatrix ewl_defect();

/// A game with its gate assembled once, for repeated evaluation.
class PreparedGame {
public:
    explicit PreparedGame(GameDefinition definition);
    /// Uses a caller-supplied gate in place of the one built from the parameters.
    PreparedGame(GameDefinition definition, ComplexMatrix j);

    const GameDefinition &definition() const noexcept { return definition_; }
    const ComplexMatrix &gate() const noexcept { return j_; }
    const StateVector &initial() const noexcept { return initial_; }
    int n() const noexcept { return definition_.n; }

    /// Full outcome; checks both strategies for unitarity within `tol`.
    GameOutcome play(const ComplexMatrix &u_a, const ComplexMatrix &u_b, double tol = kExactTol) const;

    /// Final-state amplitudes without validation.
    ComplexVector final_amplitudes(const ComplexMatrix &u_a, const ComplexMatrix &u_b) const;

    /// Expected payoff of `who` without validation; the hot path for optimizers.
    double payoff(Player who, const ComplexMatrix &u_a, const ComplexMatrix &u_b) const;

private:
    GameDefinition definition_;
    ComplexMatrix j_;
    ComplexMatrix j_adjoint_;
    StateVector initial_;
    ComplexMatrix initial_grid_;  // initial amplitudes reshaped to N x N
};

/// Single-shot play: builds the gate from the definition.
GameOutcome play(const GameDefinition &game, const ComplexMatrix &u_a, const ComplexMatrix &u_b);

struct PayoffTable {
    RealMatrix alice;
    RealMatrix bob;
    /// Largest deviation of either table from the classical payoff matrices.
    double max_deviation = 0.0;
};

/// Plays every pair of classical strategies (U_s, U_s') on the game's gate.
PayoffTable classical_embedding_table(const GameDefinition &game);

} // namespace qgame
