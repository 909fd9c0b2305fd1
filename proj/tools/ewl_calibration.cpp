// Regenerates tests/fixtures/ewl_calibration.json: for each gamma on a grid in
// [0, pi], the N = 2 coefficient lambda_1 (with phi = (pi, 0)) whose gate best
// matches exp(i gamma/2 D(x)D) up to a global phase. A coarse scan over
// [-pi, pi] brackets the minimum, golden-section search refines it.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "qgame/game.hpp"
#include "qgame/optimize.hpp"

using namespace qgame;

namespace {

double gate_distance(double lambda, double gamma) {
    GateParams params = GateParams::zero(2);
    params.phi << kPi, 0.0;
    params.lambda(0) = lambda;
    return phase_invariant_distance(build_gate(params).j, ewl_gate(gamma));
}

} // namespace

int main(int argc, char **argv) {
    const int points = 20;
    const int scan = 4000;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int k = 0; k < points; ++k) {
        const double gamma = kPi * k / (points - 1);
        double best_lambda = -kPi;
        double best = gate_distance(best_lambda, gamma);
        for (int s = 1; s <= scan; ++s) {
            const double lambda = -kPi + 2.0 * kPi * s / scan;
            const double d = gate_distance(lambda, gamma);
            if (d < best) {
                best = d;
                best_lambda = lambda;
            }
        }
        const double width = 2.0 * kPi / scan;
        const auto refined = optimize::golden_section([&](double l) { return gate_distance(l, gamma); },
                                                      best_lambda - width, best_lambda + width, 1e-15, 400);
        nlohmann::ordered_json row;
        row["gamma"] = gamma;
        row["lambda"] = refined.x(0);
        row["distance"] = refined.value;
        rows.push_back(std::move(row));
    }
    nlohmann::ordered_json out;
    out["n"] = 2;
    out["phi"] = {kPi, 0.0};
    out["points"] = std::move(rows);
    const std::string text = out.dump(2) + "\n";
    if (argc > 1) {
        std::ofstream(argv[1]) << text;
    } else {
        std::cout << text;
    }
    return 0;
}
