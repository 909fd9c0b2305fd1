#pragma once

// Small local optimizers used by the searches. Both count objective
// evaluations against a hard budget and never exceed it.

#include <cstddef>
#include <functional>

#include "qgame/linalg.hpp"

namespace qgame::optimize {

struct Result {
    RealVector x;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

struct NelderMeadOptions {
    double initial_step = 0.5;
    std::size_t max_evaluations = 1000;
    /// Stop when the spread of simplex values and the simplex diameter both fall below these.
    double value_tol = 1e-12;
    double size_tol = 1e-10;
};

/// Minimizes `f` starting from `x0` with an axis-aligned initial simplex.
Result nelder_mead(const std::function<double(const RealVector &)> &f, const RealVector &x0,
                   const NelderMeadOptions &options);

struct LevenbergMarquardtOptions {
    std::size_t max_evaluations = 1000;
    double step = 1e-7;        ///< central finite-difference step
    double residual_tol = 1e-14;
};

/// Minimizes ||r(x)||; `value` in the result is the residual norm.
Result levenberg_marquardt(const std::function<RealVector(const RealVector &)> &residual, const RealVector &x0,
                           const LevenbergMarquardtOptions &options);

/// Golden-section minimization of a unimodal `f` on [lo, hi].
Result golden_section(const std::function<double(double)> &f, double lo, double hi, double tol = 1e-13,
                      std::size_t max_evaluations = 200);

} // namespace qgame::optimize
