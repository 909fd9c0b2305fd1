#include "qgame/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qgame::optimize {

Result nelder_mead(const std::function<double(const RealVector &)> &f, const RealVector &x0,
                   const NelderMeadOptions &options) {
    const Index dim = x0.size();
    Result result{x0, 0.0, 0, false};
    if (options.max_evaluations == 0) {
        return result;
    }
    auto eval = [&](const RealVector &x) {
        ++result.evaluations;
        return f(x);
    };
    if (dim == 0) {
        result.value = eval(x0);
        result.converged = true;
        return result;
    }

    // adaptive coefficients (Gao & Han) behave better than the classic ones past a few dimensions
    const double d = static_cast<double>(dim);
    const double reflect = 1.0;
    const double expand = 1.0 + 2.0 / d;
    const double contract = 0.75 - 1.0 / (2.0 * d);
    const double shrink = 1.0 - 1.0 / d;

    std::vector<RealVector> simplex;
    std::vector<double> values;
    simplex.push_back(x0);
    values.push_back(eval(x0));
    for (Index i = 0; i < dim && result.evaluations < options.max_evaluations; ++i) {
        RealVector x = x0;
        x(i) += options.initial_step;
        simplex.push_back(x);
        values.push_back(eval(x));
    }
    if (static_cast<Index>(simplex.size()) < dim + 1) {
        const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
        result.x = simplex[best];
        result.value = values[best];
        return result;
    }

    std::vector<std::size_t> order(simplex.size());
    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[order.size() - 2];

        double diameter = 0.0;
        for (const auto &x : simplex) {
            diameter = std::max(diameter, (x - simplex[best]).lpNorm<Eigen::Infinity>());
        }
        if (values[worst] - values[best] <= options.value_tol && diameter <= options.size_tol) {
            result.converged = true;
            break;
        }
        if (result.evaluations >= options.max_evaluations) {
            break;
        }

        RealVector centroid = RealVector::Zero(dim);
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i != worst) {
                centroid += simplex[i];
            }
        }
        centroid /= d;

        const RealVector reflected = centroid + reflect * (centroid - simplex[worst]);
        const double f_reflected = eval(reflected);
        if (f_reflected < values[best]) {
            if (result.evaluations >= options.max_evaluations) {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
                break;
            }
            const RealVector expanded = centroid + expand * (reflected - centroid);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }
        if (result.evaluations >= options.max_evaluations) {
            break;
        }
        const bool outside = f_reflected < values[worst];
        const RealVector contracted = outside ? RealVector(centroid + contract * (reflected - centroid))
                                              : RealVector(centroid - contract * (centroid - simplex[worst]));
        const double f_contracted = eval(contracted);
        if (f_contracted < std::min(f_reflected, values[worst])) {
            simplex[worst] = contracted;
            values[worst] = f_contracted;
            continue;
        }
        for (std::size_t i = 0; i < simplex.size() && result.evaluations < options.max_evaluations; ++i) {
            if (i == best) {
                continue;
            }
            simplex[i] = simplex[best] + shrink * (simplex[i] - simplex[best]);
            values[i] = eval(simplex[i]);
        }
    }

    const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    result.x = simplex[best];
    result.value = values[best];
    return result;
}

Result levenberg_marquardt(const std::function<RealVector(const RealVector &)> &residual, const RealVector &x0,
                           const LevenbergMarquardtOptions &options) {
    const Index dim = x0.size();
    Result result{x0, 0.0, 0, false};
    if (options.max_evaluations == 0) {
        return result;
    }
    auto eval = [&](const RealVector &x) {
        ++result.evaluations;
        return residual(x);
    };
    RealVector r = eval(x0);
    result.value = r.norm();
    double damping = 1e-3;
    const auto jacobian_cost = static_cast<std::size_t>(2 * dim);

    while (result.evaluations + jacobian_cost + 1 <= options.max_evaluations) {
        if (result.value <= options.residual_tol) {
            result.converged = true;
            break;
        }
        RealMatrix jac(r.size(), dim);
        for (Index i = 0; i < dim; ++i) {
            RealVector plus = result.x;
            RealVector minus = result.x;
            plus(i) += options.step;
            minus(i) -= options.step;
            jac.col(i) = (eval(plus) - eval(minus)) / (2.0 * options.step);
        }
        const RealMatrix normal = jac.transpose() * jac;
        const RealVector gradient = jac.transpose() * r;
        if (gradient.norm() < 1e-300) {
            result.converged = true;
            break;
        }

        bool improved = false;
        while (result.evaluations < options.max_evaluations) {
            RealMatrix system = normal;
            system.diagonal() += damping * (normal.diagonal().array() + 1e-12).matrix();
            const RealVector delta = system.ldlt().solve(-gradient);
            const RealVector trial = result.x + delta;
            const RealVector trial_r = eval(trial);
            const double trial_norm = trial_r.norm();
            if (trial_norm < result.value) {
                const bool stalled = result.value - trial_norm <= 1e-15 * std::max(1.0, result.value) &&
                                     delta.norm() < 1e-14;
                result.x = trial;
                r = trial_r;
                result.value = trial_norm;
                damping = std::max(damping / 3.0, 1e-12);
                improved = !stalled;
                break;
            }
            damping *= 4.0;
            if (damping > 1e12) {
                break;
            }
        }
        if (!improved) {
            // no descent left at this point: a local minimum (or the budget ran out)
            result.converged = result.evaluations < options.max_evaluations;
            break;
        }
    }
    return result;
}

Result golden_section(const std::function<double(double)> &f, double lo, double hi, double tol,
                      std::size_t max_evaluations) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    Result result{RealVector(1), 0.0, 0, false};
    double a = lo;
    double b = hi;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = f(c);
    double fd = f(d);
    result.evaluations = 2;
    while (b - a > tol && result.evaluations < max_evaluations) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
        ++result.evaluations;
    }
    result.converged = b - a <= tol;
    result.x(0) = fc < fd ? c : d;
    result.value = std::min(fc, fd);
    return result;
}

} // namespace qgame::optimize
