#include "pulseorigin/lbfgs.hpp"

#include <cmath>
#include <deque>

#include "pulseorigin/errors.hpp"

namespace pulseorigin {

namespace {

struct Pair {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
    double rho = 0.0;
};

// Cubic interpolation of a step within [lo, hi] from values/derivatives at
// the bracket ends; falls back to bisection when the cubic is ill-formed.
double interpolate(double a_lo, double f_lo, double g_lo, double a_hi, double f_hi,
                   double g_hi) {
    const double d1 = g_lo + g_hi - 3.0 * (f_lo - f_hi) / (a_lo - a_hi);
    const double disc = d1 * d1 - g_lo * g_hi;
    if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), a_hi - a_lo);
        double t = a_hi - (a_hi - a_lo) * (g_hi + d2 - d1) / (g_hi - g_lo + 2.0 * d2);
        const double lo = std::min(a_lo, a_hi), hi = std::max(a_lo, a_hi);
        const double margin = 0.1 * (hi - lo);
        if (std::isfinite(t) && t > lo + margin && t < hi - margin) return t;
    }
    return 0.5 * (a_lo + a_hi);
}

}  // namespace

LbfgsResult lbfgs_minimize(const LbfgsObjective& objective, const Eigen::VectorXd& x0,
                           const LbfgsOptions& opt) {
    const auto n = x0.size();
    LbfgsResult res;
    res.x = x0;
    res.grad.resize(n);
    res.f = objective(res.x, res.grad);
    if (!std::isfinite(res.f)) throw InvalidInput("lbfgs: objective not finite at start");

    std::deque<Pair> history;

    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        if (res.grad.norm() <= opt.grad_tol) {
            res.converged = true;
            return res;
        }

        // Two-loop recursion for the search direction.
        Eigen::VectorXd q = res.grad;
        std::vector<double> alpha(history.size());
        for (std::size_t i = history.size(); i-- > 0;) {
            alpha[i] = history[i].rho * history[i].s.dot(q);
            q -= alpha[i] * history[i].y;
        }
        if (!history.empty()) {
            const Pair& last = history.back();
            q *= last.s.dot(last.y) / last.y.squaredNorm();
        }
        for (std::size_t i = 0; i < history.size(); ++i) {
            const double beta = history[i].rho * history[i].y.dot(q);
            q += (alpha[i] - beta) * history[i].s;
        }
        Eigen::VectorXd dir = -q;

        double dphi0 = res.grad.dot(dir);
        if (!(dphi0 < 0.0)) {  // not a descent direction; restart from steepest
            history.clear();
            dir = -res.grad;
            dphi0 = res.grad.dot(dir);
        }

        // Strong Wolfe line search.
        const double f0 = res.f;
        double a_prev = 0.0, f_prev = f0, g_prev = dphi0;
        double a = 1.0;
        double a_lo = -1.0, a_hi = -1.0, f_lo = 0.0, g_lo = 0.0, f_hi = 0.0, g_hi = 0.0;
        bool bracketed = false;

        Eigen::VectorXd x_try(n), grad_try(n);
        double f_try = f0;
        bool found = false;

        auto eval = [&](double step) {
            x_try = res.x + step * dir;
            f_try = objective(x_try, grad_try);
            if (!std::isfinite(f_try))
                throw InvalidInput("lbfgs: objective not finite during line search");
            return grad_try.dot(dir);
        };

        for (int ls = 0; ls < opt.max_line_search && !found; ++ls) {
            if (!bracketed) {
                const double g_try = eval(a);
                if (f_try > f0 + opt.wolfe_c1 * a * dphi0 || (ls > 0 && f_try >= f_prev)) {
                    a_lo = a_prev, f_lo = f_prev, g_lo = g_prev;
                    a_hi = a, f_hi = f_try, g_hi = g_try;
                    bracketed = true;
                    continue;
                }
                if (std::abs(g_try) <= -opt.wolfe_c2 * dphi0) {
                    found = true;
                    break;
                }
                if (g_try >= 0.0) {
                    a_lo = a, f_lo = f_try, g_lo = g_try;
                    a_hi = a_prev, f_hi = f_prev, g_hi = g_prev;
                    bracketed = true;
                    continue;
                }
                a_prev = a, f_prev = f_try, g_prev = g_try;
                a *= 2.0;
            } else {
                const double trial = interpolate(a_lo, f_lo, g_lo, a_hi, f_hi, g_hi);
                const double g_try = eval(trial);
                if (f_try > f0 + opt.wolfe_c1 * trial * dphi0 || f_try >= f_lo) {
                    a_hi = trial, f_hi = f_try, g_hi = g_try;
                } else {
                    if (std::abs(g_try) <= -opt.wolfe_c2 * dphi0) {
                        found = true;
                        a = trial;
                        break;
                    }
                    if (g_try * (a_hi - a_lo) >= 0.0) {
                        a_hi = a_lo, f_hi = f_lo, g_hi = g_lo;
                    }
                    a_lo = trial, f_lo = f_try, g_lo = g_try;
                }
                if (std::abs(a_hi - a_lo) < 1e-16) break;
            }
        }

        if (!found && bracketed && f_lo < f0) {
            // Accept the best bracketed point (still a decrease).
            eval(a_lo);
        } else if (!found) {
            res.iterations = iter;
            return res;  // line search failed to improve; give up
        }

        const Eigen::VectorXd s = x_try - res.x;
        const Eigen::VectorXd y = grad_try - res.grad;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            history.push_back({s, y, 1.0 / sy});
            if (static_cast<int>(history.size()) > opt.memory) history.pop_front();
        }

        res.x = x_try;
        res.f = f_try;
        res.grad = grad_try;
        res.iterations = iter + 1;
    }
    return res;
}

}  // namespace pulseorigin
