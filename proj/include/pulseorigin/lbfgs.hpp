#pragma once

#include <Eigen/Dense>
#include <functional>

namespace pulseorigin {

struct LbfgsOptions {
    int memory = 20;
    int max_iterations = 400;
    double grad_tol = 1.0e-8;  // stop when ||grad||_2 <= grad_tol
    double wolfe_c1 = 1.0e-4;
    double wolfe_c2 = 0.9;
    int max_line_search = 50;
};

struct LbfgsResult {
    Eigen::VectorXd x;
    double f = 0.0;
    Eigen::VectorXd grad;
    int iterations = 0;
    bool converged = false;  // gradient tolerance reached before the cap
};

/// Objective returns f(x) and fills grad (same size as x).
using LbfgsObjective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Limited-memory BFGS with a strong-Wolfe line search. Accepted steps never
/// increase the objective. Throws InvalidInput if the objective turns
/// non-finite during the search.
LbfgsResult lbfgs_minimize(const LbfgsObjective& objective, const Eigen::VectorXd& x0,
                           const LbfgsOptions& options = {});

}  // namespace pulseorigin
