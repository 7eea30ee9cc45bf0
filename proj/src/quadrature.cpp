#include "pulseorigin/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "pulseorigin/errors.hpp"

namespace pulseorigin {

QuadratureRule gauss_hermite(int n) {
    if (n < 1) throw InvalidInput("gauss_hermite: need n >= 1");

    // Jacobi matrix of the (physicists') Hermite recurrence: off-diagonal
    // sqrt(i/2). Eigenvalues are the nodes; weights follow from the first
    // eigenvector components.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = std::sqrt(0.5 * i);
        jacobi(i, i - 1) = b;
        jacobi(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mu0 = std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

QuadratureRule gaussian_average(int n, double mean, double sigma) {
    if (!(sigma > 0.0)) throw InvalidInput("gaussian_average: sigma must be positive");
    QuadratureRule rule = gauss_hermite(n);
    const double scale = std::numbers::sqrt2 * sigma;
    const double norm = 1.0 / std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mean + scale * rule.nodes[i];
        rule.weights[i] *= norm;
    }
    return rule;
}

QuadratureRule gaussian_average_uniform(int n, double mean, double sigma) {
    if (!(sigma > 0.0)) throw InvalidInput("gaussian_average_uniform: sigma must be positive");
    if (n < 2) throw InvalidInput("gaussian_average_uniform: need n >= 2");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double span = 4.0 * sigma;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = -span + 2.0 * span * i / (n - 1);
        rule.nodes[i] = mean + x;
        rule.weights[i] = std::exp(-0.5 * x * x / (sigma * sigma));
        total += rule.weights[i];
    }
    for (double& w : rule.weights) w /= total;
    return rule;
}

}  // namespace pulseorigin
