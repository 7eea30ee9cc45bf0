#pragma once

#include <vector>

namespace pulseorigin {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Hermite rule for weight exp(-x^2) on (-inf, inf), by Golub-Welsch.
/// Sum of weights is sqrt(pi); nodes are symmetric about zero.
QuadratureRule gauss_hermite(int n);

/// Rule for averaging a function against a normal density N(mean, sigma):
/// E[f] ~= sum_i w_i f(x_i), weights summing to one.
QuadratureRule gaussian_average(int n, double mean, double sigma);

/// Uniform-grid fallback covering mean +- 4 sigma with normalized Gaussian
/// weights; usable when the distribution is later skewed.
QuadratureRule gaussian_average_uniform(int n, double mean, double sigma);

}  // namespace pulseorigin
