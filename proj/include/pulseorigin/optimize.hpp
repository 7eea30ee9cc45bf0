#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pulseorigin/constants.hpp"
#include "pulseorigin/waveform.hpp"

namespace pulseorigin {

/// GRAPE beamsplitter design setup. The waveform is piecewise-constant with
/// slices_per_tpi slices per t_pi = pi/omega0 of duration; the fidelity is
/// averaged over a uniform (delta, eps) ensemble; penalties keep the
/// waveform smooth and the peak amplitude below omega0.
struct OptimizationConfig {
    double omega0 = defaults::omega0;
    double duration_tpi = 2.0;  // pulse duration in t_pi units
    int slices_per_tpi = defaults::slices_per_tpi;
    double m_target = 0.0;      // s; target dispersion gradient (tau_o = tau + m)
    double delta_range = 1.5;   // ensemble half-range in units of omega0
    double eps_range = 0.10;    // ensemble half-range of amplitude error
    int n_delta = 15;
    int n_eps = 11;
    int max_iterations = 400;
    double smoothness_weight = 1.0e-3;
    double peak_weight = 1.0e2;
    /// 0 = uniform delta weights; > 0 weights ensemble detunings by a
    /// Gaussian of this sigma (rad/s), matching a velocity distribution.
    double delta_weight_sigma = 0.0;
    /// Lower bound on the relative delta weight (fraction of the peak), so
    /// ensemble edges keep some training pressure under Gaussian weighting.
    double delta_weight_floor = 0.0;
    std::uint64_t rng_seed = 1;

    double t_pi() const;
    double dt() const { return t_pi() / slices_per_tpi; }
    int n_slices() const;
    double duration() const { return duration_tpi * t_pi(); }

    /// m_target that places the origin at `fraction` of the pulse duration
    /// (fraction 1 is a point-to-point pulse with the origin at the end).
    void set_origin_fraction(double fraction);
    double origin_fraction() const;

    std::vector<double> delta_grid() const;
    std::vector<double> eps_grid() const;
    void validate() const;
};

struct OptimizationResult {
    Waveform waveform;
    double terminal_infidelity = 1.0;  // 1 - mean ensemble fidelity
    std::vector<double> fidelity_map;  // row-major over (delta, eps)
    std::vector<double> deltas;
    std::vector<double> epss;
    double pulse_area = 0.0;  // rad
    int iterations_used = 0;
    bool converged = false;
};

/// State-to-state beamsplitter fidelity with a linear target dispersion:
/// overlap of U|g> with the equal superposition whose relative phase is the
/// resonant pi/2 phase plus m_target * delta.
double fidelity(const Waveform& w, double delta, double eps, double m_target);

/// Uniform-weight ensemble mean of the fidelity over the config's grid.
double ensemble_fidelity(const Waveform& w, const OptimizationConfig& cfg);

/// Exact analytic gradient of the ensemble fidelity with respect to the
/// slice amplitudes (rad/s), via forward/backward propagator products.
std::vector<double> ensemble_fidelity_gradient(const Waveform& w,
                                               const OptimizationConfig& cfg);

/// Penalized L-BFGS maximization of the ensemble fidelity. Deterministic for
/// a fixed config (the seed drives the random initial waveform).
OptimizationResult optimize_beamsplitter(const OptimizationConfig& cfg,
                                         const std::optional<Waveform>& initial = {});

Waveform random_initial_waveform(const OptimizationConfig& cfg);

struct SweepCell {
    double duration_tpi = 0.0;
    double origin_fraction = 0.0;  // 1.0 marks point-to-point cells
    std::uint64_t seed = 0;
    double infidelity = 1.0;
    double pulse_area = 0.0;  // rad
    double contrast = 0.0;
    double tau_origin = 0.0;  // s, characterized at (delta->0, eps=0)
    bool converged = false;
    bool failed = false;
    std::string error;
};

/// Repeated optimizations over durations x origin fractions x seeds,
/// reporting terminal infidelity, pulse area and fringe contrast (sequence
/// with a perfect mirror and a flip-reversed recombiner over a sigma_p =
/// 0.4 hbar k distribution). Individual cell failures are recorded and the
/// sweep continues.
std::vector<SweepCell> batch_sweep(const std::vector<double>& durations_tpi,
                                   const std::vector<double>& origin_fractions,
                                   int seeds_per_cell, const OptimizationConfig& base);

}  // namespace pulseorigin
