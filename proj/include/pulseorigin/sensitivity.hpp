#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "pulseorigin/constants.hpp"
#include "pulseorigin/sequence.hpp"

namespace pulseorigin {

struct ProfileOptions {
    double delta = 0.0;       // operating detuning for the probe
    int samples_per_slice = defaults::samples_per_slice;  // even
    double phase_probe = defaults::phase_probe;           // rad
    double k = defaults::k_eff;
};

/// Uniformly sampled stretch of the profile (one per waveform pulse, two per
/// perfect mirror since g jumps at the flip). k0..k1 are inclusive sample
/// indices; spacing is dt.
struct SampleBlock {
    std::size_t k0 = 0;
    std::size_t k1 = 0;
    double dt = 0.0;
    int pulse = 0;  // 0..2
};

struct GapInfo {
    double t0 = 0.0;
    double t1 = 0.0;
    double g = 0.0;        // constant sensitivity value in the gap
    double h1 = 0.0;       // h at the gap end (h is linear across the gap)
    std::size_t mid = 0;   // sample index of the gap midpoint
};

/// Sensitivity function g(t), response function h(t) = int_t^end g, and the
/// per-pulse dispersion gradients m_j = int_{pulse j} g dt.
///
/// g is the phase response along the two principal interferometer arms to a
/// laser phase step, probed numerically with a step of `phase_probe` and a
/// halving linearity check. Sign convention: g = +1 in the second
/// free-evolution interval. Pulse windows are sampled at samples_per_slice
/// points per slice; free gaps carry a single constant sample (g is constant
/// and h linear there, and integrals treat them analytically).
struct SensitivityProfile {
    std::vector<double> times;  // sample times; duplicated at flip instants
    std::vector<double> g;
    std::vector<double> h;

    std::vector<SampleBlock> blocks;  // pulse-window sample blocks, in order
    std::array<GapInfo, 2> gaps{};
    std::array<std::size_t, 3> pulse_k0{};  // first sample index of pulse window
    std::array<std::size_t, 3> pulse_k1{};  // last sample index of pulse window

    std::array<double, 3> m{};           // s
    std::array<double, 3> tau_origin{};  // s, from the pulse start (Eq.-10 role map)
    double t_begin = 0.0;
    double t_end = 0.0;
    double h_start = 0.0;  // closure defect: total integral of g, s
    double k = defaults::k_eff;
    SequenceSpec seq;

    bool closed(double tol = defaults::closure_tol) const;
    double origin_time(int pulse) const;    // absolute time of tau_origin[j]
    double midpoint_time(int pulse) const;  // absolute pulse center
    double g_at(double t) const;            // nearest-sample lookup (gaps exact)
    double h_at(double t) const;            // piecewise lookup (gaps exact-linear)
};

SensitivityProfile sensitivity_profile(const SequenceSpec& seq, const ProfileOptions& opts = {});

/// k * integral of (t - t0) g(t) dt == k * integral of the (t0-shifted)
/// response function. Independent of t0 when the interferometer is closed.
double scale_factor_integral(const SensitivityProfile& p, double t0);

/// Scale factor of a closed interferometer, rad per (m/s^2). Throws
/// OpenInterferometer if |h_start| exceeds the closure tolerance.
double scale_factor_exact(const SensitivityProfile& p,
                          double closure_tol = defaults::closure_tol);

/// Open-interferometer scale factor with the initial velocity defined at t0:
/// returns {S, velocity_coefficient}, where the extra phase is
/// velocity_coefficient * v(t0) and S multiplies the acceleration.
std::pair<double, double> scale_factor_open(const SensitivityProfile& p, double t0);

enum class VertexMode { Origins, Midpoints };

/// Triangular approximation: pulses treated as instantaneous at their
/// temporal origins (or midpoints); the response is a triangle through those
/// vertices with unit slopes.
double scale_factor_triangular(const SensitivityProfile& p, VertexMode mode);

/// Effective dead time of the sequence: tau_d^2 = 4 * int (h_triangle - h).
/// Throws DeadTimeUndefined when the triangular approximation does not
/// over-estimate the response.
double dead_time(const SensitivityProfile& p);

/// Trapezoidal approximation built from the triangular one by flattening the
/// apex over the dead time. Exact for rectangular sequences.
double scale_factor_trapezoidal(const SensitivityProfile& p);

struct ScaleFactorReport {
    double exact = 0.0;
    double triangular_origins = 0.0;
    double triangular_midpoints = 0.0;
    double trapezoidal = 0.0;
    double dead_time = 0.0;  // s
    double ppm_origins = 0.0;
    double ppm_midpoints = 0.0;
    double ppm_trapezoidal = 0.0;
    std::array<double, 3> m{};
    std::array<double, 3> tau_origin{};
    double T = 0.0;
    double k = 0.0;
};

ScaleFactorReport scale_factor_report(const SensitivityProfile& p);

/// h shifted vertically by h_start before t0, so it starts and ends at zero
/// for an open interferometer (same sample layout as p.h).
std::vector<double> response_shifted(const SensitivityProfile& p, double t0);

}  // namespace pulseorigin
