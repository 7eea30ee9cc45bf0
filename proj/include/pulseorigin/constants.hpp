#pragma once

#include <numbers>

namespace pulseorigin::defaults {

// Nominal peak Rabi frequency, rad/s (25 kHz).
inline constexpr double omega0 = 2.0 * std::numbers::pi * 25.0e3;

// Rectangular pi/2 duration at omega0, s. omega0 * tau_rect = pi/2 exactly.
inline constexpr double tau_rect = std::numbers::pi / (2.0 * omega0);

// Effective two-photon wave-number, rad/m: 4*pi / 780.24 nm
// (counter-propagating Raman beams on the Rb-85 D2 line).
inline constexpr double k_eff = 1.6105e7;

// Free-evolution (interrogation) time, s.
inline constexpr double interrogation_time = 5.0e-3;

// Standard gravity, m/s^2; acceleration biases are reported in units of this.
inline constexpr double g_std = 9.80665;

// Optimizer time slicing: 50 slices per t_pi at omega0 gives 400 ns slices.
inline constexpr double slice_dt = 400.0e-9;
inline constexpr int slices_per_tpi = 50;

// Finite-difference step for dispersion gradients, as a fraction of omega0.
inline constexpr double gradient_step_frac = 1.0e-4;

// Laser phase step used to probe the sensitivity function, rad.
inline constexpr double phase_probe = 1.0e-6;

// Sub-samples per waveform slice when building sensitivity profiles.
inline constexpr int samples_per_slice = 10;

// |h(t_start)| below this (seconds) counts as a closed interferometer.
inline constexpr double closure_tol = 1.0e-9;

}  // namespace pulseorigin::defaults
