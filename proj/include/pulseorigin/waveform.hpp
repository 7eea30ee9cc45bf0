#pragma once

#include <string>
#include <vector>

namespace pulseorigin {

/// Piecewise-constant control waveform: one signed generalized Rabi frequency
/// per time slice (the laser phase is restricted to 0 or pi, so a slice is
/// fully described by a signed real amplitude). Slices have uniform duration.
struct Waveform {
    std::vector<double> slices;  // signed Rabi frequency per slice, rad/s
    double dt = 0.0;             // slice duration, s
    double omega0 = 0.0;         // nominal peak Rabi frequency, rad/s
    std::string label;

    std::size_t size() const { return slices.size(); }
    double duration() const { return static_cast<double>(slices.size()) * dt; }

    /// Total pulse area, rad: integral of |amplitude| over the pulse.
    double area() const;

    /// Throws InvalidInput on non-finite slices, dt <= 0, or omega0 <= 0.
    void validate() const;
};

/// Rectangular pulse of constant amplitude `omega`. The slice count only sets
/// the sampling granularity; the physics is identical for any split.
Waveform rectangular_pulse(double omega, double tau, int n_slices, double omega0);

/// Rectangular pi/2 beamsplitter at nominal amplitude (omega0*tau = pi/2).
Waveform rectangular_beamsplitter(double omega0, double tau, int n_slices = 25);

/// Rectangular pi mirror: duration 2*tau at the same amplitude.
Waveform rectangular_mirror(double omega0, double tau, int n_slices = 50);

/// Recombiner construction: reverse the slice order and negate amplitudes.
/// Used as pulse 3 with equal amplitude error, the phase dispersion of the
/// pair cancels exactly (m3 = -m1), closing the interferometer.
Waveform flip_reverse(const Waveform& w);

}  // namespace pulseorigin
