#pragma once

#include <string>
#include <vector>

#include "pulseorigin/dynamics.hpp"
#include "pulseorigin/waveform.hpp"

namespace pulseorigin {

/// Where a pulse sits in the Mach-Zehnder sequence. The role selects which
/// propagator matrix elements carry the pulse's phase contribution to the
/// interferometer, and how the dispersion gradient maps to a temporal origin:
///   beamsplitter-1: tau_o = tau + m
///   mirror:         tau_o = (tau - m) / 2
///   beamsplitter-3: tau_o = m
enum class PulseRole { Beamsplitter1, Mirror, Beamsplitter3 };

std::string to_string(PulseRole role);
PulseRole role_from_string(const std::string& s);

struct DispersionPoint {
    double delta = 0.0;  // rad/s
    double phi = 0.0;    // rad, unwrapped, referenced to phi(0) = 0
    double p_e = 0.0;    // transfer probability
};

/// Single-pulse characterization: sampled phase dispersion, its gradient m at
/// resonance, the temporal origin for the given role, and transfer probability.
struct PulseCharacterization {
    PulseRole role = PulseRole::Beamsplitter1;
    double m = 0.0;           // s, dPhi/ddelta at delta = 0
    double tau_origin = 0.0;  // s, measured from the pulse start
    double duration = 0.0;    // s
    std::vector<DispersionPoint> grid;
};

struct CharacterizeOptions {
    double eps = 0.0;             // amplitude error applied to the pulse
    double grid_span_omega0 = 1.5;  // dispersion grid covers +-span*omega0
    int grid_points = 301;          // odd, so delta = 0 is sampled
    double fd_step_frac = 1.0e-4;   // gradient step h = frac*omega0
};

/// Phase of the superposition produced by the pulse acting on |g>, referenced
/// to its value at resonance: arg(c_e * conj(c_g)) - arg at delta = 0.
/// This is the role-1 (first beamsplitter) dispersion phase.
double superposition_phase(const Waveform& w, double delta, double eps = 0.0);

/// Role-resolved dispersion phase (not referenced; callers subtract phi(0)).
double dispersion_phase_raw(const Mat2& u, PulseRole role);

/// Gradient m = dPhi/ddelta at resonance by Richardson-extrapolated central
/// differences with step h = fd_step_frac * omega0.
double dispersion_gradient(const Waveform& w, PulseRole role, double eps = 0.0,
                           double fd_step_frac = 1.0e-4);

/// Maps the dispersion gradient to the temporal origin for the role.
double temporal_origin(const Waveform& w, PulseRole role, double eps = 0.0,
                       double fd_step_frac = 1.0e-4);

double origin_from_gradient(double m, double tau, PulseRole role);

/// Closed-form origin of a rectangular beamsplitter: tau - tan(omega*tau/2)/omega.
/// Throws SingularityError within 1e-9 of a tangent pole.
double rectangular_origin_analytic(double omega, double tau);

/// |<e|U|g>|^2 for the pulse propagator.
double transfer_probability(const Waveform& w, double delta, double eps = 0.0);

/// Full characterization with an unwrapped dispersion grid.
PulseCharacterization characterize_pulse(const Waveform& w, PulseRole role,
                                         const CharacterizeOptions& opts = {});

/// Unwraps a sequence of phases in place by nearest-branch selection,
/// anchored at index `anchor`.
void unwrap_phases(std::vector<double>& phases, std::size_t anchor);

}  // namespace pulseorigin
