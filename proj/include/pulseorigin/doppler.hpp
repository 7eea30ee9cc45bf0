#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "pulseorigin/sensitivity.hpp"

namespace pulseorigin {

enum class DopplerKind { ContinuousChirp, PhaseContinuousJumps, PhaseDiscontinuousJumps };

std::string to_string(DopplerKind kind);
DopplerKind doppler_kind_from_string(const std::string& s);

/// Laser-frequency program that compensates the acceleration-induced Doppler
/// shift. Jump schemes step the detuning at a time t_j before the beginning,
/// middle, and end of pulses 1, 2 and 3; the phase-discontinuous scheme also
/// resets the running laser phase at each jump, and shifts the first and
/// third jumps by -+delta_t_j.
struct DopplerScheme {
    DopplerKind kind = DopplerKind::PhaseContinuousJumps;
    double chirp_rate = 0.0;   // rad/s^2 (continuous chirp)
    double t_j = 0.0;          // jump lead time, s
    double delta_t_j = 0.0;    // timing adjustment, s (discontinuous only)
    std::array<double, 3> delta_L{0.0, 0.0, 0.0};  // laser detuning per interval, rad/s
};

/// Jump scheme tracking a constant acceleration `a`: detuning steps of
/// -k a (tau + T + tau2/2) between pulses, referenced so the laser is
/// resonant during the mirror (delta_L2 = 0).
DopplerScheme tracking_scheme(DopplerKind kind, const SequenceSpec& seq, double a,
                              double k = defaults::k_eff, double t_j = -1.0,
                              double delta_t_j = 0.0);

struct LaserPhaseReport {
    double laser_phase = 0.0;     // rad
    double inertial_phase = 0.0;  // rad
    double total = 0.0;           // rad
    double residual_bias = 0.0;   // g units
};

/// Laser phase accumulated through the sequence: integral of g(t) delta_L(t)
/// plus, for the phase-discontinuous scheme, the reset contributions at the
/// two inter-pulse jumps. Jumps inside a pulse window raise UnsupportedTiming.
double laser_phase(const SensitivityProfile& p, const DopplerScheme& scheme);

/// Total interferometer phase for constant acceleration a and velocity v0
/// (defined at the mirror origin): laser phase plus the inertial phase
/// k v0 h_start + a S.
LaserPhaseReport total_phase(const SensitivityProfile& p, const DopplerScheme& scheme,
                             double a, double v0);

/// Jump-timing adjustment that nullifies the phase-discontinuous laser phase
/// for a closed interferometer: delta_t_j = tau3 - m3.
double optimal_jump_shift(const PulseCharacterization& pulse3);
double optimal_jump_shift(double tau3, double m3);

struct BiasSweepPoint {
    double T = 0.0;        // s
    double bias = 0.0;     // g units, signed
    double phase = 0.0;    // residual laser phase, rad
    std::string scheme;
    std::string family;
};

/// Residual accelerometer bias of a compensation scheme versus interrogation
/// time. delta_t_j is held at the balanced sequence's value while the
/// imbalance perturbs pulse 3; the probing acceleration is 1 g.
std::vector<BiasSweepPoint> compensation_bias_sweep(
    const std::function<SequenceSpec(double)>& seq_family, DopplerKind kind,
    const std::vector<double>& T_list, double imbalance, const std::string& family_label,
    double k = defaults::k_eff, int samples_per_slice = defaults::samples_per_slice);

}  // namespace pulseorigin
