#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "pulseorigin/characterize.hpp"
#include "pulseorigin/constants.hpp"
#include "pulseorigin/dynamics.hpp"
#include "pulseorigin/waveform.hpp"

namespace pulseorigin {

/// Mirror surrogate: an exact sigma_x pi rotation with zero Doppler
/// sensitivity, placed at the center of a real time window so that scale
/// factors keep their T*tau2 terms.
struct PerfectMirror {
    double duration = 2.0 * defaults::tau_rect;
};

using PulseShape = std::variant<Waveform, PerfectMirror>;

double pulse_duration(const PulseShape& p);

/// Three-pulse Mach-Zehnder description: pulses, equal free-evolution
/// periods T, start time, and per-pulse amplitude errors.
struct SequenceSpec {
    PulseShape pulse1;
    PulseShape pulse2;
    PulseShape pulse3;
    double T = defaults::interrogation_time;
    double t_start = 0.0;
    std::array<double, 3> eps{0.0, 0.0, 0.0};

    double tau(int pulse) const;         // duration of pulse 1..3
    double pulse_begin(int pulse) const;  // absolute start time of pulse 1..3
    double pulse_end(int pulse) const;
    double span() const { return tau(1) + tau(2) + tau(3) + 2.0 * T; }
    double t_end() const { return t_start + span(); }

    void validate() const;
};

/// Conventional all-rectangular sequence: pi/2, pi, pi/2 at amplitude omega0.
SequenceSpec rectangular_sequence(double omega0 = defaults::omega0,
                                  double tau = defaults::tau_rect,
                                  double T = defaults::interrogation_time);

/// Gaussian atomic velocity distribution expressed in Doppler detuning.
/// A momentum spread of sigma_p = 0.4 hbar*k corresponds to a detuning
/// spread of omega0/2 (the paper's simulation setup); the helper scales
/// linearly from that anchor.
struct MomentumDistribution {
    double sigma_delta = 0.5 * defaults::omega0;  // 1-sigma width, rad/s
    double mean_v = 0.0;                          // m/s
    int n_samples = 64;
    enum class Quadrature { GaussHermite, UniformGrid } quadrature = Quadrature::GaussHermite;

    static MomentumDistribution from_momentum_width(double sigma_p_hbar_k,
                                                    double omega0 = defaults::omega0);
    void validate() const;
};

struct BiasReport {
    double phase_bias = 0.0;            // rad, velocity-averaged fringe phase
    double accel_bias = 0.0;            // dimensionless g units
    double velocity_sensitivity = 0.0;  // rad per (m/s), near resonance
    double contrast = 0.0;
};

// ---------------------------------------------------------------------------
// Timeline: flattened piecewise-constant view of a sequence, used for state
// propagation, fringe extraction, and sensitivity-function sampling.
// ---------------------------------------------------------------------------

struct TimelineAtom {
    enum class Kind { Field, Flip };  // Field covers pulses (amp != 0) and free gaps (amp == 0)
    Kind kind = Kind::Field;
    double t0 = 0.0;
    double dt = 0.0;   // zero for Flip
    double amp = 0.0;  // effective amplitude including (1+eps), rad/s
    int pulse = -1;    // 0..2 inside a pulse window, -1 in free gaps
};

/// Laser phase step of `phi` applied to everything at t >= time.
struct PhaseStep {
    double time = 0.0;
    double phi = 0.0;
};

class Timeline {
  public:
    /// samples_per_slice controls how finely pulse slices are split into
    /// atoms (even; sets the sensitivity sample grid).
    Timeline(const SequenceSpec& seq, int samples_per_slice = defaults::samples_per_slice);

    const std::vector<TimelineAtom>& atoms() const { return atoms_; }
    const SequenceSpec& seq() const { return seq_; }

    /// Complex fringe amplitude A at detuning delta, with optional laser
    /// phase steps (applied cumulatively, each from its own time onward).
    /// The recombiner-phase fringe is P_e(phi3) = P_mean - Re(A e^{i phi3});
    /// an ideal sequence gives A = +1/2 and fringe phase arg(A) = 0.
    Complex fringe_amplitude(double delta, const std::vector<PhaseStep>& steps = {}) const;

    /// Full sequence propagator (no fringe decomposition).
    Mat2 propagator(double delta) const;

    std::size_t first_atom_of_pulse(int pulse) const;
    std::size_t end_atom_of_pulse(int pulse) const;

  private:
    SequenceSpec seq_;
    std::vector<TimelineAtom> atoms_;
    std::array<std::size_t, 3> pulse_first_{};
    std::array<std::size_t, 3> pulse_end_{};
};

// ---------------------------------------------------------------------------
// Interferometer observables
// ---------------------------------------------------------------------------

/// Interferometer phase along the two principal arms: the sum of the three
/// role-resolved pulse dispersion phases (free-evolution phases cancel for
/// equal intervals). Zero for any closed sequence at resonance and for the
/// equal-amplitude rectangular sequence at any detuning (spin echo).
double interferometer_phase(const SequenceSpec& seq, double delta);

/// Velocity-averaged fringe: contrast = 2|<A>|, mean fringe phase = arg<A>.
std::pair<double, double> fringe_contrast(const SequenceSpec& seq,
                                          const MomentumDistribution& dist = {});

PerfectMirror perfect_mirror(double duration = 2.0 * defaults::tau_rect);

/// Velocity-offset bias: the sequence is rebuilt with eps3 = eps1 - imbalance,
/// the fringe phase is averaged over `dist` shifted by v_offset, and converted
/// to an acceleration bias through the exact scale factor of the balanced
/// sequence. velocity_sensitivity is the slope of the averaged phase per unit
/// mean velocity near resonance (+-1 mm/s central difference).
BiasReport velocity_bias(const SequenceSpec& seq, const MomentumDistribution& dist,
                         double v_offset, double imbalance,
                         double k = defaults::k_eff);

/// Closed-form near-resonance sensitivity to mean atomic velocity:
/// k (dtau1 + dtau3 - 2 dtau2) for given origin shifts.
double velocity_sensitivity(double d_tau1, double d_tau2, double d_tau3,
                            double k = defaults::k_eff);

/// Closed-form fractional scale-factor error (dtau3 - dtau1)/T.
double fractional_scale_error(double d_tau1, double d_tau3, double T);

/// m1 + m2 + m3 from single-pulse characterization; zero for a closed
/// (velocity-insensitive) interferometer.
double closure_defect(const SequenceSpec& seq);

/// Dispersion gradient of one pulse of the sequence in its sequence role,
/// from single-pulse characterization (perfect mirrors give exactly zero).
double pulse_gradient(const SequenceSpec& seq, int pulse);

}  // namespace pulseorigin
