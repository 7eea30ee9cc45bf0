#include "pulseorigin/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pulseorigin/errors.hpp"
#include "pulseorigin/parallel.hpp"
#include "pulseorigin/quadrature.hpp"
#include "pulseorigin/sensitivity.hpp"

namespace pulseorigin {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

double wrap_pi(double x) {
    while (x > kPi) x -= 2.0 * kPi;
    while (x <= -kPi) x += 2.0 * kPi;
    return x;
}

Mat2 flip_matrix() {
    Mat2 m = Mat2::Zero();
    m(0, 1) = -kI;
    m(1, 0) = -kI;
    return m;
}

// e^{-i lambda sigma_z / 2} M e^{+i lambda sigma_z / 2}: the effect of adding
// a constant laser phase offset lambda while M is being driven.
Mat2 with_laser_phase(const Mat2& m, double lambda) {
    if (lambda == 0.0) return m;
    const Complex r = std::exp(-kI * (0.5 * lambda));
    Mat2 out = m;
    out(0, 1) *= r * r;
    out(1, 0) *= std::conj(r) * std::conj(r);
    return out;
}

Mat2 pulse_propagator(const PulseShape& p, double delta, double eps) {
    if (std::holds_alternative<Waveform>(p))
        return waveform_propagator(std::get<Waveform>(p), delta, eps);
    const double half = 0.5 * std::get<PerfectMirror>(p).duration;
    return free_propagator(delta, half) * flip_matrix() * free_propagator(delta, half);
}

PulseRole role_of(int pulse) {
    switch (pulse) {
        case 1: return PulseRole::Beamsplitter1;
        case 2: return PulseRole::Mirror;
        default: return PulseRole::Beamsplitter3;
    }
}

}  // namespace

double pulse_duration(const PulseShape& p) {
    if (std::holds_alternative<Waveform>(p)) return std::get<Waveform>(p).duration();
    return std::get<PerfectMirror>(p).duration;
}

double SequenceSpec::tau(int pulse) const {
    switch (pulse) {
        case 1: return pulse_duration(pulse1);
        case 2: return pulse_duration(pulse2);
        case 3: return pulse_duration(pulse3);
    }
    throw InvalidInput("pulse index must be 1..3");
}

double SequenceSpec::pulse_begin(int pulse) const {
    switch (pulse) {
        case 1: return t_start;
        case 2: return t_start + tau(1) + T;
        case 3: return t_start + tau(1) + tau(2) + 2.0 * T;
    }
    throw InvalidInput("pulse index must be 1..3");
}

double SequenceSpec::pulse_end(int pulse) const { return pulse_begin(pulse) + tau(pulse); }

void SequenceSpec::validate() const {
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidInput("sequence: T must be positive");
    for (double e : eps)
        if (!std::isfinite(e)) throw InvalidInput("sequence: non-finite amplitude error");
    for (const PulseShape* p : {&pulse1, &pulse2, &pulse3}) {
        if (std::holds_alternative<Waveform>(*p)) {
            std::get<Waveform>(*p).validate();
            if (std::get<Waveform>(*p).slices.empty())
                throw InvalidInput("sequence: empty pulse waveform");
        } else if (!(std::get<PerfectMirror>(*p).duration > 0.0)) {
            throw InvalidInput("sequence: perfect mirror needs positive duration");
        }
    }
}

SequenceSpec rectangular_sequence(double omega0, double tau, double T) {
    SequenceSpec seq;
    seq.pulse1 = rectangular_beamsplitter(omega0, tau);
    seq.pulse2 = rectangular_mirror(omega0, tau);
    seq.pulse3 = rectangular_beamsplitter(omega0, tau);
    seq.T = T;
    return seq;
}

MomentumDistribution MomentumDistribution::from_momentum_width(double sigma_p_hbar_k,
                                                               double omega0) {
    MomentumDistribution d;
    // Anchor: sigma_p = 0.4 hbar*k <-> sigma_delta = omega0 / 2.
    d.sigma_delta = sigma_p_hbar_k / 0.4 * 0.5 * omega0;
    return d;
}

void MomentumDistribution::validate() const {
    if (!(sigma_delta > 0.0)) throw InvalidInput("distribution: sigma_delta must be positive");
    if (n_samples < 1) throw InvalidInput("distribution: need at least one sample");
}

// ---------------------------------------------------------------------------
// Timeline
// ---------------------------------------------------------------------------

Timeline::Timeline(const SequenceSpec& seq, int samples_per_slice) : seq_(seq) {
    seq.validate();
    if (samples_per_slice < 2 || samples_per_slice % 2 != 0)
        throw InvalidInput("timeline: samples_per_slice must be even and >= 2");

    double t = seq.t_start;

    auto add_gap = [&](double dur) {
        atoms_.push_back({TimelineAtom::Kind::Field, t, 0.5 * dur, 0.0, -1});
        atoms_.push_back({TimelineAtom::Kind::Field, t + 0.5 * dur, 0.5 * dur, 0.0, -1});
        t += dur;
    };

    auto add_pulse = [&](const PulseShape& p, int idx, double eps) {
        pulse_first_[idx] = atoms_.size();
        if (std::holds_alternative<Waveform>(p)) {
            const Waveform& w = std::get<Waveform>(p);
            const double sub = w.dt / samples_per_slice;
            for (double amp : w.slices)
                for (int s = 0; s < samples_per_slice; ++s) {
                    atoms_.push_back(
                        {TimelineAtom::Kind::Field, t, sub, (1.0 + eps) * amp, idx});
                    t += sub;
                }
        } else {
            const double half = 0.5 * std::get<PerfectMirror>(p).duration;
            const double sub = half / samples_per_slice;
            for (int s = 0; s < samples_per_slice; ++s) {
                atoms_.push_back({TimelineAtom::Kind::Field, t, sub, 0.0, idx});
                t += sub;
            }
            atoms_.push_back({TimelineAtom::Kind::Flip, t, 0.0, 0.0, idx});
            for (int s = 0; s < samples_per_slice; ++s) {
                atoms_.push_back({TimelineAtom::Kind::Field, t, sub, 0.0, idx});
                t += sub;
            }
        }
        pulse_end_[idx] = atoms_.size();
    };

    add_pulse(seq.pulse1, 0, seq.eps[0]);
    add_gap(seq.T);
    add_pulse(seq.pulse2, 1, seq.eps[1]);
    add_gap(seq.T);
    add_pulse(seq.pulse3, 2, seq.eps[2]);
}

std::size_t Timeline::first_atom_of_pulse(int pulse) const { return pulse_first_[pulse - 1]; }
std::size_t Timeline::end_atom_of_pulse(int pulse) const { return pulse_end_[pulse - 1]; }

Complex Timeline::fringe_amplitude(double delta, const std::vector<PhaseStep>& steps) const {
    std::vector<PhaseStep> sorted = steps;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const PhaseStep& a, const PhaseStep& b) { return a.time < b.time; });

    Mat2 pre3 = Mat2::Identity();
    Mat2 u3 = Mat2::Identity();
    const std::size_t first3 = pulse_first_[2];

    double lambda = 0.0;
    std::size_t si = 0;

    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const TimelineAtom& a = atoms_[i];
        Mat2& target = (i >= first3) ? u3 : pre3;

        while (si < sorted.size() && sorted[si].time <= a.t0) lambda += sorted[si++].phi;

        if (a.kind == TimelineAtom::Kind::Flip) {
            target = with_laser_phase(flip_matrix(), lambda) * target;
            continue;
        }

        double pos = a.t0;
        const double end = a.t0 + a.dt;
        while (si < sorted.size() && sorted[si].time < end) {
            const double part = sorted[si].time - pos;
            if (part > 0.0) {
                target = with_laser_phase(
                             slice_propagator({a.amp, 0.0, -delta}, part), lambda) *
                         target;
                pos = sorted[si].time;
            }
            lambda += sorted[si++].phi;
        }
        if (end > pos)
            target = with_laser_phase(slice_propagator({a.amp, 0.0, -delta}, end - pos),
                                      lambda) *
                     target;
    }

    const Vec2 psi2 = pre3.col(0);
    // P_e(phi3) = P_mean - Re(A e^{i phi3}); ideal sequences give A = +1/2.
    return -2.0 * u3(1, 0) * psi2(0) * std::conj(u3(1, 1) * psi2(1));
}

Mat2 Timeline::propagator(double delta) const {
    Mat2 u = Mat2::Identity();
    for (const TimelineAtom& a : atoms_) {
        if (a.kind == TimelineAtom::Kind::Flip)
            u = flip_matrix() * u;
        else if (a.dt > 0.0)
            u = slice_propagator({a.amp, 0.0, -delta}, a.dt) * u;
    }
    return u;
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

double interferometer_phase(const SequenceSpec& seq, double delta) {
    seq.validate();
    const std::array<const PulseShape*, 3> pulses{&seq.pulse1, &seq.pulse2, &seq.pulse3};
    double total = kPi;  // reference: ideal sequence reads zero
    for (int j = 0; j < 3; ++j) {
        const Mat2 u = pulse_propagator(*pulses[j], delta, seq.eps[j]);
        try {
            total += dispersion_phase_raw(u, role_of(j + 1));
        } catch (const UndefinedPhase&) {
            throw DegenerateSequence("interferometer_phase: degenerate fringe");
        }
    }
    return wrap_pi(total);
}

namespace {

// Fringe amplitude along the two principal arms. The remaining interference
// terms carry free-evolution factors e^{+-i delta T} and e^{+-2i delta T};
// averaged over a velocity spread they are suppressed by exp(-(n sigma T)^2/2),
// which is far below double precision for any physical sigma and T here, so
// the principal term IS the velocity-averaged fringe integrand.
Complex principal_fringe(const SequenceSpec& seq, double delta) {
    const Mat2 u1 = pulse_propagator(seq.pulse1, delta, seq.eps[0]);
    const Mat2 u2 = pulse_propagator(seq.pulse2, delta, seq.eps[1]);
    const Mat2 u3 = pulse_propagator(seq.pulse3, delta, seq.eps[2]);
    const Complex num = u3(1, 0) * u2(0, 1) * u1(1, 0);
    const Complex den = u3(1, 1) * u2(1, 0) * u1(0, 0);
    return -2.0 * num * std::conj(den);
}

Complex averaged_fringe(const SequenceSpec& seq, const MomentumDistribution& dist, double k) {
    dist.validate();
    const double mean_delta = k * dist.mean_v;
    const QuadratureRule rule =
        dist.quadrature == MomentumDistribution::Quadrature::GaussHermite
            ? gaussian_average(dist.n_samples, mean_delta, dist.sigma_delta)
            : gaussian_average_uniform(dist.n_samples, mean_delta, dist.sigma_delta);

    std::vector<Complex> parts(rule.nodes.size());
    parallel_for(rule.nodes.size(),
                 [&](std::size_t i) { parts[i] = principal_fringe(seq, rule.nodes[i]); });
    Complex mean = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) mean += rule.weights[i] * parts[i];
    return mean;
}

}  // namespace

std::pair<double, double> fringe_contrast(const SequenceSpec& seq,
                                          const MomentumDistribution& dist) {
    const Complex mean = averaged_fringe(seq, dist, defaults::k_eff);
    return {2.0 * std::abs(mean), std::arg(mean)};
}

PerfectMirror perfect_mirror(double duration) { return PerfectMirror{duration}; }

double velocity_sensitivity(double d_tau1, double d_tau2, double d_tau3, double k) {
    return k * (d_tau1 + d_tau3 - 2.0 * d_tau2);
}

double fractional_scale_error(double d_tau1, double d_tau3, double T) {
    if (!(T > 0.0)) throw InvalidInput("fractional_scale_error: T must be positive");
    return (d_tau3 - d_tau1) / T;
}

double pulse_gradient(const SequenceSpec& seq, int pulse) {
    const std::array<const PulseShape*, 3> pulses{&seq.pulse1, &seq.pulse2, &seq.pulse3};
    const PulseShape& p = *pulses[pulse - 1];
    if (std::holds_alternative<PerfectMirror>(p)) return 0.0;  // zero Doppler sensitivity
    return dispersion_gradient(std::get<Waveform>(p), role_of(pulse), seq.eps[pulse - 1]);
}

double closure_defect(const SequenceSpec& seq) {
    seq.validate();
    return pulse_gradient(seq, 1) + pulse_gradient(seq, 2) + pulse_gradient(seq, 3);
}

BiasReport velocity_bias(const SequenceSpec& seq, const MomentumDistribution& dist,
                         double v_offset, double imbalance, double k) {
    seq.validate();
    SequenceSpec imbalanced = seq;
    imbalanced.eps[2] = seq.eps[0] - imbalance;

    MomentumDistribution shifted = dist;
    shifted.mean_v = dist.mean_v + v_offset;

    BiasReport report;
    const Complex mean = averaged_fringe(imbalanced, shifted, k);
    if (std::abs(mean) < 1e-300)
        throw DegenerateSequence("velocity_bias: vanishing fringe amplitude");
    report.phase_bias = std::arg(mean);
    report.contrast = 2.0 * std::abs(mean);

    // Convert through the exact scale factor of the balanced sequence.
    const SensitivityProfile profile = sensitivity_profile(seq, {.k = k});
    const double s = scale_factor_exact(profile);
    report.accel_bias = report.phase_bias / (s * defaults::g_std);

    // Averaged-phase slope per unit mean velocity near resonance.
    const double dv = 1.0e-3;
    MomentumDistribution lo = dist, hi = dist;
    lo.mean_v = dist.mean_v - dv;
    hi.mean_v = dist.mean_v + dv;
    const double phi_lo = std::arg(averaged_fringe(imbalanced, lo, k));
    const double phi_hi = std::arg(averaged_fringe(imbalanced, hi, k));
    report.velocity_sensitivity = wrap_pi(phi_hi - phi_lo) / (2.0 * dv);
    return report;
}

}  // namespace pulseorigin
