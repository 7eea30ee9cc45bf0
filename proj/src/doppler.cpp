#include "pulseorigin/doppler.hpp"

#include <cmath>

#include "pulseorigin/errors.hpp"

namespace pulseorigin {

namespace {

struct JumpTimes {
    double j1 = 0.0;
    double j2 = 0.0;
    double j3 = 0.0;
};

JumpTimes jump_times(const SequenceSpec& seq, const DopplerScheme& s) {
    const double shift =
        s.kind == DopplerKind::PhaseDiscontinuousJumps ? s.delta_t_j : 0.0;
    JumpTimes t;
    t.j1 = seq.pulse_begin(1) - (s.t_j - shift);
    t.j2 = seq.pulse_begin(2) + 0.5 * seq.tau(2) - s.t_j;
    t.j3 = seq.pulse_end(3) - (s.t_j + shift);
    return t;
}

void validate_jumps(const SensitivityProfile& p, const JumpTimes& t) {
    const SequenceSpec& seq = p.seq;
    if (t.j1 > seq.pulse_begin(1))
        throw UnsupportedTiming("doppler: first jump must precede pulse 1");
    if (!(t.j2 >= p.gaps[0].t0 && t.j2 <= p.gaps[0].t1))
        throw UnsupportedTiming("doppler: second jump must fall between pulses 1 and 2");
    if (!(t.j3 >= p.gaps[1].t0 && t.j3 <= p.gaps[1].t1))
        throw UnsupportedTiming("doppler: third jump must fall between pulses 2 and 3");
}

}  // namespace

std::string to_string(DopplerKind kind) {
    switch (kind) {
        case DopplerKind::ContinuousChirp: return "continuous-chirp";
        case DopplerKind::PhaseContinuousJumps: return "phase-continuous-jumps";
        case DopplerKind::PhaseDiscontinuousJumps: return "phase-discontinuous-jumps";
    }
    return "?";
}

DopplerKind doppler_kind_from_string(const std::string& s) {
    if (s == "continuous-chirp" || s == "chirp") return DopplerKind::ContinuousChirp;
    if (s == "phase-continuous-jumps" || s == "continuous")
        return DopplerKind::PhaseContinuousJumps;
    if (s == "phase-discontinuous-jumps" || s == "discontinuous")
        return DopplerKind::PhaseDiscontinuousJumps;
    throw InvalidInput("unknown doppler scheme: " + s);
}

DopplerScheme tracking_scheme(DopplerKind kind, const SequenceSpec& seq, double a, double k,
                              double t_j, double delta_t_j) {
    DopplerScheme s;
    s.kind = kind;
    s.delta_t_j = delta_t_j;
    if (kind == DopplerKind::ContinuousChirp) {
        s.chirp_rate = k * a;
        return s;
    }
    // Default lead time: middle of the free-evolution gap, measured from the
    // mirror center, so both jumps land between pulses.
    s.t_j = t_j >= 0.0 ? t_j : 0.5 * seq.tau(2) + 0.5 * seq.T;
    const double step1 = -k * a * (seq.tau(1) + seq.T + 0.5 * seq.tau(2));
    const double step2 = -k * a * (0.5 * seq.tau(2) + seq.T + seq.tau(3));
    s.delta_L = {-step1, 0.0, step2};  // resonant during the mirror
    return s;
}

double laser_phase(const SensitivityProfile& p, const DopplerScheme& s) {
    if (s.kind == DopplerKind::ContinuousChirp) {
        // delta_L(t) = -alpha (t - t_ref), resonant at the mirror origin.
        return -s.chirp_rate / p.k * scale_factor_integral(p, p.origin_time(2));
    }

    const JumpTimes jumps = jump_times(p.seq, s);
    validate_jumps(p, jumps);
    const auto [dl1, dl2, dl3] = s.delta_L;

    double phi = dl1 * p.m[0] + dl2 * p.m[1] + dl3 * p.m[2];
    const GapInfo& gap1 = p.gaps[0];
    const GapInfo& gap2 = p.gaps[1];
    phi += gap1.g * (dl1 * (jumps.j2 - gap1.t0) + dl2 * (gap1.t1 - jumps.j2));
    phi += gap2.g * (dl2 * (jumps.j3 - gap2.t0) + dl3 * (gap2.t1 - jumps.j3));

    if (s.kind == DopplerKind::PhaseDiscontinuousJumps) {
        // A reset subtracts the laser phase accumulated since the previous
        // jump; its effect on the interferometer is -g(t_reset) * phase.
        const double phi_12 = dl1 * (jumps.j2 - jumps.j1);
        const double phi_23 = dl2 * (jumps.j3 - jumps.j2);
        phi += -gap1.g * phi_12 - gap2.g * phi_23;
    }
    return phi;
}

LaserPhaseReport total_phase(const SensitivityProfile& p, const DopplerScheme& scheme,
                             double a, double v0) {
    LaserPhaseReport r;
    r.laser_phase = laser_phase(p, scheme);
    const double s_factor = scale_factor_integral(p, p.origin_time(2));
    r.inertial_phase = p.k * v0 * p.h_start + a * s_factor;
    r.total = r.laser_phase + r.inertial_phase;
    r.residual_bias = r.total / (s_factor * defaults::g_std);
    return r;
}

double optimal_jump_shift(const PulseCharacterization& pulse3) {
    return pulse3.duration - pulse3.m;
}

double optimal_jump_shift(double tau3, double m3) { return tau3 - m3; }

std::vector<BiasSweepPoint> compensation_bias_sweep(
    const std::function<SequenceSpec(double)>& seq_family, DopplerKind kind,
    const std::vector<double>& T_list, double imbalance, const std::string& family_label,
    double k, int samples_per_slice) {
    std::vector<BiasSweepPoint> out;
    out.reserve(T_list.size());
    ProfileOptions opts;
    opts.k = k;
    opts.samples_per_slice = samples_per_slice;

    for (double T : T_list) {
        SequenceSpec balanced = seq_family(T);
        const SensitivityProfile nominal = sensitivity_profile(balanced, opts);
        const double dtj = optimal_jump_shift(balanced.tau(3), nominal.m[2]);
        const double s_factor = scale_factor_integral(nominal, nominal.origin_time(2));

        SequenceSpec imbalanced = balanced;
        imbalanced.eps[2] = balanced.eps[0] - imbalance;
        const SensitivityProfile actual = sensitivity_profile(imbalanced, opts);

        const DopplerScheme scheme =
            tracking_scheme(kind, balanced, defaults::g_std, k, -1.0, dtj);
        const double phi = laser_phase(actual, scheme);

        BiasSweepPoint pt;
        pt.T = T;
        pt.phase = phi;
        pt.bias = phi / (s_factor * defaults::g_std);
        pt.scheme = to_string(kind);
        pt.family = family_label;
        out.push_back(pt);
    }
    return out;
}

}  // namespace pulseorigin
