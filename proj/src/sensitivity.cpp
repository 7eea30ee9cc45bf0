#include "pulseorigin/sensitivity.hpp"

#include <algorithm>
#include <cmath>

#include "pulseorigin/errors.hpp"
#include "pulseorigin/parallel.hpp"

namespace pulseorigin {

namespace {

constexpr Complex kI{0.0, 1.0};

// Per-pulse propagator split at an atom boundary, with the laser-phase offset
// applied to the trailing part. Used to evaluate the principal-arm phase
// response to a phase step.
struct PulseCache {
    std::size_t first = 0;              // first atom index of the pulse window
    std::vector<Mat2> prefix;           // prefix[j]: atoms [first, first+j)
    std::vector<Mat2> suffix;           // suffix[j]: atoms [first+j, end)
    Mat2 full;
};

Mat2 atom_propagator(const TimelineAtom& a, double delta) {
    if (a.kind == TimelineAtom::Kind::Flip) {
        Mat2 m = Mat2::Zero();
        m(0, 1) = -kI;
        m(1, 0) = -kI;
        return m;
    }
    return slice_propagator({a.amp, 0.0, -delta}, a.dt);
}

Mat2 shifted(const Mat2& m, double lambda) {
    if (lambda == 0.0) return m;
    const Complex e = std::exp(-kI * lambda);
    Mat2 out = m;
    out(0, 1) *= e;
    out(1, 0) *= std::conj(e);
    return out;
}

// Principal-arm interference term for the three (possibly phase-shifted)
// pulse propagators: z = [U3_eg U2_ge U1_eg] conj([U3_ee U2_eg U1_gg]).
// Free-evolution factors cancel between the two arms for equal intervals.
Complex principal_term(const Mat2& u1, const Mat2& u2, const Mat2& u3) {
    const Complex num = u3(1, 0) * u2(0, 1) * u1(1, 0);
    const Complex den = u3(1, 1) * u2(1, 0) * u1(0, 0);
    return num * std::conj(den);
}

}  // namespace

bool SensitivityProfile::closed(double tol) const { return std::abs(h_start) <= tol; }

double SensitivityProfile::origin_time(int pulse) const {
    return seq.pulse_begin(pulse) + tau_origin[pulse - 1];
}

double SensitivityProfile::midpoint_time(int pulse) const {
    return seq.pulse_begin(pulse) + 0.5 * seq.tau(pulse);
}

double SensitivityProfile::g_at(double t) const {
    if (t <= t_begin || t >= t_end) return 0.0;
    for (const GapInfo& gap : gaps)
        if (t >= gap.t0 && t <= gap.t1) return gap.g;
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    const std::size_t i = std::min<std::size_t>(it - times.begin(), times.size() - 1);
    return g[i];
}

double SensitivityProfile::h_at(double t) const {
    if (t <= t_begin) return h_start;
    if (t >= t_end) return 0.0;
    for (const GapInfo& gap : gaps)
        if (t >= gap.t0 && t <= gap.t1) return gap.h1 + gap.g * (gap.t1 - t);
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    std::size_t i = std::min<std::size_t>(it - times.begin(), times.size() - 1);
    if (i + 1 < times.size() && times[i + 1] > times[i] && t > times[i]) {
        const double w = (t - times[i]) / (times[i + 1] - times[i]);
        return (1.0 - w) * h[i] + w * h[i + 1];
    }
    return h[i];
}

SensitivityProfile sensitivity_profile(const SequenceSpec& seq, const ProfileOptions& opts) {
    seq.validate();
    if (opts.samples_per_slice < 2 || opts.samples_per_slice % 2 != 0)
        throw InvalidInput("sensitivity_profile: samples_per_slice must be even");
    if (!(opts.phase_probe > 0.0))
        throw InvalidInput("sensitivity_profile: phase_probe must be positive");

    const Timeline tl(seq, opts.samples_per_slice);
    const auto& atoms = tl.atoms();
    const std::size_t n_atoms = atoms.size();
    const double delta = opts.delta;

    // Per-pulse prefix/suffix products over the pulse's own atoms.
    std::array<PulseCache, 3> cache;
    for (int p = 0; p < 3; ++p) {
        const std::size_t a0 = tl.first_atom_of_pulse(p + 1);
        const std::size_t a1 = tl.end_atom_of_pulse(p + 1);
        const std::size_t n = a1 - a0;
        PulseCache& c = cache[p];
        c.first = a0;
        c.prefix.resize(n + 1);
        c.suffix.resize(n + 1);
        c.prefix[0] = Mat2::Identity();
        for (std::size_t j = 0; j < n; ++j)
            c.prefix[j + 1] = atom_propagator(atoms[a0 + j], delta) * c.prefix[j];
        c.suffix[n] = Mat2::Identity();
        for (std::size_t j = n; j-- > 0;)
            c.suffix[j] = c.suffix[j + 1] * atom_propagator(atoms[a0 + j], delta);
        c.full = c.prefix[n];
    }

    // Pulse propagators with a phase offset lambda applied from atom-boundary
    // sample index k onward.
    auto pulse_with_step = [&](int p, std::size_t atom_k, double lambda) -> Mat2 {
        const PulseCache& c = cache[p];
        const std::size_t n = c.prefix.size() - 1;
        if (atom_k <= c.first) return shifted(c.full, lambda);
        if (atom_k >= c.first + n) return c.full;
        const std::size_t j = atom_k - c.first;
        return shifted(c.suffix[j], lambda) * c.prefix[j];
    };

    auto phase_term = [&](std::size_t atom_k, double lambda) -> Complex {
        return principal_term(pulse_with_step(0, atom_k, lambda),
                              pulse_with_step(1, atom_k, lambda),
                              pulse_with_step(2, atom_k, lambda));
    };

    // Sample times: boundary k sits at the start of atom k; the step at a
    // boundary applies to everything from that atom onward.
    SensitivityProfile prof;
    prof.seq = seq;
    prof.k = opts.k;
    prof.t_begin = seq.t_start;
    prof.t_end = seq.t_end();

    const std::size_t n_samples = n_atoms + 1;
    prof.times.resize(n_samples);
    prof.g.assign(n_samples, 0.0);
    for (std::size_t k = 0; k < n_atoms; ++k) prof.times[k] = atoms[k].t0;
    prof.times[n_atoms] = prof.t_end;

    const Complex z0 = phase_term(n_atoms, 0.0);  // no step
    if (std::abs(z0) < 1e-30)
        throw DegenerateSequence("sensitivity_profile: vanishing interference amplitude");

    const double dphi = opts.phase_probe;
    auto g_for_step = [&](std::size_t k, double step) -> double {
        const Complex zp = phase_term(k, step);
        const Complex zm = phase_term(k, -step);
        if (std::abs(zp) < 1e-30 || std::abs(zm) < 1e-30)
            throw DegenerateSequence("sensitivity_profile: vanishing interference amplitude");
        return std::arg(zp * std::conj(zm)) / (2.0 * step);
    };

    std::vector<unsigned char> failed(n_samples, 0);
    parallel_for(n_atoms, [&](std::size_t k) {
        const double g_full = g_for_step(k, dphi);
        const double g_half = g_for_step(k, 0.5 * dphi);
        if (std::abs(g_full - g_half) > 1.0e-4 * std::max(1.0, std::abs(g_full))) failed[k] = 1;
        prof.g[k] = g_full;
    });
    for (std::size_t k = 0; k < n_atoms; ++k)
        if (failed[k])
            throw DegenerateSequence("sensitivity_profile: phase response not linear in probe");
    prof.g[n_atoms] = 0.0;

    // Block/gap structure.
    int gap_index = 0;
    for (int p = 0; p < 3; ++p) {
        const std::size_t a0 = tl.first_atom_of_pulse(p + 1);
        const std::size_t a1 = tl.end_atom_of_pulse(p + 1);
        prof.pulse_k0[p] = a0;
        prof.pulse_k1[p] = a1;
        std::size_t b0 = a0;
        for (std::size_t j = a0; j < a1; ++j) {
            if (atoms[j].kind == TimelineAtom::Kind::Flip) {
                prof.blocks.push_back({b0, j, atoms[b0].dt, p});
                b0 = j + 1;
            }
        }
        prof.blocks.push_back({b0, a1, atoms[b0].dt, p});
        if (p < 2) {
            GapInfo gap;
            gap.t0 = atoms[a1].t0;
            gap.t1 = atoms[a1].t0 + 2.0 * atoms[a1].dt;
            gap.mid = a1 + 1;
            gap.g = prof.g[gap.mid];
            prof.gaps[gap_index++] = gap;
        }
    }

    // m_j: composite Simpson over each uniform block.
    auto simpson_block = [&](const SampleBlock& b, auto weight) -> double {
        double sum = 0.0;
        for (std::size_t k = b.k0; k + 2 <= b.k1; k += 2)
            sum += (b.dt / 3.0) * (weight(k) * prof.g[k] + 4.0 * weight(k + 1) * prof.g[k + 1] +
                                   weight(k + 2) * prof.g[k + 2]);
        return sum;
    };
    prof.m = {0.0, 0.0, 0.0};
    for (const SampleBlock& b : prof.blocks)
        prof.m[b.pulse] += simpson_block(b, [](std::size_t) { return 1.0; });

    prof.tau_origin = {origin_from_gradient(prof.m[0], seq.tau(1), PulseRole::Beamsplitter1),
                       origin_from_gradient(prof.m[1], seq.tau(2), PulseRole::Mirror),
                       origin_from_gradient(prof.m[2], seq.tau(3), PulseRole::Beamsplitter3)};

    prof.h_start = prof.m[0] + prof.m[1] + prof.m[2] + prof.gaps[0].g * seq.T +
                   prof.gaps[1].g * seq.T;

    // h built from the end: Simpson pairs inside blocks (odd samples filled by
    // local trapezoid), exact-linear across gaps.
    prof.h.assign(n_samples, 0.0);
    double h_right = 0.0;  // h at the right edge of the region being walked
    // Walk blocks and gaps from the end.
    // Order of regions right-to-left: pulse3 blocks, gap2, pulse2 blocks, gap1, pulse1 blocks.
    std::vector<const SampleBlock*> by_pulse[3];
    for (const SampleBlock& b : prof.blocks) by_pulse[b.pulse].push_back(&b);

    auto fill_block = [&](const SampleBlock& b) {
        prof.h[b.k1] = h_right;
        for (std::size_t k = b.k1; k >= b.k0 + 2; k -= 2) {
            prof.h[k - 1] = prof.h[k] + 0.5 * b.dt * (prof.g[k - 1] + prof.g[k]);
            prof.h[k - 2] =
                prof.h[k] + (b.dt / 3.0) * (prof.g[k - 2] + 4.0 * prof.g[k - 1] + prof.g[k]);
        }
        h_right = prof.h[b.k0];
    };

    for (int p = 2; p >= 0; --p) {
        for (auto it = by_pulse[p].rbegin(); it != by_pulse[p].rend(); ++it) fill_block(**it);
        if (p > 0) {
            GapInfo& gap = prof.gaps[p - 1];
            gap.h1 = h_right;
            prof.h[gap.mid] = gap.h1 + gap.g * (gap.t1 - prof.times[gap.mid]);
            h_right = gap.h1 + gap.g * (gap.t1 - gap.t0);
        }
    }

    return prof;
}

// ---------------------------------------------------------------------------
// Scale factors
// ---------------------------------------------------------------------------

double scale_factor_integral(const SensitivityProfile& p, double t0) {
    double total = 0.0;
    for (const SampleBlock& b : p.blocks) {
        double sum = 0.0;
        for (std::size_t k = b.k0; k + 2 <= b.k1; k += 2) {
            sum += (b.dt / 3.0) *
                   ((p.times[k] - t0) * p.g[k] + 4.0 * (p.times[k + 1] - t0) * p.g[k + 1] +
                    (p.times[k + 2] - t0) * p.g[k + 2]);
        }
        total += sum;
    }
    for (const GapInfo& gap : p.gaps) {
        const double a = gap.t0 - t0;
        const double bnd = gap.t1 - t0;
        total += gap.g * 0.5 * (bnd * bnd - a * a);
    }
    return p.k * total;
}

double scale_factor_exact(const SensitivityProfile& p, double closure_tol) {
    if (!p.closed(closure_tol))
        throw OpenInterferometer(
            "scale_factor_exact: open interferometer; use scale_factor_open");
    return scale_factor_integral(p, p.origin_time(2));
}

std::pair<double, double> scale_factor_open(const SensitivityProfile& p, double t0) {
    if (t0 < p.t_begin || t0 > p.t_end)
        throw InvalidInput("scale_factor_open: t0 outside the sequence span");
    return {scale_factor_integral(p, t0), p.k * p.h_start};
}

double scale_factor_triangular(const SensitivityProfile& p, VertexMode mode) {
    const bool origins = mode == VertexMode::Origins;
    const double v1 = origins ? p.origin_time(1) : p.midpoint_time(1);
    const double v2 = origins ? p.origin_time(2) : p.midpoint_time(2);
    const double v3 = origins ? p.origin_time(3) : p.midpoint_time(3);
    const double l1 = v2 - v1;
    const double l2 = v3 - v2;
    return p.k * 0.5 * (l1 * l1 + l2 * l2);
}

namespace {

// Integral of the unit-slope triangle through (v1,0)->(v2,apex)->(v3,0) over
// [a, b]. The triangle is the origins-mode approximate response.
double triangle_integral(double v1, double v2, double v3, double a, double b) {
    auto value = [&](double t) -> double {
        if (t <= v1 || t >= v3) return 0.0;
        return t <= v2 ? t - v1 : v3 - t;
    };
    // piecewise linear: integrate exactly between breakpoints
    double points[5] = {a, std::clamp(v1, a, b), std::clamp(v2, a, b),
                        std::clamp(v3, a, b), b};
    std::sort(points, points + 5);
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double lo = points[i], hi = points[i + 1];
        if (hi > lo) sum += 0.5 * (value(lo) + value(hi)) * (hi - lo);
    }
    return sum;
}

}  // namespace

double dead_time(const SensitivityProfile& p) {
    const double v1 = p.origin_time(1);
    const double v2 = p.origin_time(2);
    const double v3 = p.origin_time(3);

    double integral = 0.0;
    // Pulse windows: Simpson for the sampled h, exact for the triangle.
    for (const SampleBlock& b : p.blocks) {
        double h_num = 0.0;
        for (std::size_t k = b.k0; k + 2 <= b.k1; k += 2)
            h_num += (b.dt / 3.0) * (p.h[k] + 4.0 * p.h[k + 1] + p.h[k + 2]);
        integral += triangle_integral(v1, v2, v3, p.times[b.k0], p.times[b.k1]) - h_num;
    }
    // Gaps: both curves linear, trapezoid exact.
    for (const GapInfo& gap : p.gaps) {
        const double h0 = gap.h1 + gap.g * (gap.t1 - gap.t0);
        const double num = 0.5 * (h0 + gap.h1) * (gap.t1 - gap.t0);
        integral += triangle_integral(v1, v2, v3, gap.t0, gap.t1) - num;
    }

    const double tau_d2 = 4.0 * integral;
    if (tau_d2 < 0.0)
        throw DeadTimeUndefined(
            "dead_time: triangular approximation under-estimates the response");
    return std::sqrt(tau_d2);
}

double scale_factor_trapezoidal(const SensitivityProfile& p) {
    const double td = dead_time(p);
    const double v1 = p.origin_time(1);
    const double v2 = p.origin_time(2);
    const double v3 = p.origin_time(3);
    const double h1 = (v2 - 0.5 * td) - v1;
    const double h2 = v3 - (v2 + 0.5 * td);
    return p.k * (0.5 * h1 * h1 + 0.5 * td * (h1 + h2) + 0.5 * h2 * h2);
}

ScaleFactorReport scale_factor_report(const SensitivityProfile& p) {
    ScaleFactorReport r;
    r.exact = scale_factor_exact(p);
    r.triangular_origins = scale_factor_triangular(p, VertexMode::Origins);
    r.triangular_midpoints = scale_factor_triangular(p, VertexMode::Midpoints);
    r.dead_time = dead_time(p);
    r.trapezoidal = scale_factor_trapezoidal(p);
    r.ppm_origins = (r.triangular_origins / r.exact - 1.0) * 1e6;
    r.ppm_midpoints = (r.triangular_midpoints / r.exact - 1.0) * 1e6;
    r.ppm_trapezoidal = (r.trapezoidal / r.exact - 1.0) * 1e6;
    r.m = p.m;
    r.tau_origin = p.tau_origin;
    r.T = p.seq.T;
    r.k = p.k;
    return r;
}

std::vector<double> response_shifted(const SensitivityProfile& p, double t0) {
    std::vector<double> ht = p.h;
    for (std::size_t i = 0; i < ht.size(); ++i)
        if (p.times[i] < t0) ht[i] -= p.h_start;
    return ht;
}

}  // namespace pulseorigin
