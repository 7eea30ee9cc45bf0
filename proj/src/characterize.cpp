#include "pulseorigin/characterize.hpp"

#include <cmath>
#include <numbers>

#include "pulseorigin/errors.hpp"

namespace pulseorigin {

namespace {

constexpr double kPoleTol = 1.0e-6;  // minimum pole population for a defined phase
constexpr double kPi = std::numbers::pi;

// The two matrix elements whose relative phase carries the pulse's
// contribution to the interferometer phase, by role.
std::pair<Complex, Complex> role_elements(const Mat2& u, PulseRole role) {
    switch (role) {
        case PulseRole::Beamsplitter1: return {u(1, 0), u(0, 0)};  // e<-g vs g<-g
        case PulseRole::Mirror: return {u(0, 1), u(1, 0)};         // g<-e vs e<-g
        case PulseRole::Beamsplitter3: return {u(1, 0), u(1, 1)};  // e<-g vs e<-e
    }
    throw InvalidInput("unknown pulse role");
}

double phase_of(const Mat2& u, PulseRole role) {
    auto [num, den] = role_elements(u, role);
    if (std::norm(num) < kPoleTol || std::norm(den) < kPoleTol)
        throw UndefinedPhase("dispersion phase undefined: state within 1e-6 of a pole");
    return std::arg(num * std::conj(den));
}

double wrap_pi(double x) {
    while (x > kPi) x -= 2.0 * kPi;
    while (x <= -kPi) x += 2.0 * kPi;
    return x;
}

}  // namespace

std::string to_string(PulseRole role) {
    switch (role) {
        case PulseRole::Beamsplitter1: return "beamsplitter-1";
        case PulseRole::Mirror: return "mirror";
        case PulseRole::Beamsplitter3: return "beamsplitter-3";
    }
    return "?";
}

PulseRole role_from_string(const std::string& s) {
    if (s == "beamsplitter-1" || s == "bs1") return PulseRole::Beamsplitter1;
    if (s == "mirror") return PulseRole::Mirror;
    if (s == "beamsplitter-3" || s == "bs3") return PulseRole::Beamsplitter3;
    throw InvalidInput("unknown pulse role: " + s);
}

double dispersion_phase_raw(const Mat2& u, PulseRole role) { return phase_of(u, role); }

double superposition_phase(const Waveform& w, double delta, double eps) {
    const double raw = phase_of(waveform_propagator(w, delta, eps), PulseRole::Beamsplitter1);
    const double ref = phase_of(waveform_propagator(w, 0.0, eps), PulseRole::Beamsplitter1);
    return wrap_pi(raw - ref);
}

double dispersion_gradient(const Waveform& w, PulseRole role, double eps, double fd_step_frac) {
    w.validate();
    const double h = fd_step_frac * w.omega0;

    auto slope = [&](double step) {
        const double p = phase_of(waveform_propagator(w, step, eps), role);
        const double m = phase_of(waveform_propagator(w, -step, eps), role);
        return wrap_pi(p - m) / (2.0 * step);
    };

    // Richardson extrapolation of the central difference: O(h^4) error.
    const double g_h = slope(h);
    const double g_h2 = slope(0.5 * h);
    return (4.0 * g_h2 - g_h) / 3.0;
}

double origin_from_gradient(double m, double tau, PulseRole role) {
    switch (role) {
        case PulseRole::Beamsplitter1: return tau + m;
        case PulseRole::Mirror: return 0.5 * (tau - m);
        case PulseRole::Beamsplitter3: return m;
    }
    throw InvalidInput("unknown pulse role");
}

double temporal_origin(const Waveform& w, PulseRole role, double eps, double fd_step_frac) {
    return origin_from_gradient(dispersion_gradient(w, role, eps, fd_step_frac), w.duration(),
                                role);
}

double rectangular_origin_analytic(double omega, double tau) {
    if (!(omega > 0.0) || !(tau > 0.0))
        throw InvalidInput("rectangular_origin_analytic: omega and tau must be positive");
    const double half = 0.5 * omega * tau;
    // tan poles at half = pi/2 + n*pi.
    const double distance = std::abs(std::remainder(half - 0.5 * kPi, kPi));
    if (distance < 1.0e-9)
        throw SingularityError("rectangular_origin_analytic: omega*tau/2 at a tangent pole");
    return tau - std::tan(half) / omega;
}

double transfer_probability(const Waveform& w, double delta, double eps) {
    return std::norm(waveform_propagator(w, delta, eps)(1, 0));
}

void unwrap_phases(std::vector<double>& phases, std::size_t anchor) {
    if (phases.empty()) return;
    for (std::size_t i = anchor + 1; i < phases.size(); ++i)
        phases[i] = phases[i - 1] + wrap_pi(phases[i] - phases[i - 1]);
    for (std::size_t i = anchor; i-- > 0;)
        phases[i] = phases[i + 1] + wrap_pi(phases[i] - phases[i + 1]);
}

PulseCharacterization characterize_pulse(const Waveform& w, PulseRole role,
                                         const CharacterizeOptions& opts) {
    w.validate();
    PulseCharacterization c;
    c.role = role;
    c.duration = w.duration();
    c.m = dispersion_gradient(w, role, opts.eps, opts.fd_step_frac);
    c.tau_origin = origin_from_gradient(c.m, c.duration, role);

    const int n = opts.grid_points;
    if (n > 0) {
        const double span = opts.grid_span_omega0 * w.omega0;
        std::vector<double> phases(static_cast<std::size_t>(n));
        c.grid.resize(static_cast<std::size_t>(n));
        std::size_t anchor = 0;
        double best = std::numeric_limits<double>::max();
        for (int i = 0; i < n; ++i) {
            const double delta = (n == 1) ? 0.0 : -span + 2.0 * span * i / (n - 1);
            const Mat2 u = waveform_propagator(w, delta, opts.eps);
            c.grid[i].delta = delta;
            c.grid[i].p_e = std::norm(u(1, 0));
            phases[i] = phase_of(u, role);
            if (std::abs(delta) < best) {
                best = std::abs(delta);
                anchor = static_cast<std::size_t>(i);
            }
        }
        unwrap_phases(phases, anchor);
        const double ref = phases[anchor];
        for (int i = 0; i < n; ++i) c.grid[i].phi = phases[i] - ref;
    }
    return c;
}

}  // namespace pulseorigin
