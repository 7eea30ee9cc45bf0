#include "pulseorigin/waveform.hpp"

#include <algorithm>
#include <cmath>

#include "pulseorigin/errors.hpp"

namespace pulseorigin {

double Waveform::area() const {
    double a = 0.0;
    for (double s : slices) a += std::abs(s);
    return a * dt;
}

void Waveform::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("waveform: dt must be positive");
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw InvalidInput("waveform: omega0 must be positive");
    for (double s : slices)
        if (!std::isfinite(s)) throw InvalidInput("waveform: non-finite slice amplitude");
}

Waveform rectangular_pulse(double omega, double tau, int n_slices, double omega0) {
    if (n_slices < 1) throw InvalidInput("rectangular_pulse: need at least one slice");
    if (!(tau > 0.0)) throw InvalidInput("rectangular_pulse: tau must be positive");
    Waveform w;
    w.slices.assign(static_cast<std::size_t>(n_slices), omega);
    w.dt = tau / n_slices;
    w.omega0 = omega0;
    w.label = "rect";
    return w;
}

Waveform rectangular_beamsplitter(double omega0, double tau, int n_slices) {
    return rectangular_pulse(omega0, tau, n_slices, omega0);
}

Waveform rectangular_mirror(double omega0, double tau, int n_slices) {
    Waveform w = rectangular_pulse(omega0, 2.0 * tau, n_slices, omega0);
    w.label = "rect-mirror";
    return w;
}

Waveform flip_reverse(const Waveform& w) {
    Waveform r = w;
    std::reverse(r.slices.begin(), r.slices.end());
    for (double& s : r.slices) s = -s;
    if (!r.label.empty()) r.label += "-flip-reverse";
    return r;
}

}  // namespace pulseorigin
