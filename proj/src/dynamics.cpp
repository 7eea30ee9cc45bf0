#include "pulseorigin/dynamics.hpp"

#include <cmath>

#include "pulseorigin/errors.hpp"

namespace pulseorigin {

namespace {

constexpr Complex kI{0.0, 1.0};

// sin(x)/x with series fallback near zero.
double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// (cos(x) - sinc(x)) / x^2, regular at zero. Appears in the exact derivative
// of the axis-angle exponential.
double cosc(double x) {
    if (std::abs(x) < 1e-3) {
        const double x2 = x * x;
        return -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0;
    }
    return (std::cos(x) - sinc(x)) / (x * x);
}

// U = q0*I - i*(qx*sx + qy*sy + qz*sz) for a unit quaternion (q0, q).
Mat2 from_quaternion(double q0, double qx, double qy, double qz) {
    Mat2 u;
    u(0, 0) = Complex(q0, -qz);
    u(0, 1) = Complex(-qy, -qx);
    u(1, 0) = Complex(qy, -qx);
    u(1, 1) = Complex(q0, qz);
    return u;
}

}  // namespace

double FieldVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

double TwoLevelState::norm() const { return std::sqrt(std::norm(c_g) + std::norm(c_e)); }

Mat2 slice_propagator(const FieldVector& field, double dt) {
    if (!std::isfinite(field.x) || !std::isfinite(field.y) || !std::isfinite(field.z))
        throw InvalidInput("slice_propagator: non-finite field components");
    if (!(dt > 0.0)) throw InvalidInput("slice_propagator: dt must be positive");

    // Half rotation angle phi = |Omega| dt / 2; q = (dt/2) sinc(phi) Omega.
    const double mag = field.norm();
    const double phi = 0.5 * mag * dt;
    const double s = 0.5 * dt * sinc(phi);
    return from_quaternion(std::cos(phi), s * field.x, s * field.y, s * field.z);
}

Mat2 free_propagator(double delta, double t) {
    if (!std::isfinite(delta) || !std::isfinite(t))
        throw InvalidInput("free_propagator: non-finite input");
    Mat2 u = Mat2::Zero();
    u(0, 0) = std::exp(kI * (0.5 * delta * t));
    u(1, 1) = std::exp(-kI * (0.5 * delta * t));
    return u;
}

Mat2 waveform_propagator(const Waveform& w, double delta, double eps) {
    w.validate();
    if (w.slices.empty()) throw InvalidInput("waveform_propagator: empty waveform");
    if (!std::isfinite(delta) || !std::isfinite(eps))
        throw InvalidInput("waveform_propagator: non-finite input");

    Mat2 u = Mat2::Identity();
    for (double amp : w.slices) {
        const FieldVector f{(1.0 + eps) * amp, 0.0, -delta};
        u = slice_propagator(f, w.dt) * u;
    }
    return u;
}

TwoLevelState evolve_free(const TwoLevelState& s, double delta, double t) {
    if (t < 0.0) throw InvalidInput("evolve_free: negative time");
    const Vec2 v = free_propagator(delta, t) * s.vec();
    return TwoLevelState::from_vec(v);
}

std::array<double, 3> bloch_coords(const TwoLevelState& s) {
    const Complex cross = std::conj(s.c_g) * s.c_e;
    return {2.0 * cross.real(), 2.0 * cross.imag(),
            std::norm(s.c_g) - std::norm(s.c_e)};
}

double unitarity_defect(const Mat2& u) {
    const Mat2 d = u.adjoint() * u - Mat2::Identity();
    return d.cwiseAbs().maxCoeff();
}

Mat2 slice_propagator_damp(double amp, double delta, double dt) {
    // v = (amp, 0, -delta), dv/damp = (1, 0, 0).
    // q0 = cos(phi), q = (dt/2) sinc(phi) v with phi = |v| dt/2, so
    //   dq0/damp = -(dt/2)^2 sinc(phi) * amp
    //   dq/damp  = (dt/2) [ sinc(phi) e_x + (dt/2)^2 cosc(phi)/1 * (v.e_x) v ]
    // where cosc(phi) = sinc'(phi)/phi.
    const double h = 0.5 * dt;
    const double mag = std::sqrt(amp * amp + delta * delta);
    const double phi = mag * h;
    const double snc = sinc(phi);
    const double csc = cosc(phi);

    const double dq0 = -h * h * snc * amp;
    const double dqx = h * (snc + h * h * csc * amp * amp);
    const double dqz = h * (h * h * csc * amp * (-delta));

    Mat2 du;
    du(0, 0) = Complex(dq0, -dqz);
    du(0, 1) = Complex(0.0, -dqx);
    du(1, 0) = Complex(0.0, -dqx);
    du(1, 1) = Complex(dq0, dqz);
    return du;
}

}  // namespace pulseorigin
