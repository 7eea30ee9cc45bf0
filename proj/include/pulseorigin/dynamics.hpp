#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "pulseorigin/waveform.hpp"

namespace pulseorigin {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

/// Rotating-frame field vector, rad/s: (Omega*cos(phi), Omega*sin(phi), -delta).
struct FieldVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
};

/// Two-level amplitudes (c_g, c_e). Basis order is |g> = (1,0), |e> = (0,1),
/// which puts |g> at the +z pole of the Bloch sphere.
struct TwoLevelState {
    Complex c_g{1.0, 0.0};
    Complex c_e{0.0, 0.0};

    Vec2 vec() const { return Vec2(c_g, c_e); }
    static TwoLevelState from_vec(const Vec2& v) { return {v(0), v(1)}; }
    static TwoLevelState ground() { return {}; }

    double norm() const;
};

/// exp(-i Omega.sigma dt / 2), evaluated in exact axis-angle form so the
/// result is unitary to machine precision for any dt.
Mat2 slice_propagator(const FieldVector& field, double dt);

/// Free evolution for time t at detuning delta (field vector (0,0,-delta)).
Mat2 free_propagator(double delta, double t);

/// Time-ordered product U_M ... U_1 over the waveform slices, with every
/// amplitude scaled by (1+eps). The detuning is unaffected by eps.
Mat2 waveform_propagator(const Waveform& w, double delta, double eps);

/// Free evolution of a state: the relative phase arg(c_e/c_g) advances by
/// -delta*t; populations are unchanged.
TwoLevelState evolve_free(const TwoLevelState& s, double delta, double t);

/// Bloch vector <sigma> of a normalized state; |g> maps to (0,0,+1).
std::array<double, 3> bloch_coords(const TwoLevelState& s);

/// max |(U^dag U - I)_ij|; handy for unitarity checks.
double unitarity_defect(const Mat2& u);

/// Derivative of slice_propagator({amp,0,-delta}, dt) with respect to amp.
/// Exact (no first-order-in-dt approximation), finite in the amp,delta -> 0
/// limit.
Mat2 slice_propagator_damp(double amp, double delta, double dt);

}  // namespace pulseorigin
