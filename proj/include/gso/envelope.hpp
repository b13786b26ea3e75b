#pragma once

#include "gso/scenario.hpp"

#include <complex>
#include <vector>

namespace gso {

using cplx = std::complex<double>;

/// Ω²(t) = ω² − 2bṁ/m + ṁ²/(4m²) − m̈/(2m) − 4b² − 2ḃ.
double effective_frequency_sq(const Scenario& s, double t);

/// Envelope and its phase at one instant. `theta` is the continuous
/// argument of ε, equal to arg ε(t0) plus the integral of 1/|ε|².
struct EnvelopePoint {
    double t = 0.0;
    cplx eps, eps_dot;
    double theta = 0.0;
};

/// Samples of the complex envelope solving ε̈ + Ω²ε = 0 with Wronskian
/// ε*ε̇ − εε̇* = 2i. The trajectory keeps a copy of its scenario so that it
/// can produce values between samples by a short Runge–Kutta step.
class EnvelopeTrajectory {
public:
    std::vector<double> times;
    std::vector<cplx> eps;
    std::vector<cplx> eps_dot;
    std::vector<double> omega_sq;
    std::vector<double> wronskian_residual;
    std::vector<double> theta;  ///< unwrapped arg ε at every sample
    Scenario scenario;

    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }
    double max_wronskian_residual() const;
    /// ε, ε̇ and the unwrapped phase at arbitrary t inside the span.
    EnvelopePoint at(double t) const;
};

/// Classic fourth-order Runge–Kutta at the scenario's fixed step.
/// Canonical start uses ε(t0) = 1/√Ω₀, ε̇(t0) = i√Ω₀. Throws NumericalError
/// when the Wronskian residual exceeds 1e-6.
EnvelopeTrajectory integrate_envelope(const Scenario& s);

/// Largest |Δε| between a run at dt and a run at dt/2 on the common samples.
double step_halving_discrepancy(const Scenario& s);

/// Coefficients of the quadratic invariant αp² + β(xp+px) + γx² + δ/x².
struct QuadCoeffs {
    double t = 0.0;
    cplx alpha, beta, gamma, delta;
};

QuadCoeffs quad_coeffs(const EnvelopeTrajectory& traj, const Scenario& s, double t);
QuadCoeffs quad_coeffs(const EnvelopePoint& p, const Scenario& s);

/// γ12 = ∫_{t1}^{t2} dτ/|ε(τ)|², composite Simpson over the sample intervals.
double phase_gamma12(const EnvelopeTrajectory& traj, double t1, double t2);

}  // namespace gso
