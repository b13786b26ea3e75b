#pragma once

#include "gso/envelope.hpp"
#include "gso/states.hpp"

#include <functional>
#include <string>
#include <vector>

namespace gso {

/// Samples on the uniform half-line grid; values[0] = 0 (Dirichlet).
struct GridWavefunction {
    GridSpec grid;
    std::vector<cplx> values;
    double time = 0.0;
    std::string note;  ///< free-form metadata (e.g. phase convention)

    double norm() const;  ///< L² norm by the trapezoid rule
};

/// Closed-form wavefunction Ψ(x, t).
using WaveFunction = std::function<cplx(double x, double t)>;

/// 12·sqrt(ħ·max|ε|²/min m) over the trajectory.
double default_x_max(const EnvelopeTrajectory& traj, const Scenario& s);
/// The scenario grid with x_max resolved.
GridSpec resolve_grid(const EnvelopeTrajectory& traj, const Scenario& s, GridSpec g);

GridWavefunction sample(const WaveFunction& f, const GridSpec& grid, double t);

/// Coefficient of m·ṁ in the quadratic phase of Ψ_z: the factor ṁ/(2m)
/// shared with Ψ_n and Ψ_ξ, or the alternative ṁ/m.
enum class PhaseConvention { HalfMassRate, FullMassRate };
const char* to_string(PhaseConvention c);

/// Ψ_n = √(2n!/Γ(2κ+n))(m/ħ)^κ ρ^{−2κ} e^{−2i(κ+n)θ} x^{2κ−1/2}
///       exp[−i(m/2ħ)(2b + ṁ/(2m) − ε̇/ε)x²] L_n^{2κ−1}(mx²/(ħρ²)),
/// ρ = |ε|, θ the continuous phase of ε.
WaveFunction make_psi_n(const EnvelopeTrajectory& traj, double kappa, unsigned n);

/// Barut–Girardello wavefunction in ₀F₁ (Bessel) form.
WaveFunction make_psi_z(const EnvelopeTrajectory& traj, double kappa, cplx z,
                        PhaseConvention conv = PhaseConvention::HalfMassRate);

/// Perelomov wavefunction, |ξ| < 1.
WaveFunction make_psi_xi(const EnvelopeTrajectory& traj, double kappa, cplx xi);

/// Σ c_n Ψ_n for an arbitrary coefficient vector, Ψ_n as in make_psi_n.
WaveFunction make_superposition(const EnvelopeTrajectory& traj, double kappa, std::vector<cplx> coeffs);

/// Position representation of a number-basis state. The Laguerre form of
/// Ψ_n equals (−1)^n times the state reached from Ψ_0 by the raising
/// invariant I_+ with positive matrix elements, so the map is
/// Σ (−1)^n c_n Ψ_n. Consequently make_psi_z(z) represents the
/// Barut–Girardello state of eigenvalue −z and make_psi_xi(ξ) the
/// Perelomov state of parameter −ξ.
WaveFunction make_state_wavefunction(const EnvelopeTrajectory& traj, const FockState& state);

GridWavefunction wavefunction_psi_n(const EnvelopeTrajectory& traj, double kappa, unsigned n, double t,
                                    const GridSpec& grid);
GridWavefunction wavefunction_psi_z(const EnvelopeTrajectory& traj, double kappa, cplx z, double t,
                                    const GridSpec& grid, PhaseConvention conv = PhaseConvention::HalfMassRate);
GridWavefunction wavefunction_psi_xi(const EnvelopeTrajectory& traj, double kappa, cplx xi, double t,
                                     const GridSpec& grid);

/// Closed-form propagator G(x2,t2; x1,t1) for t1 < t2, phase γ12 in (0, π)
/// away from caustics. `eta` > 0 shifts γ12 → γ12 − iη (Abel damping of the
/// spectral sum by e^{−2η(κ+n)}); with eta > 0 the Bessel argument must
/// satisfy |·| ≤ 30.
cplx green_function(const EnvelopeTrajectory& traj, double kappa, double x2, double t2, double x1, double t1,
                    double eta = 0.0);

/// G(·, t2; ·, t1) with the time-dependent factors evaluated once; called
/// as kernel(x2, x1). The trajectory need not outlive the kernel.
using GreenKernel = std::function<cplx(double x2, double x1)>;
GreenKernel make_green_kernel(const EnvelopeTrajectory& traj, double kappa, double t2, double t1, double eta = 0.0);

/// Σ_{n<N} e^{−2η(κ+n)} Ψ_n(x2,t2) Ψ_n*(x1,t1).
cplx green_spectral_sum(const EnvelopeTrajectory& traj, double kappa, double x2, double t2, double x1, double t1,
                        unsigned nterms, double eta = 0.0);

}  // namespace gso
