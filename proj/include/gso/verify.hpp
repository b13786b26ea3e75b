#pragma once

#include "gso/algebra.hpp"
#include "gso/wavefunctions.hpp"

#include <array>
#include <vector>

namespace gso {

// ------------------------------------------------------------ grid operators

/// Finite-difference order for the spatial stencils.
enum class StencilOrder { Second = 2, Fourth = 4 };

/// (αp² + β(xp+px) + γx² + δ/x²)ψ on the grid with p = −iħ∂_x. Entries at
/// x_0 and x_max are set to zero. With StencilOrder::Second the first-order
/// term uses the Hermitian form −iħ[(x_k+x_{k+1})ψ_{k+1} − (x_{k−1}+x_k)ψ_{k−1}]/(2h).
std::vector<cplx> apply_quadratic(const GridWavefunction& psi, cplx alpha, cplx beta, cplx gamma, cplx delta,
                                  double hbar, StencilOrder order = StencilOrder::Fourth);

/// Sesquilinear ⟨a|b⟩ by the trapezoid rule.
cplx grid_inner(const GridWavefunction& a, const std::vector<cplx>& b);

/// Fraction of the density carried by the last `cells` grid cells.
double boundary_density(const GridWavefunction& psi, std::size_t cells = 5);

/// Quadratic-form coefficients (α, β, γ, δ) of a Cartesian L-frame element.
struct QuadraticForm {
    cplx alpha, beta, gamma, delta;
};
QuadraticForm quadratic_form(const std::array<cplx, 3>& l_components, const Scenario& s);

struct GridMean {
    double value = 0.0;
    double imag = 0.0;              ///< imaginary part; non-zero only for non-Hermitian elements
    double boundary_density = 0.0;
    bool boundary_warning = false;  ///< density in the last 5 cells above 1e-10
};

/// ⟨ψ|X|ψ⟩/⟨ψ|ψ⟩ for an element in either frame (I-frame elements are
/// expanded with the invariant coefficients `qc`).
GridMean invariant_mean_on_grid(const GridWavefunction& psi, const SU11Element& element, const QuadCoeffs& qc,
                                const Scenario& s);

/// Means and covariance matrix of (I_1, I_2, I_3) on the grid.
struct GridMoments {
    Vec3 means{};
    Mat3 sigma{};
    double boundary_density = 0.0;
};
GridMoments invariant_moments_on_grid(const GridWavefunction& psi, const QuadCoeffs& qc, const Scenario& s);

// ------------------------------------------------------------ propagation

struct PropagationRun {
    Scenario scenario;
    GridSpec grid;
    double dt = 0.0;
    std::vector<GridWavefunction> snapshots;
    std::vector<double> norm_drift;      ///< |‖ψ‖² − ‖ψ₀‖²| at each snapshot
    std::vector<Vec3> invariant_means;   ///< filled when a trajectory is supplied
    std::size_t steps = 0;
};

/// Crank–Nicolson propagation of iħ∂_tψ = Hψ on [0, x_max], Dirichlet at
/// both ends, coefficients frozen at t + dt/2. Snapshots every
/// `snapshot_every` steps plus the final state. Throws NumericalError when
/// the norm drift exceeds 1e-6, ValidationError when the preconditions fail.
PropagationRun propagate(const Scenario& s, const GridWavefunction& psi0, double t_final, double dt,
                         std::size_t snapshot_every = 0, const EnvelopeTrajectory* traj = nullptr);

/// L² distance between two grid functions on the same grid.
double l2_distance(const GridWavefunction& a, const GridWavefunction& b);

// ------------------------------------------------------------ residuals

/// Central time difference used by schrodinger_residual.
inline constexpr double kResidualTimeStep = 1e-5;

/// ‖iħ∂_tΨ − HΨ‖₂ on the grid, excluding two cells at each end. The
/// default three-point stencils make the residual an O(h²) convergence probe.
double schrodinger_residual(const WaveFunction& psi, const Scenario& s, double t, const GridSpec& grid,
                            StencilOrder order = StencilOrder::Second);

// ------------------------------------------------------------ resolution of unity

enum class CoherentFamily { BarutGirardello, Perelomov };

struct UnityQuadrature {
    std::size_t radial_nodes = 200;
    std::size_t angular_nodes = 64;
    double cutoff = 25.0;  ///< |z| cutoff for Barut–Girardello; unused for Perelomov
};

/// Largest node count accepted by resolution_of_unity_check.
inline constexpr std::size_t kUnityBudget = 2'000'000;

struct UnityReport {
    std::size_t dim = 7;
    std::vector<cplx> matrix;  ///< row-major dim×dim
    double max_deviation = 0.0;
    double max_diag_deviation = 0.0;
    double max_offdiag = 0.0;
    UnityQuadrature quadrature;

    cplx at(std::size_t m, std::size_t n) const { return matrix[m * dim + n]; }
};

/// Matrix elements ⟨κ,κ+m|∫ f |·⟩⟨·| dμ|κ,κ+n⟩, m, n < dim.
UnityReport resolution_of_unity_check(CoherentFamily family, double kappa, const UnityQuadrature& q = {},
                                      std::size_t dim = 7);

}  // namespace gso
