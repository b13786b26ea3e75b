#pragma once

#include "gso/states.hpp"

#include <array>
#include <string>

namespace gso {

/// First and second moments of the invariants in one state.
struct UncertaintyReport {
    double kappa = 0.5;
    Vec3 means{};          ///< ⟨I_j⟩
    Mat3 sigma{};          ///< σ_ij = ½⟨I_iI_j + I_jI_i⟩ − ⟨I_i⟩⟨I_j⟩
    Mat3 commutator{};     ///< C_ij = −i⟨[I_i, I_j]⟩/2
    double det_sigma = 0.0;
    double det_C = 0.0;
    /// σ_iiσ_jj − σ_ij² − C_ij² for the pairs (1,2), (1,3), (2,3).
    std::array<double, 3> schrodinger_residuals{};
    /// Δ²I_j / (κ/2).
    std::array<double, 3> squeezing{};
};

/// Moments from ladder-matrix sandwiches on a basis of dimension `dim`
/// (at least the state length + 2).
UncertaintyReport moments_from_state(const FockState& state, std::size_t dim = 0);

/// Commutator matrix for given means:
/// C_12 = −⟨I_3⟩/2, C_13 = −⟨I_2⟩/2, C_23 = ⟨I_1⟩/2.
Mat3 commutator_matrix(const Vec3& means);

/// ⟨I_3^m⟩ = N²(κ + λ∂_λ)^m N^{−2}(λ), where N^{−2}(λ) = Σ λ^n|a_n|² is the
/// closed-form normalization with the self-pairing variable scaled by λ.
/// The derivatives at λ = 1 are taken by Cauchy's formula on a circle
/// inside the convergence disk.
double analytic_I3_powers(const StateParams& p, unsigned m);

/// Second moments of the w = 0 members.
struct W0Moments {
    double var1 = 0.0, var2 = 0.0, cov12 = 0.0, cov13 = 0.0, cov23 = 0.0;
    double mean_I3 = 0.0;
    std::string mean_I3_source;  ///< "closed form" or "coefficient sum"
};

/// Δ²I_1 = ½|u−v|²⟨I_3⟩/(|u|²−|v|²), Δ²I_2 = ½|u+v|²⟨I_3⟩/(|u|²−|v|²),
/// ΔI_1I_2 = Im(u*v)⟨I_3⟩/(|u|²−|v|²); ΔI_1I_3, ΔI_2I_3 from
/// ⟨I_−⟩ = (u*z − v z*)/(|u|²−|v|²). ⟨I_3⟩ comes from the closed form when
/// its series converges and from a streamed coefficient sum otherwise.
W0Moments w0_second_moments(const StateParams& p);

/// Streamed Σ(κ+n)|a_n|²/Σ|a_n|² for the w = 0 recurrence without storing
/// coefficients (cap 10⁷ terms).
double mean_I3_streamed(const StateParams& p);

struct IntelligenceDiagnosis {
    bool robertson_equality = false;
    std::array<bool, 3> schrodinger_equality{};
    double robertson_gap = 0.0;             ///< |det σ − det C| / scale
    std::array<double, 3> schrodinger_gap{};  ///< |residual| / scale
    bool all() const {
        return robertson_equality && schrodinger_equality[0] && schrodinger_equality[1] && schrodinger_equality[2];
    }
};

/// Equality tests relative to max(|det σ|, |det C|, κ³) for the determinant
/// and max(σ_iiσ_jj, κ²) for each pair.
IntelligenceDiagnosis check_intelligence(const UncertaintyReport& r, double tol = 1e-9);

}  // namespace gso
