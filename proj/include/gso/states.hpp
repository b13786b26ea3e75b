#pragma once

#include "gso/algebra.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace gso {

/// Parameters of the eigenstate family of u·I_− + v·I_+ + w·I_3 with
/// eigenvalue z, in the representation with Bargmann index κ.
struct StateParams {
    cplx z{0.0, 0.0}, u{1.0, 0.0}, v{0.0, 0.0}, w{0.0, 0.0};
    double kappa = 0.5;

    /// Principal √(w² − 4uv).
    cplx l() const;
    /// Root −(w+l)/(2u) of u r² + w r + v = 0 (principal l).
    cplx r1() const;
    /// Root −(w−l)/(2u).
    cplx r2() const;
    /// Self-pairing s = −|w+l|²/(4|u|²).
    cplx s() const;
    /// ζ = 2l/(w+l).
    cplx zeta() const;
    /// l is treated as zero below 1e-8·max(|w|, 1, |u|, |v|).
    bool degenerate() const;
};

/// Which closed form describes the coefficients of a family member.
struct FamilyBranch {
    enum class Kind { Regular, Degenerate, Terminating } kind = Kind::Regular;
    cplx l{0.0, 0.0};  ///< branch of √(w²−4uv) used by the closed form
    unsigned degree = 0;  ///< for Terminating: κ + z/l = −degree
};

/// Classifies the parameters and checks normalizability: both roots of
/// u r² + w r + v inside the unit disk, or (for the quantized eigenvalues
/// z = −(κ+m)·l) the root belonging to the terminating branch inside the
/// disk. Throws ValidationError for non-normalizable parameters.
FamilyBranch classify(const StateParams& p);

/// a_n = r^n √((2κ)_n/n!) ₂F₁(κ+z/l, −n; 2κ; 2l/(l+w)), r = −(l+w)/(2u);
/// for |l| below threshold the exact l = 0 limit is used.
/// The terminating sum cancels when both ζ and ζ/(ζ−1) lie outside the unit
/// disk, so relative accuracy degrades with n there; build_state uses the
/// ladder recurrence instead.
cplx coeff_a_n(const StateParams& p, unsigned n);

/// Normalized coefficient vector over |κ,κ+n⟩.
struct FockState {
    double kappa = 0.5;
    std::vector<cplx> coeffs;
    double tail_bound = 0.0;  ///< estimated Σ_{n>N}|c_n|² (relative)
    std::optional<StateParams> params;
    /// |N_analytic/N_sum − 1| when a closed-form normalization is available.
    double analytic_norm_discrepancy = 0.0;
    std::optional<cplx> eigenvalue;  ///< recorded for the u = 0 branch

    std::size_t size() const { return coeffs.size(); }
};

inline constexpr double kDefaultTailTol = 1e-12;
inline constexpr std::size_t kMaxCoefficients = 5000;

/// Members with u ≠ 0. Coefficients come from the ladder recurrence
///   u√((n+1)(2κ+n)) a_{n+1} + v√(n(2κ+n−1)) a_{n−1} + (w(κ+n) − z) a_n = 0
/// (closed form for the terminating branch), truncated adaptively.
FockState build_state(const StateParams& p, double tail_tol = kDefaultTailTol);

/// u = 0 branch: eigenstates of v·I_+ + w·I_3 with eigenvalue w(κ+m),
/// supported on |κ,κ+m+n⟩, n ≥ 0. Requires |v/w| < 1.
FockState build_state_u0(unsigned m, cplx v, cplx w, double kappa, double tail_tol = kDefaultTailTol);

/// Eigenstates of I_−: c_n = z^n/√(n!(2κ)_n)/√₀F₁(2κ;|z|²).
FockState barut_girardello(cplx z, double kappa, double tail_tol = kDefaultTailTol);

/// c_n = (1−|ξ|²)^κ √((2κ)_n/n!) ξ^n, |ξ| < 1.
FockState perelomov(cplx xi, double kappa, double tail_tol = kDefaultTailTol);

/// First nmax+1 normalized coefficients without truncation control.
std::vector<cplx> barut_girardello_coeffs(cplx z, double kappa, unsigned nmax);
std::vector<cplx> perelomov_coeffs(cplx xi, double kappa, unsigned nmax);

/// Σ conj(c1_n)·c2_n; throws on κ mismatch.
cplx inner_product(const FockState& a, const FockState& b);

/// log Σ_n conj(a_n(p1))·a_n(p2) for the unnormalized coefficients a_n
/// (a_0 = 1), from the closed-form resummation.
cplx log_overlap_unnormalized(const StateParams& bra, const StateParams& ket);

/// Closed-form normalization N = (Σ|a_n|²)^{−1/2}.
double analytic_normalization(const StateParams& p);

/// Normalized ⟨p1|p2⟩ from the closed form.
cplx inner_product_analytic(const StateParams& bra, const StateParams& ket);

/// Σ λ^n |a_n|² / Σ |a_n|² at complex λ (closed form).
cplx scaled_norm_ratio(const StateParams& p, cplx lambda);
/// Same ratio at several λ, sharing the normalisation.
std::vector<cplx> scaled_norm_ratios(const StateParams& p, const std::vector<cplx>& lambdas);
/// Radius of convergence in λ of the series above.
double scaled_norm_radius(const StateParams& p);

}  // namespace gso
