#pragma once

#include "gso/envelope.hpp"

#include <array>
#include <complex>
#include <vector>

namespace gso {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

Mat3 identity3();
Mat3 multiply(const Mat3& a, const Mat3& b);
Mat3 transpose(const Mat3& a);
double determinant(const Mat3& a);
Mat3 inverse(const Mat3& a);  ///< throws NumericalError if |det| < 1e-12
double max_abs_diff(const Mat3& a, const Mat3& b);

// ------------------------------------------------------------ Bargmann index

enum class KappaBranch { Principal, Secondary };

struct KappaIndex {
    double c = 0.0;
    double kappa = 0.5;
    KappaBranch branch = KappaBranch::Principal;
};

/// κ from κ(κ−1) = −3/16 + c/4: 2κ = 1 ± ½√(1+4c). Rejects 1+4c < 0 and
/// κ ≤ 1/4; the boundary value κ = 1/4 passes only with `allow_quarter`.
KappaIndex kappa_from_c(double c, KappaBranch branch = KappaBranch::Principal, bool allow_quarter = false);

/// Casimir value κ(κ−1) for the coupling c, i.e. −3/16 + c/4.
inline double casimir_value(double c) { return -3.0 / 16.0 + c / 4.0; }

// ----------------------------------------------------------- su(1,1) elements

enum class Frame { L, I };

/// X = coeff_minus·K_− + coeff_plus·K_+ + coeff_3·K_3 where K is either the
/// static generators L_j or the invariants I_j(t) (tagged by `frame`), and
/// K_± = K_1 ± iK_2.
class SU11Element {
public:
    cplx coeff_minus{0.0, 0.0};
    cplx coeff_plus{0.0, 0.0};
    cplx coeff_3{0.0, 0.0};
    Frame frame = Frame::L;
    double frame_time = 0.0;  ///< meaningful for Frame::I

    /// From Cartesian components X = x1·K_1 + x2·K_2 + x3·K_3.
    static SU11Element from_cartesian(cplx x1, cplx x2, cplx x3, Frame f = Frame::L, double t = 0.0);
    static SU11Element from_cartesian(const Vec3& x, Frame f = Frame::L, double t = 0.0);
    /// The combination u·K_− + v·K_+ + w·K_3.
    static SU11Element combination(cplx u, cplx v, cplx w, Frame f = Frame::L, double t = 0.0);

    std::array<cplx, 3> cartesian() const;
    /// Real Cartesian components; throws if the element is not Hermitian.
    Vec3 real_cartesian(double tol = 1e-12) const;
    bool is_hermitian(double tol = 1e-12) const;

    SU11Element operator+(const SU11Element& o) const;
    SU11Element operator*(cplx s) const;
};

/// [X, Y] from [L1,L2] = −iL3, [L2,L3] = iL1, [L3,L1] = iL2. Both operands
/// must share a frame (checked).
SU11Element commutator(const SU11Element& x, const SU11Element& y);

/// Casimir quadratic form x3² − x1² − x2² of a Cartesian vector.
cplx casimir_form(const SU11Element& x);

/// H = h1·L1 + h2·L2 + h3·L3 with
/// h1 = ħω₀(mω²/(m₀ω₀²) − m₀/m), h2 = −4ħb, h3 = ħω₀(mω²/(m₀ω₀²) + m₀/m).
SU11Element hamiltonian_coeffs(const Scenario& s, double t);

/// L-frame coefficient vectors of I_1(t), I_2(t), I_3(t). I_1 − iI_2 is the
/// quadratic invariant with coefficients (α, β, γ, δ); I_3 = i[I_1, I_2].
std::array<SU11Element, 3> invariant_elements(const QuadCoeffs& qc, const Scenario& s);

/// Matrix M with rows = L-frame components of I_j (so I = M·L).
Mat3 invariant_matrix(const QuadCoeffs& qc, const Scenario& s);

struct LambdaReport {
    double t = 0.0;
    Mat3 coefficient_matrix{};  ///< M, I over L
    Mat3 lambda{};              ///< Λ = M⁻¹, so L = Λ·I
    Mat3 lambda_closed{};        ///< element-wise closed form (reported, not used)
    double condition_number = 0.0;  ///< ‖M‖∞·‖Λ‖∞
    double max_abs_diff = 0.0;      ///< between lambda and lambda_closed
};

/// Λ by numerical inversion of the I-over-L coefficient matrix.
LambdaReport lambda_matrix(const QuadCoeffs& qc, const Scenario& s);

/// Element-by-element closed-form Λ, kept only for comparison with the
/// numerical inverse.
Mat3 lambda_closed_form(const QuadCoeffs& qc, const Scenario& s);

/// σ(L) = Λ σ(I) Λᵀ.
Mat3 transport_moments(const Mat3& sigma_I, const Mat3& lambda);

// ----------------------------------------------------------- ladder matrices

/// Banded matrix on the |κ,κ+n⟩ basis, n = 0..dim-1. Only the band with
/// offset `offset` (row − column) is stored.
struct OperatorMatrix {
    double kappa = 0.5;
    std::size_t dim = 0;
    int offset = 0;
    std::vector<double> band;  ///< band[j] = entry (j+offset, j) for columns j

    double operator()(std::size_t row, std::size_t col) const;
    std::vector<cplx> apply(const std::vector<cplx>& psi) const;
};

struct LadderMatrices {
    OperatorMatrix lower, raise, diag;  ///< I_−, I_+, I_3
};

/// (I_−)_{n−1,n} = √(n(2κ+n−1)), (I_+)_{n+1,n} = √((n+1)(2κ+n)), (I_3)_{nn} = κ+n.
LadderMatrices ladder_matrices(double kappa, std::size_t dim);

/// (u·I_− + v·I_+ + w·I_3)ψ on the truncated basis (ψ padded to dim).
std::vector<cplx> apply_combination(const LadderMatrices& lm, cplx u, cplx v, cplx w, const std::vector<cplx>& psi);

/// Cartesian operators I_1 = (I_+ + I_−)/2, I_2 = (I_+ − I_−)/(2i), I_3 applied to ψ.
std::array<std::vector<cplx>, 3> apply_cartesian(const LadderMatrices& lm, const std::vector<cplx>& psi);

}  // namespace gso
