#include "gso/moments.hpp"

#include "gso/error.hpp"

#include <cmath>
#include <numbers>

namespace gso {

Mat3 commutator_matrix(const Vec3& m) {
    Mat3 c{};
    c[0][1] = -0.5 * m[2];
    c[1][0] = -c[0][1];
    c[0][2] = -0.5 * m[1];
    c[2][0] = -c[0][2];
    c[1][2] = 0.5 * m[0];
    c[2][1] = -c[1][2];
    return c;
}

UncertaintyReport moments_from_state(const FockState& state, std::size_t dim) {
    const std::size_t len = state.size();
    if (dim == 0) dim = len + 2;
    if (dim < len + 2) throw DomainError("moments_from_state: dim must be at least the state length + 2");
    std::vector<cplx> psi(state.coeffs);
    psi.resize(dim, cplx(0.0, 0.0));
    double norm = 0.0;
    for (const auto& c : psi) norm += std::norm(c);

    const LadderMatrices lm = ladder_matrices(state.kappa, dim);
    const auto v = apply_cartesian(lm, psi);
    auto dot = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        cplx s{0.0, 0.0};
        for (std::size_t i = 0; i < dim; ++i) s += std::conj(a[i]) * b[i];
        return s / norm;
    };

    UncertaintyReport r;
    r.kappa = state.kappa;
    for (int i = 0; i < 3; ++i) r.means[i] = dot(psi, v[i]).real();
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            r.sigma[i][j] = dot(v[i], v[j]).real() - r.means[i] * r.means[j];
            r.sigma[j][i] = r.sigma[i][j];
        }
    double scale = 1.0;
    for (int i = 0; i < 3; ++i) {
        scale = std::max(scale, std::abs(r.means[i]));
        for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(r.sigma[i][j]));
    }
    const double top = state.kappa + static_cast<double>(len - 1);
    // A zero tail bound marks an exactly finite expansion (terminating or
    // lowest-weight states), where the last coefficient is genuine.
    if (state.tail_bound > 0.0 && std::norm(state.coeffs.back()) * top * top / norm > 1e-10 * scale)
        throw NumericalError("moments_from_state: truncated top coefficient contributes beyond 1e-10");

    r.commutator = commutator_matrix(r.means);
    r.det_sigma = determinant(r.sigma);
    r.det_C = determinant(r.commutator);
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (int k = 0; k < 3; ++k) {
        const int i = pairs[k][0], j = pairs[k][1];
        r.schrodinger_residuals[k] = r.sigma[i][i] * r.sigma[j][j] - r.sigma[i][j] * r.sigma[i][j] -
                                     r.commutator[i][j] * r.commutator[i][j];
    }
    for (int j = 0; j < 3; ++j) r.squeezing[j] = r.sigma[j][j] / (0.5 * state.kappa);
    return r;
}

double analytic_I3_powers(const StateParams& p, unsigned m) {
    if (m == 0) return 1.0;
    const double radius = scaled_norm_radius(p);
    // The coefficients of Σ λ^n |a_n|² are non-negative, so on the circle
    // |λ − 1| = ρ the modulus peaks at λ = 1 + ρ.  Shrink ρ until that peak
    // is modest: roundoff in the k-th derivative scales like max|f|·k!/ρ^k,
    // and the generating function can grow explosively towards its singularity.
    double rho = std::isinf(radius) ? 0.5 : std::min(0.5, 0.5 * (radius - 1.0));
    auto peak = [&](double r) { return scaled_norm_ratio(p, cplx(1.0 + r, 0.0)).real(); };
    for (int i = 0; i < 60; ++i) {
        const double f1 = peak(rho);
        if (std::isfinite(f1) && f1 <= 4.0) {
            const double f2 = 2.0 * rho < (std::isinf(radius) ? 1e300 : radius - 1.0) ? peak(2.0 * rho) : 0.0;
            if (std::isfinite(f2) && f2 <= 1e8) break;
        }
        rho *= 0.5;
    }
    constexpr int K = 64;
    std::vector<cplx> lambdas(K);
    for (int j = 0; j < K; ++j) lambdas[j] = 1.0 + std::polar(rho, 2.0 * std::numbers::pi * j / K);
    const std::vector<cplx> f = scaled_norm_ratios(p, lambdas);
    std::vector<double> d(m + 1, 0.0);  // d[k] = k-th λ-derivative at λ = 1
    double fact = 1.0;
    for (unsigned k = 0; k <= m; ++k) {
        if (k > 0) fact *= k;
        cplx acc{0.0, 0.0};
        for (int j = 0; j < K; ++j) acc += f[j] * std::polar(1.0, -2.0 * std::numbers::pi * k * j / K);
        d[k] = (fact / (K * std::pow(rho, k)) * acc).real();
    }
    // (λ∂λ)^j = Σ_k S(j,k) λ^k ∂^k with Stirling numbers of the second kind.
    std::vector<std::vector<double>> S(m + 1, std::vector<double>(m + 1, 0.0));
    S[0][0] = 1.0;
    for (unsigned j = 1; j <= m; ++j)
        for (unsigned k = 1; k <= j; ++k) S[j][k] = k * S[j - 1][k] + S[j - 1][k - 1];
    double result = 0.0;
    double binom = 1.0;
    for (unsigned j = 0; j <= m; ++j) {
        if (j > 0) binom = binom * (m - j + 1) / j;
        double euler = 0.0;
        for (unsigned k = 0; k <= j; ++k) euler += S[j][k] * d[k];
        result += binom * std::pow(p.kappa, static_cast<double>(m - j)) * euler;
    }
    return result;
}

double mean_I3_streamed(const StateParams& p) {
    classify(p);
    using lcplx = std::complex<long double>;
    const lcplx u(p.u), v(p.v), w(p.w), z(p.z);
    const long double kappa = p.kappa, tk = 2.0L * kappa;
    lcplx prev(0.0L), cur(1.0L);
    long double total = 1.0L, weighted = kappa;
    constexpr std::size_t kBlock = 64;
    long double block = 0.0L, prev_block = -1.0L;
    for (std::size_t n = 0; n < 10000000; ++n) {
        const long double m = static_cast<long double>(n);
        const lcplx next = -(v * std::sqrt(m * (tk + m - 1.0L)) * prev + (w * (kappa + m) - z) * cur) /
                           (u * std::sqrt((m + 1.0L) * (tk + m)));
        prev = cur;
        cur = next;
        const long double a2 = std::norm(next);
        total += a2;
        weighted += (kappa + m + 1.0L) * a2;
        block += (kappa + m + 1.0L) * a2;
        if ((n + 1) % kBlock) continue;
        if (prev_block > 0.0L && block < prev_block) {
            const long double q = block / prev_block;
            if (block * q / (1.0L - q) <= 1e-17L * weighted) return static_cast<double>(weighted / total);
        } else if (prev_block >= 0.0L && block == 0.0L) {
            return static_cast<double>(weighted / total);
        }
        prev_block = block;
        block = 0.0L;
    }
    throw NumericalError("mean_I3_streamed: coefficient sum did not converge");
}

W0Moments w0_second_moments(const StateParams& p) {
    const double scale = std::max({std::abs(p.u), std::abs(p.v), 1.0});
    if (std::abs(p.w) > 1e-14 * scale) throw ValidationError("w0_second_moments: requires w = 0");
    if (!(std::abs(p.v) < std::abs(p.u))) throw ValidationError("w0_second_moments: requires |v| < |u|");
    W0Moments r;
    try {
        r.mean_I3 = analytic_I3_powers(p, 1);
        r.mean_I3_source = "closed form";
    } catch (const NumericalError&) {
        r.mean_I3 = mean_I3_streamed(p);
        r.mean_I3_source = "coefficient sum";
    }
    const cplx u = p.u, v = p.v, z = p.z;
    const double D = std::norm(u) - std::norm(v);
    r.var1 = 0.5 * std::norm(u - v) / D * r.mean_I3;
    r.var2 = 0.5 * std::norm(u + v) / D * r.mean_I3;
    r.cov12 = (std::conj(u) * v).imag() / D * r.mean_I3;
    const cplx X = (std::conj(u) * z - v * std::conj(z)) / D;
    const cplx R = 0.5 * (u * X - v * std::conj(X));
    const cplx Y = (std::conj(u) * R - v * std::conj(R)) / D;
    r.cov13 = Y.real();
    r.cov23 = -Y.imag();
    return r;
}

IntelligenceDiagnosis check_intelligence(const UncertaintyReport& r, double tol) {
    IntelligenceDiagnosis d;
    const double k3 = r.kappa * r.kappa * r.kappa;
    const double dscale = std::max({std::abs(r.det_sigma), std::abs(r.det_C), k3});
    d.robertson_gap = std::abs(r.det_sigma - r.det_C) / dscale;
    d.robertson_equality = d.robertson_gap <= tol;
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (int k = 0; k < 3; ++k) {
        const int i = pairs[k][0], j = pairs[k][1];
        const double sc = std::max(r.sigma[i][i] * r.sigma[j][j], r.kappa * r.kappa);
        d.schrodinger_gap[k] = std::abs(r.schrodinger_residuals[k]) / sc;
        d.schrodinger_equality[k] = d.schrodinger_gap[k] <= tol;
    }
    return d;
}

}  // namespace gso
