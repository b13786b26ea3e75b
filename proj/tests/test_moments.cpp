#include "draws.hpp"

#include "gso/algebra.hpp"
#include "gso/error.hpp"
#include "gso/moments.hpp"
#include "gso/states.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gso;

namespace {

/// Moments straight from the discrete-series action, written out term by term.
struct Oracle {
    Vec3 means{};
    Mat3 sigma{};
};

Oracle sandwich(const FockState& st) {
    const double k = st.kappa;
    const std::size_t n = st.size() + 2;
    std::vector<cplx> c = st.coeffs;
    c.resize(n, 0.0);
    double norm = 0.0;
    for (const cplx& a : c) norm += std::norm(a);
    std::array<std::vector<cplx>, 3> v;
    for (auto& x : v) x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double jj = static_cast<double>(j);
        cplx up = 0.0, down = 0.0;  // (I_+ψ)_j, (I_−ψ)_j
        if (j > 0) up = std::sqrt(jj * (2.0 * k + jj - 1.0)) * c[j - 1];
        if (j + 1 < n) down = std::sqrt((jj + 1.0) * (2.0 * k + jj)) * c[j + 1];
        v[0][j] = 0.5 * (up + down);
        v[1][j] = (up - down) / cplx(0.0, 2.0);
        v[2][j] = (k + jj) * c[j];
    }
    auto dot = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += std::conj(a[j]) * b[j];
        return s.real() / norm;
    };
    Oracle o;
    for (int i = 0; i < 3; ++i) o.means[i] = dot(c, v[i]);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) o.sigma[i][j] = dot(v[i], v[j]) - o.means[i] * o.means[j];
    return o;
}

double coefficient_power_sum(const FockState& st, int m) {
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < st.size(); ++n) {
        const double a2 = std::norm(st.coeffs[n]);
        num += std::pow(st.kappa + static_cast<double>(n), m) * a2;
        den += a2;
    }
    return num / den;
}

}  // namespace

TEST_CASE("lowest weight state") {
    for (double kappa : {0.3, 0.75, 1.25, 2.5}) {
        const UncertaintyReport r = moments_from_state(perelomov(0.0, kappa));
        CHECK(std::abs(r.means[0]) <= 1e-14);
        CHECK(std::abs(r.means[1]) <= 1e-14);
        CHECK(r.means[2] == doctest::Approx(kappa).epsilon(1e-14));
        CHECK(r.sigma[0][0] == doctest::Approx(kappa / 2).epsilon(1e-14));
        CHECK(r.sigma[1][1] == doctest::Approx(kappa / 2).epsilon(1e-14));
        CHECK(std::abs(r.sigma[2][2]) <= 1e-14);
        CHECK(std::abs(r.sigma[0][1]) <= 1e-14);
        CHECK(r.squeezing[0] == doctest::Approx(1.0));
    }
}

TEST_CASE("ladder moments agree with the term-by-term oracle") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const StateParams p = testing::random_params(rng);
        const FockState st = build_state(p);
        const UncertaintyReport r = moments_from_state(st);
        const Oracle o = sandwich(st);
        for (int a = 0; a < 3; ++a) {
            CHECK(std::abs(r.means[a] - o.means[a]) <= 1e-10 * std::max(1.0, std::abs(o.means[a])));
            for (int b = 0; b < 3; ++b)
                CHECK(std::abs(r.sigma[a][b] - o.sigma[a][b]) <= 1e-9 * std::max(1.0, std::abs(o.sigma[a][b])));
        }
    }
}

TEST_CASE("commutator matrix follows the su(1,1) structure constants") {
    // [I_1, I_2] = −iI_3, [I_2, I_3] = iI_1, [I_3, I_1] = iI_2  ⇒  C = −i⟨[I_i, I_j]⟩/2
    const Vec3 m{0.3, -0.7, 1.9};
    const Mat3 C = commutator_matrix(m);
    CHECK(C[0][1] == doctest::Approx(-m[2] / 2));
    CHECK(C[1][2] == doctest::Approx(m[0] / 2));
    CHECK(C[0][2] == doctest::Approx(-m[1] / 2));
    for (int i = 0; i < 3; ++i) {
        CHECK(C[i][i] == 0.0);
        for (int j = 0; j < 3; ++j) CHECK(C[i][j] == -C[j][i]);
    }
    CHECK(determinant(C) == doctest::Approx(0.0));
}

TEST_CASE("Robertson and Schrödinger inequalities on random draws") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 200; ++i) {
        const StateParams p = testing::random_params(rng);
        const UncertaintyReport r = moments_from_state(build_state(p));
        CHECK(r.det_sigma >= r.det_C - 1e-9);
        for (double res : r.schrodinger_residuals) CHECK(res >= -1e-9 * std::max(1.0, r.means[2] * r.means[2]));
        // positive semidefinite: leading principal minors
        CHECK(r.sigma[0][0] >= -1e-10);
        CHECK(r.sigma[0][0] * r.sigma[1][1] - r.sigma[0][1] * r.sigma[0][1] >= -1e-10 * r.means[2] * r.means[2]);
    }
}

TEST_CASE("Perelomov moments") {
    const double kappa = 1.3;
    for (cplx xi : {cplx(0.3, 0.0), cplx(0.0, 0.5), cplx(-0.4, 0.35), cplx(0.6, -0.6)}) {
        const UncertaintyReport r = moments_from_state(perelomov(xi, kappa));
        const double a2 = std::norm(xi), d = 1.0 - a2, d2 = d * d;
        const double x = xi.real(), y = xi.imag();
        const double tol = 1e-10 * std::max(1.0, kappa / d2);
        CHECK(std::abs(r.means[0] - 2 * kappa * x / d) <= tol);
        CHECK(std::abs(r.means[1] + 2 * kappa * y / d) <= tol);
        CHECK(std::abs(r.means[2] - kappa * (1 + a2) / d) <= tol);
        CHECK(std::abs(r.sigma[0][0] - kappa / 2 * std::norm(1.0 + xi * xi) / d2) <= tol);
        CHECK(std::abs(r.sigma[1][1] - kappa / 2 * std::norm(1.0 - xi * xi) / d2) <= tol);
        CHECK(std::abs(r.sigma[2][2] - 2 * kappa * a2 / d2) <= tol);
        CHECK(std::abs(r.sigma[0][1] + 2 * kappa * x * y / d2) <= tol);
        // the 1–3 covariance carries the real factor 1 + |ξ|²
        CHECK(std::abs(r.sigma[0][2] - kappa * x * (1 + a2) / d2) <= tol);
        CHECK(std::abs(r.sigma[1][2] + kappa * y * (1 + a2) / d2) <= tol);
    }
}

TEST_CASE("Perelomov states are maximally intelligent") {
    for (double kappa : {0.6, 1.0, 2.2})
        for (cplx xi : {cplx(0.0, 0.5), cplx(0.3, 0.0), cplx(-0.5, 0.4), cplx(0.2, -0.7)}) {
            const UncertaintyReport r = moments_from_state(perelomov(xi, kappa));
            const IntelligenceDiagnosis d = check_intelligence(r);
            CHECK(std::abs(r.det_sigma) <= 1e-9 * std::pow(kappa, 3) * std::max(1.0, std::pow(1 - std::norm(xi), -6)));
            CHECK(std::abs(r.det_C) <= 1e-14 * std::pow(r.means[2], 3));
            CHECK(d.all());
        }
}

TEST_CASE("w = 0 members are I1-I2 Schrödinger intelligent") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        StateParams p;
        p.u = std::polar(0.5 + std::abs(uni(rng)), 3.0 * uni(rng));
        p.v = p.u * std::polar(0.85 * std::abs(uni(rng)), 3.0 * uni(rng));
        p.z = cplx(2 * uni(rng), 2 * uni(rng));
        p.kappa = 0.4 + 2 * std::abs(uni(rng));
        const FockState st = build_state(p);
        const UncertaintyReport r = moments_from_state(st);
        const W0Moments w = w0_second_moments(p);
        const double sc = std::max(1.0, r.means[2]);
        CHECK(w.mean_I3_source == "closed form");
        CHECK(std::abs(w.mean_I3 - r.means[2]) <= 1e-8 * sc);
        CHECK(std::abs(w.var1 - r.sigma[0][0]) <= 1e-8 * sc);
        CHECK(std::abs(w.var2 - r.sigma[1][1]) <= 1e-8 * sc);
        CHECK(std::abs(w.cov12 - r.sigma[0][1]) <= 1e-8 * sc);
        CHECK(std::abs(w.cov13 - r.sigma[0][2]) <= 1e-8 * sc);
        CHECK(std::abs(w.cov23 - r.sigma[1][2]) <= 1e-8 * sc);
        const IntelligenceDiagnosis d = check_intelligence(r);
        CHECK(d.schrodinger_equality[0]);
    }
}

TEST_CASE("w = 0 covariances with I3 are not Re z/2 in general") {
    // the simple form holds only for v = 0
    StateParams p{cplx(0.8, -0.3), 1.0, 0.0, 0.0, 1.1};
    UncertaintyReport r = moments_from_state(build_state(p));
    CHECK(r.sigma[0][2] == doctest::Approx(p.z.real() / 2).epsilon(1e-10));
    CHECK(r.sigma[1][2] == doctest::Approx(-p.z.imag() / 2).epsilon(1e-10));
    p.v = 0.5;
    r = moments_from_state(build_state(p));
    CHECK(std::abs(r.sigma[0][2] - p.z.real() / 2) > 1e-2);
    const W0Moments w = w0_second_moments(p);
    CHECK(w.cov13 == doctest::Approx(r.sigma[0][2]).epsilon(1e-9));
    const IntelligenceDiagnosis d = check_intelligence(r);
    CHECK(d.schrodinger_equality[0]);
    CHECK_FALSE(d.schrodinger_equality[1]);
    CHECK_FALSE(d.schrodinger_equality[2]);
}

TEST_CASE("u = 1, v = 0 and v = 0.9 second moments") {
    StateParams p{cplx(0.5, 0.2), 1.0, 0.0, 0.0, 0.9};
    W0Moments w = w0_second_moments(p);
    CHECK(w.var1 == doctest::Approx(w.mean_I3 / 2));
    CHECK(w.var2 == doctest::Approx(w.mean_I3 / 2));
    CHECK(w.cov12 == 0.0);
    p.v = 0.9;
    w = w0_second_moments(p);
    CHECK(w.var1 == doctest::Approx(0.5 * 0.01 / 0.19 * w.mean_I3).epsilon(1e-12));
    CHECK(w.var1 / w.mean_I3 == doctest::Approx(0.0263).epsilon(1e-3));
}

TEST_CASE("squeezing of I1 as v approaches u") {
    double prev = 1e300, first = 0.0;
    for (double v : {0.5, 0.9, 0.99, 0.999, 0.9999}) {
        const StateParams p{cplx(0.3, 0.1), 1.0, v, 0.0, 1.0};
        const W0Moments w = w0_second_moments(p);
        const double streamed = mean_I3_streamed(p);
        CHECK(std::abs(w.mean_I3 - streamed) <= 1e-8 * streamed);
        CHECK(w.var1 < prev);
        if (first == 0.0) first = w.var1;
        prev = w.var1;
    }
    CHECK(prev < 0.2 * first);
}

TEST_CASE("Hermitian combination states minimize the Robertson relation") {
    const double kappa = 0.9;
    const cplx u(0.3, 0.2), w = 1.5;
    const cplx l = std::sqrt(w * w - 4.0 * std::norm(u));
    for (unsigned m : {0u, 1u, 3u})
        for (double sgn : {1.0, -1.0}) {
            const StateParams p{sgn * (kappa + m) * l, u, std::conj(u), w, kappa};
            FockState st;
            try {
                st = build_state(p);
            } catch (const ValidationError&) {
                continue;
            }
            const IntelligenceDiagnosis d = check_intelligence(moments_from_state(st));
            CHECK(d.robertson_equality);
        }
}

TEST_CASE("analytic powers of I3") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 100; ++i) {
        const StateParams p = testing::random_params(rng, std::sqrt(0.7));
        const FockState st = build_state(p);
        CHECK(analytic_I3_powers(p, 0) == 1.0);
        for (int m : {1, 2}) {
            const double ref = coefficient_power_sum(st, m);
            CHECK(std::abs(analytic_I3_powers(p, static_cast<unsigned>(m)) - ref) <= 1e-8 * ref);
        }
    }
}

TEST_CASE("non-normalizable w = 0 parameters are rejected") {
    CHECK_THROWS_AS(w0_second_moments({0.0, 1.0, 1.0, 0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(w0_second_moments({0.0, 1.0, 0.2, 0.3, 1.0}), ValidationError);
}
