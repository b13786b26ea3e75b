#include "gso/algebra.hpp"
#include "gso/envelope.hpp"
#include "gso/error.hpp"
#include "gso/quadrature.hpp"
#include "gso/specfun.hpp"
#include "gso/states.hpp"
#include "gso/wavefunctions.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

using namespace gso;

namespace {

const std::string kDir = GSO_SCENARIO_DIR;

EnvelopeTrajectory trajectory(const std::string& name, double c = -1.0) {
    Scenario s = load_scenario_file(kDir + "/" + name + ".json");
    if (c >= 0.0) s.c = c;
    return integrate_envelope(s);
}

double kappa_of(const EnvelopeTrajectory& traj) { return kappa_from_c(traj.scenario.c).kappa; }

/// Largest pointwise |f − g| over x in (0, x_max], relative to max |g|.
double max_rel_diff(const WaveFunction& f, const WaveFunction& g, double t, double x_max, int n = 400) {
    double diff = 0.0, scale = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double x = x_max * k / n;
        const cplx a = f(x, t), b = g(x, t);
        diff = std::max(diff, std::abs(a - b));
        scale = std::max(scale, std::abs(b));
    }
    return diff / scale;
}

/// Normalized harmonic-oscillator eigenfunction (m = ω = ħ = 1).
double ho_eigenfunction(unsigned k, double x) {
    const double norm = std::exp(-0.5 * (k * std::log(2.0) + std::lgamma(k + 1.0))) * std::pow(std::numbers::pi, -0.25);
    return norm * std::exp(-0.5 * x * x) * std::hermite(k, x);
}

}  // namespace

TEST_CASE("Perelomov and Barut-Girardello wavefunctions at the origin of parameter space equal Psi_0") {
    const EnvelopeTrajectory traj = trajectory("mass_modulated");
    const double kappa = kappa_of(traj);
    const WaveFunction p0 = make_psi_n(traj, kappa, 0);
    for (double t : {0.0, 2.3, 7.1}) {
        CHECK(max_rel_diff(make_psi_xi(traj, kappa, 0.0), p0, t, 6.0) <= 1e-13);
        CHECK(max_rel_diff(make_psi_z(traj, kappa, 0.0), p0, t, 6.0) <= 1e-13);
    }
}

TEST_CASE("closed forms equal the synthesis from the number basis") {
    for (const char* name : {"mass_modulated", "b_pulse", "omega_ramp", "m_table"}) {
        CAPTURE(name);
        const EnvelopeTrajectory traj = trajectory(name);
        const double kappa = kappa_of(traj);
        for (double t : {0.7, 3.1, 8.4}) {
            CAPTURE(t);
            for (cplx xi : {cplx(0.3, 0.2), cplx(-0.5, 0.1)}) {
                const FockState st = perelomov(xi, kappa, 1e-16);
                CHECK(max_rel_diff(make_superposition(traj, kappa, st.coeffs), make_psi_xi(traj, kappa, xi), t, 8.0) <=
                      1e-7);
            }
            for (cplx z : {cplx(0.8, -0.4), cplx(-1.5, 1.0)}) {
                const FockState st = barut_girardello(z, kappa, 1e-16);
                CHECK(max_rel_diff(make_superposition(traj, kappa, st.coeffs), make_psi_z(traj, kappa, z), t, 8.0) <=
                      1e-7);
            }
        }
    }
}

TEST_CASE("the full mass-rate phase of Psi_z differs from the synthesis when the mass varies") {
    const EnvelopeTrajectory traj = trajectory("mass_modulated");
    const double kappa = kappa_of(traj);
    const cplx z(0.8, -0.4);
    const FockState st = barut_girardello(z, kappa, 1e-16);
    const WaveFunction synth = make_superposition(traj, kappa, st.coeffs);
    const WaveFunction full_rate = make_psi_z(traj, kappa, z, PhaseConvention::FullMassRate);
    CHECK(max_rel_diff(full_rate, synth, 3.1, 8.0) > 1e-3);
    // with constant mass the two conventions coincide
    const EnvelopeTrajectory flat = trajectory("b_pulse");
    const FockState st2 = barut_girardello(z, kappa_of(flat), 1e-16);
    CHECK(max_rel_diff(make_psi_z(flat, kappa_of(flat), z, PhaseConvention::FullMassRate),
                       make_superposition(flat, kappa_of(flat), st2.coeffs), 3.1, 8.0) <= 1e-7);
}

TEST_CASE("0F1 in the Barut-Girardello wavefunction is a Bessel function") {
    // ₀F₁(2κ; −y) = Γ(2κ) y^{(1−2κ)/2} J_{2κ−1}(2√y)
    for (double kappa : {0.6, 1.25, 2.0})
        for (double y : {0.1, 1.0, 7.5, 20.0}) {
            const double lhs = specfun::hyper_0f1(2 * kappa, -y);
            const double rhs = std::tgamma(2 * kappa) * std::pow(y, 0.5 - kappa) * std::cyl_bessel_j(2 * kappa - 1, 2 * std::sqrt(y));
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
        }
}

TEST_CASE("orthonormality on the half line") {
    for (const char* name : {"stationary", "mass_modulated"}) {
        const EnvelopeTrajectory traj = trajectory(name);
        const double kappa = kappa_of(traj);
        const double t = 4.2;
        const QuadratureRule q = mapped_half_line(400, default_x_max(traj, traj.scenario));
        std::vector<std::vector<cplx>> vals;
        for (unsigned n = 0; n <= 6; ++n) {
            const WaveFunction f = make_psi_n(traj, kappa, n);
            std::vector<cplx> v;
            for (double x : q.nodes) v.push_back(f(x, t));
            vals.push_back(v);
        }
        double worst = 0.0;
        for (unsigned a = 0; a <= 6; ++a)
            for (unsigned b = 0; b <= 6; ++b) {
                cplx s = 0.0;
                for (std::size_t k = 0; k < q.nodes.size(); ++k) s += q.weights[k] * std::conj(vals[a][k]) * vals[b][k];
                worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
            }
        CHECK(worst <= 1e-8);
        // Perelomov and Barut-Girardello wavefunctions are normalized too
        for (const WaveFunction& f : {make_psi_xi(traj, kappa, cplx(0.4, -0.3)), make_psi_z(traj, kappa, cplx(1.0, 0.5))}) {
            double nrm = 0.0;
            for (std::size_t k = 0; k < q.nodes.size(); ++k) nrm += q.weights[k] * std::norm(f(q.nodes[k], t));
            CHECK(std::abs(nrm - 1.0) <= 1e-8);
        }
    }
}

TEST_CASE("stationary eigenfunctions carry the energy 2 hbar omega (kappa + n)") {
    const EnvelopeTrajectory traj = trajectory("stationary");
    const Scenario& s = traj.scenario;
    const double kappa = kappa_of(traj);
    const double g = s.c * s.hbar * s.hbar / (2 * s.m0);
    for (unsigned n = 0; n <= 3; ++n) {
        const WaveFunction f = make_psi_n(traj, kappa, n);
        const double E = 2 * s.hbar * s.omega0 * (kappa + n);
        double worst = 0.0, scale = 0.0;
        const double h = 1e-4;
        for (int k = 1; k <= 200; ++k) {
            const double x = 0.3 + 5.0 * k / 200;
            const cplx d2 = (f(x + h, 0.0) - 2.0 * f(x, 0.0) + f(x - h, 0.0)) / (h * h);
            const cplx Hpsi = -s.hbar * s.hbar / (2 * s.m0) * d2 +
                              (0.5 * s.m0 * s.omega0 * s.omega0 * x * x + g / (x * x)) * f(x, 0.0);
            worst = std::max(worst, std::abs(Hpsi - E * f(x, 0.0)));
            scale = std::max(scale, std::abs(E * f(x, 0.0)));
        }
        CHECK(worst <= 1e-6 * scale);
        // density is time independent
        for (double x : {0.5, 1.2, 2.4}) CHECK(std::norm(f(x, 6.3)) == doctest::Approx(std::norm(f(x, 0.0))).epsilon(1e-9));
    }
}

TEST_CASE("c = 0 eigenfunctions are the odd oscillator states") {
    const EnvelopeTrajectory traj = trajectory("stationary", 0.0);
    const double kappa = kappa_of(traj);
    CHECK(kappa == doctest::Approx(0.75));
    for (unsigned n = 0; n <= 5; ++n) {
        const WaveFunction f = make_psi_n(traj, kappa, n);
        const cplx phase = f(1.0, 0.0) / (std::sqrt(2.0) * ho_eigenfunction(2 * n + 1, 1.0));
        CHECK(std::abs(phase) == doctest::Approx(1.0).epsilon(1e-12));
        double worst = 0.0;
        for (int k = 1; k <= 100; ++k) {
            const double x = 6.0 * k / 100;
            worst = std::max(worst, std::abs(f(x, 0.0) - phase * std::sqrt(2.0) * ho_eigenfunction(2 * n + 1, x)));
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("Green function equals the damped spectral sum") {
    for (const char* name : {"stationary", "b_pulse", "mass_modulated"}) {
        CAPTURE(name);
        const EnvelopeTrajectory traj = trajectory(name);
        const double kappa = kappa_of(traj);
        const double eta = 0.3;
        for (double t2 : {1.1, 2.0, 4.0}) {  // the last lies past γ = π
            CAPTURE(t2);
            const double t1 = 0.6;
            for (double x1 : {0.4, 1.3})
                for (double x2 : {0.7, 2.1}) {
                    const cplx G = green_function(traj, kappa, x2, t2, x1, t1, eta);
                    const cplx S = green_spectral_sum(traj, kappa, x2, t2, x1, t1, 120, eta);
                    CHECK(std::abs(G - S) <= 1e-9 * std::max(1.0, std::abs(S)));
                }
        }
    }
}

TEST_CASE("stationary Green function depends on the time difference only") {
    const EnvelopeTrajectory traj = trajectory("stationary");
    const double kappa = kappa_of(traj);
    for (double x1 : {0.5, 1.5})
        for (double x2 : {0.8, 2.0}) {
            const cplx a = green_function(traj, kappa, x2, 1.4, x1, 0.5);
            const cplx b = green_function(traj, kappa, x2, 3.9, x1, 3.0);
            const cplx c = green_function(traj, kappa, x2, 7.2, x1, 6.3);
            CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
            CHECK(std::abs(a - c) <= 1e-8 * std::abs(a));
        }
}

TEST_CASE("Green function propagates the eigenfunctions") {
    for (const char* name : {"stationary", "b_pulse", "mass_modulated"}) {
        CAPTURE(name);
        const EnvelopeTrajectory traj = trajectory(name);
        const double kappa = kappa_of(traj);
        const double t1 = 2.5, t2 = 3.3;
        // Ψ_n(x, t1) is below 1e-12 beyond x = 9 in these scenarios
        const QuadratureRule q = composite_gauss_legendre(90, 12, 0.0, 9.0);
        for (unsigned n : {0u, 2u}) {
            const WaveFunction f = make_psi_n(traj, kappa, n);
            const GreenKernel G = make_green_kernel(traj, kappa, t2, t1);
            for (double x2 : {0.6, 1.5, 2.6}) {
                cplx s = 0.0;
                for (std::size_t k = 0; k < q.nodes.size(); ++k) s += q.weights[k] * G(x2, q.nodes[k]) * f(q.nodes[k], t1);
                CHECK(std::abs(s - f(x2, t2)) <= 1e-4);
            }
        }
    }
}

TEST_CASE("Green function rejects invalid intervals and caustics") {
    const EnvelopeTrajectory traj = trajectory("stationary");
    const double kappa = kappa_of(traj);
    CHECK_THROWS_AS(green_function(traj, kappa, 1.0, 1.0, 1.0, 2.0), DomainError);
    // stationary with ω = 1: γ12 = t2 − t1, so t2 − t1 = π is a caustic
    CHECK_THROWS_AS(green_function(traj, kappa, 1.0, 1.0 + std::numbers::pi, 1.0, 1.0), NumericalError);
}
