#include "gso/wavefunctions.hpp"

#include "gso/error.hpp"
#include "gso/expression.hpp"
#include "gso/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gso {

namespace {

constexpr cplx I{0.0, 1.0};

/// Everything at one instant that the closed forms need.
struct LocalFrame {
    double m = 1.0;
    double hbar = 1.0;
    double rho = 1.0;
    double theta = 0.0;
    cplx eps, eps_dot;
    cplx gauss;  ///< coefficient of x² in the exponent
};

LocalFrame local_frame(const EnvelopeTrajectory& traj, double t, double mdot_factor) {
    const Scenario& s = traj.scenario;
    const EnvelopePoint p = traj.at(t);
    LocalFrame f;
    f.m = s.mass(t);
    f.hbar = s.hbar;
    f.eps = p.eps;
    f.eps_dot = p.eps_dot;
    f.rho = std::abs(p.eps);
    f.theta = p.theta;
    const double mdot = s.mass_dot(t);
    f.gauss = -I * (f.m / (2.0 * f.hbar)) * (2.0 * s.squeeze(t) + mdot_factor * mdot / f.m - p.eps_dot / p.eps);
    return f;
}

void check_kappa(double kappa) {
    if (!(kappa > 0.25)) throw DomainError("wavefunction: κ must exceed 1/4");
}

/// x^{2κ−1/2} exp(gauss·x²), zero at the origin.
cplx radial_factor(const LocalFrame& f, double kappa, double x) {
    if (x < 0.0) throw DomainError("wavefunction: x must be non-negative");
    if (x == 0.0) return 0.0;
    return std::exp((2.0 * kappa - 0.5) * std::log(x) + f.gauss * x * x);
}

/// log of √(2/Γ(2κ)) (m/ħ)^κ ρ^{−2κ}.
double log_ground_prefactor(const LocalFrame& f, double kappa) {
    return 0.5 * (std::numbers::ln2 - specfun::log_gamma(2.0 * kappa)) + kappa * std::log(f.m / f.hbar) -
           2.0 * kappa * std::log(f.rho);
}

}  // namespace

double GridWavefunction::norm() const {
    const double h = grid.spacing();
    double sum = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double w = (k == 0 || k + 1 == values.size()) ? 0.5 : 1.0;
        sum += w * std::norm(values[k]);
    }
    return std::sqrt(h * sum);
}

double default_x_max(const EnvelopeTrajectory& traj, const Scenario& s) {
    double max_rho2 = 0.0;
    double min_m = INFINITY;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        max_rho2 = std::max(max_rho2, std::norm(traj.eps[i]));
        min_m = std::min(min_m, s.mass(traj.times[i]));
    }
    return 12.0 * std::sqrt(s.hbar * max_rho2 / min_m);
}

GridSpec resolve_grid(const EnvelopeTrajectory& traj, const Scenario& s, GridSpec g) {
    if (g.x_max <= 0.0) g.x_max = default_x_max(traj, s);
    if (g.npoints < 8) throw DomainError("grid: need at least 8 points");
    return g;
}

GridWavefunction sample(const WaveFunction& f, const GridSpec& grid, double t) {
    GridWavefunction w;
    w.grid = grid;
    w.time = t;
    w.values.resize(grid.npoints);
    w.values[0] = 0.0;
    for (std::size_t k = 1; k < grid.npoints; ++k) w.values[k] = f(grid.x(k), t);
    return w;
}

const char* to_string(PhaseConvention c) {
    return c == PhaseConvention::HalfMassRate ? "mdot/(2m)" : "mdot/m";
}

WaveFunction make_psi_n(const EnvelopeTrajectory& traj, double kappa, unsigned n) {
    check_kappa(kappa);
    return [&traj, kappa, n](double x, double t) -> cplx {
        const LocalFrame f = local_frame(traj, t, 0.5);
        const double nn = static_cast<double>(n);
        const double logc = 0.5 * (std::numbers::ln2 + specfun::log_gamma(nn + 1.0) -
                                   specfun::log_gamma(2.0 * kappa + nn)) +
                            kappa * std::log(f.m / f.hbar) - 2.0 * kappa * std::log(f.rho);
        const double y = f.m * x * x / (f.hbar * f.rho * f.rho);
        const cplx phase = std::polar(1.0, -2.0 * (kappa + nn) * f.theta);
        return std::exp(logc) * phase * radial_factor(f, kappa, x) * specfun::laguerre(n, 2.0 * kappa - 1.0, y);
    };
}

WaveFunction make_psi_z(const EnvelopeTrajectory& traj, double kappa, cplx z, PhaseConvention conv) {
    check_kappa(kappa);
    const double factor = conv == PhaseConvention::HalfMassRate ? 0.5 : 1.0;
    const double log_norm = -0.5 * std::log(specfun::hyper_0f1(2.0 * kappa, std::norm(z)));
    return [&traj, kappa, z, factor, log_norm](double x, double t) -> cplx {
        const LocalFrame f = local_frame(traj, t, factor);
        const cplx q = -f.m * x * x * z / (f.hbar * f.eps * f.eps);
        const cplx pre = std::exp(log_ground_prefactor(f, kappa) + log_norm - 2.0 * I * kappa * f.theta +
                                  z * std::conj(f.eps) / f.eps);
        return pre * radial_factor(f, kappa, x) * specfun::hyper_0f1(2.0 * kappa, q);
    };
}

WaveFunction make_psi_xi(const EnvelopeTrajectory& traj, double kappa, cplx xi) {
    check_kappa(kappa);
    if (!(std::abs(xi) < 1.0)) throw DomainError("Perelomov wavefunction: |ξ| must be below 1");
    const double log_norm = kappa * std::log1p(-std::norm(xi));
    return [&traj, kappa, xi, log_norm](double x, double t) -> cplx {
        const LocalFrame f = local_frame(traj, t, 0.5);
        const cplx tt = xi * std::conj(f.eps) / f.eps;
        const cplx expo = f.m * x * x * xi / (f.hbar * f.eps * (xi * std::conj(f.eps) - f.eps));
        const cplx pre = std::exp(log_ground_prefactor(f, kappa) + log_norm - 2.0 * I * kappa * f.theta -
                                  2.0 * kappa * std::log(1.0 - tt) + expo);
        return pre * radial_factor(f, kappa, x);
    };
}

WaveFunction make_superposition(const EnvelopeTrajectory& traj, double kappa, std::vector<cplx> coeffs) {
    check_kappa(kappa);
    return [&traj, kappa, c = std::move(coeffs)](double x, double t) -> cplx {
        const LocalFrame f = local_frame(traj, t, 0.5);
        const double alpha = 2.0 * kappa - 1.0;
        const double y = f.m * x * x / (f.hbar * f.rho * f.rho);
        const cplx step = std::polar(1.0, -2.0 * f.theta);
        // Normalized Laguerre functions g_n = √(n!/Γ(2κ+n)) L_n^α(y) by recurrence.
        cplx sum = 0.0;
        double lm1 = 0.0, l0 = 1.0;
        double scale = std::exp(-0.5 * specfun::log_gamma(2.0 * kappa));
        cplx ph = 1.0;
        for (std::size_t n = 0; n < c.size(); ++n) {
            sum += c[n] * ph * scale * l0;
            const double nn = static_cast<double>(n);
            const double l1 = ((2.0 * nn + alpha + 1.0 - y) * l0 - (nn + alpha) * lm1) / (nn + 1.0);
            lm1 = l0;
            l0 = l1;
            scale *= std::sqrt((nn + 1.0) / (2.0 * kappa + nn));
            ph *= step;
        }
        const double logc = 0.5 * std::numbers::ln2 + kappa * std::log(f.m / f.hbar) - 2.0 * kappa * std::log(f.rho);
        return std::exp(logc) * std::polar(1.0, -2.0 * kappa * f.theta) * radial_factor(f, kappa, x) * sum;
    };
}

WaveFunction make_state_wavefunction(const EnvelopeTrajectory& traj, const FockState& state) {
    std::vector<cplx> c = state.coeffs;
    for (std::size_t n = 1; n < c.size(); n += 2) c[n] = -c[n];
    return make_superposition(traj, state.kappa, std::move(c));
}

GridWavefunction wavefunction_psi_n(const EnvelopeTrajectory& traj, double kappa, unsigned n, double t,
                                    const GridSpec& grid) {
    GridWavefunction w = sample(make_psi_n(traj, kappa, n), grid, t);
    w.note = "psi_n n=" + std::to_string(n);
    return w;
}

GridWavefunction wavefunction_psi_z(const EnvelopeTrajectory& traj, double kappa, cplx z, double t,
                                    const GridSpec& grid, PhaseConvention conv) {
    GridWavefunction w = sample(make_psi_z(traj, kappa, z, conv), grid, t);
    w.note = std::string("psi_z phase_convention=") + to_string(conv);
    return w;
}

GridWavefunction wavefunction_psi_xi(const EnvelopeTrajectory& traj, double kappa, cplx xi, double t,
                                     const GridSpec& grid) {
    GridWavefunction w = sample(make_psi_xi(traj, kappa, xi), grid, t);
    w.note = "psi_xi";
    return w;
}

GreenKernel make_green_kernel(const EnvelopeTrajectory& traj, double kappa, double t2, double t1, double eta) {
    check_kappa(kappa);
    if (!(t1 < t2)) throw DomainError("green_function: requires t1 < t2");
    const Scenario& s = traj.scenario;
    const double gamma = phase_gamma12(traj, t1, t2);
    if (std::abs(std::sin(gamma)) < 1e-10)
        throw NumericalError("green_function: caustic, sin γ12 = " + format_double(std::sin(gamma)));
    const cplx g{gamma, -eta};
    const cplx sg = std::sin(g);
    const cplx cg = std::cos(g) / sg;

    auto bcoef = [&](double t, double& m, double& rho) {
        const EnvelopePoint p = traj.at(t);
        m = s.mass(t);
        rho = std::abs(p.eps);
        const double rho_dot = std::real(std::conj(p.eps) * p.eps_dot) / rho;
        return m * (2.0 * s.squeeze(t) - rho_dot / rho + s.mass_dot(t) / (2.0 * m));
    };
    double m1, m2, r1, r2;
    const double b1 = bcoef(t1, m1, r1);
    const double b2 = bcoef(t2, m2, r2);
    const double hbar = s.hbar;
    const double nu = 2.0 * kappa - 1.0;
    // The expression with the principal branch of I_ν holds for γ12 in
    // (0, π); past each second multiple of π the continuous branch picks up
    // a factor e^{−2πiν}.
    const double turns = std::ceil(std::floor(gamma / std::numbers::pi) / 2.0);
    const cplx branch = std::polar(1.0, -2.0 * std::numbers::pi * nu * turns);

    const double sm = std::sqrt(m1 * m2) / (hbar * r1 * r2);
    const cplx pre = -I * sm / sg * branch;
    const cplx q1 = (I / (2.0 * hbar)) * (b1 + cg * m1 / (r1 * r1));
    const cplx q2 = (I / (2.0 * hbar)) * (-b2 + cg * m2 / (r2 * r2));
    return [=](double x2, double x1) -> cplx {
        if (x1 < 0.0 || x2 < 0.0) throw DomainError("green_function: x must be non-negative");
        if (x1 == 0.0 || x2 == 0.0) return 0.0;
        const cplx arg = -I * (sm * x1 * x2) / sg;
        if (eta != 0.0 && std::abs(arg) > 30.0)
            throw DomainError("green_function: damped Bessel argument beyond the series bound 30");
        return pre * std::sqrt(x1 * x2) * std::exp(q1 * x1 * x1 + q2 * x2 * x2) * specfun::bessel_i(nu, arg);
    };
}

cplx green_function(const EnvelopeTrajectory& traj, double kappa, double x2, double t2, double x1, double t1,
                    double eta) {
    if (x1 < 0.0 || x2 < 0.0) throw DomainError("green_function: x must be non-negative");
    return make_green_kernel(traj, kappa, t2, t1, eta)(x2, x1);
}

cplx green_spectral_sum(const EnvelopeTrajectory& traj, double kappa, double x2, double t2, double x1, double t1,
                        unsigned nterms, double eta) {
    check_kappa(kappa);
    cplx sum = 0.0;
    for (unsigned n = 0; n < nterms; ++n) {
        const WaveFunction psi = make_psi_n(traj, kappa, n);
        const double damp = std::exp(-2.0 * eta * (kappa + static_cast<double>(n)));
        sum += damp * psi(x2, t2) * std::conj(psi(x1, t1));
    }
    return sum;
}

}  // namespace gso
