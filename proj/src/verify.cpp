#include "gso/verify.hpp"

#include "gso/error.hpp"
#include "gso/expression.hpp"
#include "gso/quadrature.hpp"
#include "gso/specfun.hpp"
#include "gso/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gso {

namespace {

constexpr cplx I{0.0, 1.0};

/// First and second derivatives at interior node k.
struct Derivs {
    cplx d1, d2;
};

Derivs derivs(const std::vector<cplx>& f, std::size_t k, double h, StencilOrder order) {
    const std::size_t n = f.size();
    if (order == StencilOrder::Fourth && k >= 2 && k + 2 < n) {
        return {(-f[k + 2] + 8.0 * f[k + 1] - 8.0 * f[k - 1] + f[k - 2]) / (12.0 * h),
                (-f[k + 2] + 16.0 * f[k + 1] - 30.0 * f[k] + 16.0 * f[k - 1] - f[k - 2]) / (12.0 * h * h)};
    }
    return {(f[k + 1] - f[k - 1]) / (2.0 * h), (f[k + 1] - 2.0 * f[k] + f[k - 1]) / (h * h)};
}

/// (xp + px)ψ at node k.
cplx dilation(const std::vector<cplx>& f, std::size_t k, double h, double hbar, StencilOrder order) {
    const double x = static_cast<double>(k) * h;
    if (order == StencilOrder::Second) {
        const double xm = x - h, xp = x + h;
        return -I * hbar * ((x + xp) * f[k + 1] - (xm + x) * f[k - 1]) / (2.0 * h);
    }
    return -I * hbar * (2.0 * x * derivs(f, k, h, order).d1 + f[k]);
}

/// Solves the tridiagonal system a_k y_{k−1} + b_k y_k + c_k y_{k+1} = r_k.
void thomas(std::vector<cplx>& a, std::vector<cplx>& b, std::vector<cplx>& c, std::vector<cplx>& r) {
    const std::size_t n = b.size();
    for (std::size_t k = 1; k < n; ++k) {
        const cplx w = a[k] / b[k - 1];
        b[k] -= w * c[k - 1];
        r[k] -= w * r[k - 1];
    }
    r[n - 1] /= b[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) r[k] = (r[k] - c[k] * r[k + 1]) / b[k];
}

}  // namespace

std::vector<cplx> apply_quadratic(const GridWavefunction& psi, cplx alpha, cplx beta, cplx gamma, cplx delta,
                                  double hbar, StencilOrder order) {
    const auto& f = psi.values;
    const double h = psi.grid.spacing();
    std::vector<cplx> out(f.size(), 0.0);
    for (std::size_t k = 1; k + 1 < f.size(); ++k) {
        const double x = static_cast<double>(k) * h;
        const Derivs d = derivs(f, k, h, order);
        out[k] = alpha * (-hbar * hbar * d.d2) + beta * dilation(f, k, h, hbar, order) + gamma * x * x * f[k] +
                 delta * f[k] / (x * x);
    }
    return out;
}

cplx grid_inner(const GridWavefunction& a, const std::vector<cplx>& b) {
    cplx sum = 0.0;
    const std::size_t n = a.values.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
        sum += w * std::conj(a.values[k]) * b[k];
    }
    return sum * a.grid.spacing();
}

double boundary_density(const GridWavefunction& psi, std::size_t cells) {
    const std::size_t n = psi.values.size();
    double tail = 0.0, total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = std::norm(psi.values[k]);
        total += d;
        if (k + cells >= n) tail += d;
    }
    return total > 0.0 ? tail / total : 0.0;
}

QuadraticForm quadratic_form(const std::array<cplx, 3>& e, const Scenario& s) {
    const double M = s.m0 * s.omega0;
    QuadraticForm q;
    q.alpha = (e[2] - e[0]) / (4.0 * s.hbar * M);
    q.beta = -e[1] / (4.0 * s.hbar);
    q.gamma = M * (e[0] + e[2]) / (4.0 * s.hbar);
    q.delta = s.c * s.hbar * s.hbar * q.alpha;
    return q;
}

namespace {

std::array<cplx, 3> to_l_frame(const SU11Element& x, const QuadCoeffs& qc, const Scenario& s) {
    const auto c = x.cartesian();
    if (x.frame == Frame::L) return c;
    const Mat3 m = invariant_matrix(qc, s);
    std::array<cplx, 3> y{};
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) y[k] += c[j] * m[j][k];
    return y;
}

std::vector<cplx> apply_element(const GridWavefunction& psi, const std::array<cplx, 3>& e, const Scenario& s) {
    const QuadraticForm q = quadratic_form(e, s);
    return apply_quadratic(psi, q.alpha, q.beta, q.gamma, q.delta, s.hbar);
}

}  // namespace

GridMean invariant_mean_on_grid(const GridWavefunction& psi, const SU11Element& element, const QuadCoeffs& qc,
                                const Scenario& s) {
    const std::vector<cplx> xpsi = apply_element(psi, to_l_frame(element, qc, s), s);
    const double nrm = std::real(grid_inner(psi, psi.values));
    const cplx mean = grid_inner(psi, xpsi) / nrm;
    GridMean r;
    r.value = mean.real();
    r.imag = mean.imag();
    r.boundary_density = boundary_density(psi);
    r.boundary_warning = r.boundary_density > 1e-10;
    return r;
}

GridMoments invariant_moments_on_grid(const GridWavefunction& psi, const QuadCoeffs& qc, const Scenario& s) {
    const Mat3 m = invariant_matrix(qc, s);
    const double nrm = std::real(grid_inner(psi, psi.values));
    std::array<GridWavefunction, 3> ipsi;
    GridMoments r;
    for (int j = 0; j < 3; ++j) {
        ipsi[j] = psi;
        ipsi[j].values = apply_element(psi, {m[j][0], m[j][1], m[j][2]}, s);
        r.means[j] = std::real(grid_inner(psi, ipsi[j].values)) / nrm;
    }
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            r.sigma[j][k] = std::real(grid_inner(ipsi[j], ipsi[k].values)) / nrm - r.means[j] * r.means[k];
    r.boundary_density = boundary_density(psi);
    return r;
}

double l2_distance(const GridWavefunction& a, const GridWavefunction& b) {
    if (a.values.size() != b.values.size()) throw DomainError("l2_distance: grids differ");
    GridWavefunction d = a;
    for (std::size_t k = 0; k < d.values.size(); ++k) d.values[k] -= b.values[k];
    return d.norm();
}

PropagationRun propagate(const Scenario& s, const GridWavefunction& psi0, double t_final, double dt,
                         std::size_t snapshot_every, const EnvelopeTrajectory* traj) {
    if (!(dt > 0.0)) throw DomainError("propagate: dt must be positive");
    if (!(t_final > psi0.time)) throw DomainError("propagate: t_final must follow the initial time");
    if (s.c < -0.25) throw ValidationError("propagate: c below -1/4");
    const double n0 = psi0.norm();
    if (std::abs(n0 - 1.0) > 1e-4)
        throw ValidationError("propagate: initial state not normalized (norm " + format_double(n0) + ")");

    const GridSpec grid = psi0.grid;
    const std::size_t n = grid.npoints;
    const double h = grid.spacing();
    const double hbar = s.hbar;
    const auto steps = static_cast<std::size_t>(std::llround((t_final - psi0.time) / dt));
    if (steps == 0) throw DomainError("propagate: fewer than one step");
    const double step = (t_final - psi0.time) / static_cast<double>(steps);

    PropagationRun run;
    run.scenario = s;
    run.grid = grid;
    run.dt = step;
    run.steps = steps;

    auto record = [&](const GridWavefunction& w) {
        run.snapshots.push_back(w);
        run.norm_drift.push_back(std::abs(w.norm() * w.norm() - n0 * n0));
        if (traj) run.invariant_means.push_back(invariant_moments_on_grid(w, quad_coeffs(*traj, s, w.time), s).means);
    };

    GridWavefunction psi = psi0;
    psi.values[0] = 0.0;
    psi.values[n - 1] = 0.0;
    record(psi);

    const std::size_t m = n - 2;  // interior unknowns
    // Inverse-square term: at node k the coupling c/x² is replaced by
    // c_k/x_k² with c_k chosen so that the three-point operator −∂² + c_k/x²
    // annihilates the regular power x^a, a(a−1) = c, exactly. This keeps the
    // scheme second order for the non-smooth behavior at the origin;
    // c_k → c as k grows.
    const double a = 0.5 + 0.5 * std::sqrt(1.0 + 4.0 * s.c);
    std::vector<double> ck(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double k = static_cast<double>(j + 1);
        ck[j] = k * k * (std::expm1(a * std::log1p(1.0 / k)) + std::expm1(a * std::log1p(-1.0 / k)));
    }
    std::vector<cplx> lo(m), di(m), up(m), rhs(m);
    for (std::size_t it = 0; it < steps; ++it) {
        const double t = psi0.time + static_cast<double>(it) * step;
        const double tm = t + 0.5 * step;
        const double mass = s.mass(tm);
        const double w = s.freq(tm);
        const double b = s.squeeze(tm);
        const double g = s.g(tm);
        const double v1 = mass * w * w * h * h / 2.0 + g / (h * h);
        if (v1 * step > 0.5 * hbar)
            throw ValidationError("propagate: grid does not resolve the 1/x^2 term (V(x_1)·dt = " +
                                  format_double(v1 * step) + ")");
        const double kin = hbar * hbar / (2.0 * mass * h * h);
        const cplx tau = I * step / (2.0 * hbar);
        const auto& f = psi.values;
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t k = j + 1;
            const double x = static_cast<double>(k) * h;
            const double v = mass * w * w * x * x / 2.0 + (hbar * hbar / (2.0 * mass)) * ck[j] / (x * x);
            const cplx hl = -kin + I * hbar * b * (2.0 * x - h) / (2.0 * h);  // coefficient of ψ_{k−1}
            const cplx hu = -kin - I * hbar * b * (2.0 * x + h) / (2.0 * h);  // coefficient of ψ_{k+1}
            const double hd = 2.0 * kin + v;
            lo[j] = tau * hl;
            up[j] = tau * hu;
            di[j] = 1.0 + tau * hd;
            rhs[j] = (1.0 - tau * hd) * f[k] - tau * hl * f[k - 1] - tau * hu * f[k + 1];
        }
        thomas(lo, di, up, rhs);
        for (std::size_t j = 0; j < m; ++j) psi.values[j + 1] = rhs[j];
        psi.time = t + step;
        if (it + 1 == steps || (snapshot_every > 0 && (it + 1) % snapshot_every == 0)) {
            if (it + 1 == steps) psi.time = t_final;
            record(psi);
            if (run.norm_drift.back() > 1e-6)
                throw NumericalError("propagate: norm drift " + format_double(run.norm_drift.back()) +
                                     " exceeds 1e-6");
        }
    }
    return run;
}

double schrodinger_residual(const WaveFunction& psi, const Scenario& s, double t, const GridSpec& grid,
                            StencilOrder order) {
    const std::size_t n = grid.npoints;
    const double h = grid.spacing();
    const double hbar = s.hbar;
    const double dts = kResidualTimeStep;
    GridWavefunction now = sample(psi, grid, t);
    const GridWavefunction fwd = sample(psi, grid, t + dts);
    const GridWavefunction bwd = sample(psi, grid, t - dts);
    const double mass = s.mass(t), w = s.freq(t), b = s.squeeze(t), g = s.g(t);
    double sum = 0.0;
    for (std::size_t k = 2; k + 2 < n; ++k) {
        const double x = static_cast<double>(k) * h;
        const Derivs d = derivs(now.values, k, h, order);
        const cplx hpsi = -hbar * hbar / (2.0 * mass) * d.d2 + (mass * w * w * x * x / 2.0 + g / (x * x)) * now.values[k] +
                          b * dilation(now.values, k, h, hbar, order);
        const cplx dtpsi = (fwd.values[k] - bwd.values[k]) / (2.0 * dts);
        sum += std::norm(I * hbar * dtpsi - hpsi);
    }
    return std::sqrt(h * sum);
}

UnityReport resolution_of_unity_check(CoherentFamily family, double kappa, const UnityQuadrature& q, std::size_t dim) {
    if (q.radial_nodes == 0 || q.angular_nodes == 0) throw DomainError("unity check: empty quadrature");
    if (q.radial_nodes * q.angular_nodes > kUnityBudget)
        throw NumericalError("unity check: quadrature budget exceeded (" +
                             std::to_string(q.radial_nodes * q.angular_nodes) + " nodes)");
    UnityReport rep;
    rep.dim = dim;
    rep.quadrature = q;
    rep.matrix.assign(dim * dim, 0.0);
    const double dphi = 2.0 * std::numbers::pi / static_cast<double>(q.angular_nodes);

    QuadratureRule radial;
    std::vector<double> radius, weight;  // weight includes f·r·dr/dy
    if (family == CoherentFamily::Perelomov) {
        if (!(kappa > 0.5)) throw DomainError("unity check: Perelomov weight requires κ > 1/2");
        // r² = 1 − y^p with p = 1/(2κ−1). Then f₂·r dr = (2κ−1)p/(2π)·y^{p−1−2p} dy,
        // and the normalization (1−r²)^{2κ} = y^{2pκ} of |ξ⟩⟨ξ| cancels the power.
        const double p = 1.0 / (2.0 * kappa - 1.0);
        radial = gauss_legendre(q.radial_nodes, 0.0, 1.0);
        for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
            const double y = radial.nodes[i];
            radius.push_back(std::sqrt(-std::expm1(p * std::log(y))));
            weight.push_back(radial.weights[i] * 0.5 * p * (2.0 * kappa - 1.0) / std::numbers::pi);
        }
    } else {
        if (!(q.cutoff > 0.0)) throw DomainError("unity check: cutoff must be positive");
        radial = gauss_legendre(q.radial_nodes, 0.0, q.cutoff);
        const double nu = 2.0 * kappa - 1.0;
        for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
            const double r = radial.nodes[i];
            const double f1 = 2.0 / std::numbers::pi * specfun::bessel_k(nu, 2.0 * r) * specfun::bessel_i(nu, 2.0 * r);
            radius.push_back(r);
            weight.push_back(radial.weights[i] * f1 * r);
        }
    }

    for (std::size_t i = 0; i < radius.size(); ++i) {
        for (std::size_t a = 0; a < q.angular_nodes; ++a) {
            const cplx z = std::polar(radius[i], dphi * static_cast<double>(a));
            std::vector<cplx> c;
            if (family == CoherentFamily::Perelomov) {
                // Unnormalized coefficients; the normalization is absorbed in the weight.
                c.resize(dim);
                cplx zn = 1.0;
                double g = 1.0;
                for (std::size_t k = 0; k < dim; ++k) {
                    c[k] = g * zn;
                    zn *= z;
                    g *= std::sqrt((2.0 * kappa + static_cast<double>(k)) / static_cast<double>(k + 1));
                }
            } else {
                c = barut_girardello_coeffs(z, kappa, static_cast<unsigned>(dim - 1));
            }
            const double wt = weight[i] * dphi;
            for (std::size_t mm = 0; mm < dim; ++mm)
                for (std::size_t nn = 0; nn < dim; ++nn) rep.matrix[mm * dim + nn] += wt * c[mm] * std::conj(c[nn]);
        }
    }
    for (std::size_t mm = 0; mm < dim; ++mm)
        for (std::size_t nn = 0; nn < dim; ++nn) {
            const double dev = std::abs(rep.at(mm, nn) - (mm == nn ? 1.0 : 0.0));
            rep.max_deviation = std::max(rep.max_deviation, dev);
            if (mm == nn)
                rep.max_diag_deviation = std::max(rep.max_diag_deviation, dev);
            else
                rep.max_offdiag = std::max(rep.max_offdiag, dev);
        }
    return rep;
}

}  // namespace gso
