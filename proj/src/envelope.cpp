#include "gso/envelope.hpp"

#include "gso/error.hpp"

#include <algorithm>
#include <cmath>

namespace gso {

namespace {

constexpr double kSpanSlack = 1e-12;

struct Rk4State {
    cplx e, ed;
};

Rk4State rk4_step(const Scenario& s, double t, const Rk4State& y, double h) {
    auto f = [&](double tt, const Rk4State& st) {
        return Rk4State{st.ed, -effective_frequency_sq(s, tt) * st.e};
    };
    const Rk4State k1 = f(t, y);
    const Rk4State k2 = f(t + 0.5 * h, {y.e + 0.5 * h * k1.e, y.ed + 0.5 * h * k1.ed});
    const Rk4State k3 = f(t + 0.5 * h, {y.e + 0.5 * h * k2.e, y.ed + 0.5 * h * k2.ed});
    const Rk4State k4 = f(t + h, {y.e + h * k3.e, y.ed + h * k3.ed});
    return {y.e + h / 6.0 * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e),
            y.ed + h / 6.0 * (k1.ed + 2.0 * k2.ed + 2.0 * k3.ed + k4.ed)};
}

double wronskian_residual(cplx e, cplx ed) {
    return std::abs(std::conj(e) * ed - e * std::conj(ed) - cplx(0.0, 2.0));
}

EnvelopeTrajectory integrate(const Scenario& s, double dt) {
    const double w2 = effective_frequency_sq(s, s.t0);
    if (s.canonical_start && !(w2 > 0.0))
        throw ValidationError("envelope: canonical start needs a positive effective frequency at t0");
    // Canonical start: Ω₀ = Ω(t0). Otherwise the reference frequency ω₀.
    const double a = s.canonical_start ? std::sqrt(w2) : s.omega0;
    Rk4State y{cplx(1.0 / std::sqrt(a), 0.0), cplx(0.0, std::sqrt(a))};

    const auto steps = static_cast<std::size_t>(std::llround(std::ceil((s.t1 - s.t0) / dt - 1e-9)));
    const double h = (s.t1 - s.t0) / static_cast<double>(steps);

    EnvelopeTrajectory tr;
    tr.scenario = s;
    tr.times.reserve(steps + 1);
    tr.eps.reserve(steps + 1);
    tr.eps_dot.reserve(steps + 1);
    tr.omega_sq.reserve(steps + 1);
    tr.wronskian_residual.reserve(steps + 1);
    tr.theta.reserve(steps + 1);
    double theta = std::arg(y.e);
    for (std::size_t i = 0;; ++i) {
        const double t = s.t0 + static_cast<double>(i) * h;
        const double res = wronskian_residual(y.e, y.ed);
        if (!(res <= 1e-6))
            throw NumericalError("envelope: Wronskian residual " + format_double(res) + " at t = " +
                                 format_double(t) + " exceeds 1e-6");
        if (i > 0) theta += std::arg(y.e / tr.eps.back());
        tr.times.push_back(t);
        tr.eps.push_back(y.e);
        tr.eps_dot.push_back(y.ed);
        tr.omega_sq.push_back(effective_frequency_sq(s, t));
        tr.wronskian_residual.push_back(res);
        tr.theta.push_back(theta);
        if (i == steps) break;
        y = rk4_step(s, t, y, h);
    }
    return tr;
}

}  // namespace

double effective_frequency_sq(const Scenario& s, double t) {
    const double m = s.mass(t), md = s.mass_dot(t), mdd = s.mass_ddot(t);
    const double w = s.freq(t), b = s.squeeze(t), bd = s.squeeze_dot(t);
    const double r = w * w - 2.0 * b * md / m + md * md / (4.0 * m * m) - mdd / (2.0 * m) - 4.0 * b * b - 2.0 * bd;
    if (!std::isfinite(r)) throw NumericalError("envelope: coefficients undefined at t = " + format_double(t));
    return r;
}

double EnvelopeTrajectory::max_wronskian_residual() const {
    return *std::max_element(wronskian_residual.begin(), wronskian_residual.end());
}

EnvelopePoint EnvelopeTrajectory::at(double t) const {
    if (t < t_begin() - kSpanSlack || t > t_end() + kSpanSlack)
        throw DomainError("envelope: t = " + format_double(t) + " outside trajectory span");
    const double h = times.size() > 1 ? times[1] - times[0] : 1.0;
    auto i = static_cast<std::size_t>(std::floor((t - t_begin()) / h));
    i = std::min(i, times.size() - 1);
    if (i + 1 < times.size() && t - times[i] > 0.5 * h) ++i;
    EnvelopePoint p;
    p.t = t;
    const double tau = t - times[i];
    if (tau == 0.0) {
        p.eps = eps[i];
        p.eps_dot = eps_dot[i];
        p.theta = theta[i];
        return p;
    }
    const Rk4State y = rk4_step(scenario, times[i], {eps[i], eps_dot[i]}, tau);
    p.eps = y.e;
    p.eps_dot = y.ed;
    p.theta = theta[i] + std::arg(y.e / eps[i]);
    return p;
}

EnvelopeTrajectory integrate_envelope(const Scenario& s) { return integrate(s, s.dt); }

double step_halving_discrepancy(const Scenario& s) {
    const EnvelopeTrajectory a = integrate(s, s.dt);
    const EnvelopeTrajectory b = integrate(s, s.dt / 2.0);
    double d = 0.0;
    for (std::size_t i = 0; i < a.times.size() && 2 * i < b.times.size(); ++i)
        d = std::max(d, std::abs(a.eps[i] - b.eps[2 * i]));
    return d;
}

QuadCoeffs quad_coeffs(const EnvelopePoint& p, const Scenario& s) {
    const double m = s.mass(p.t), md = s.mass_dot(p.t), b = s.squeeze(p.t);
    const double hb = s.hbar;
    const cplx e = p.eps, ed = p.eps_dot;
    const cplx k = 2.0 * b * e - ed + md / (2.0 * m) * e;
    QuadCoeffs q;
    q.t = p.t;
    q.alpha = -e * e / (4.0 * hb * m);
    q.beta = -e / (4.0 * hb) * k;
    q.gamma = -m / (4.0 * hb) * k * k;
    q.delta = s.c * hb * hb * q.alpha;
    return q;
}

QuadCoeffs quad_coeffs(const EnvelopeTrajectory& traj, const Scenario& s, double t) {
    return quad_coeffs(traj.at(t), s);
}

double phase_gamma12(const EnvelopeTrajectory& traj, double t1, double t2) {
    if (t1 < traj.t_begin() - kSpanSlack || t2 > traj.t_end() + kSpanSlack)
        throw DomainError("phase_gamma12: interval outside trajectory span");
    if (t2 < t1) throw DomainError("phase_gamma12: requires t1 <= t2");
    if (t2 == t1) return 0.0;
    auto inv = [&](double t) { return 1.0 / std::norm(traj.at(t).eps); };
    // Panels follow the sample intervals so that every panel is short.
    std::vector<double> cuts{t1};
    for (double t : traj.times)
        if (t > t1 && t < t2) cuts.push_back(t);
    cuts.push_back(t2);
    double sum = 0.0;
    double fa = inv(cuts[0]);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (b - a <= 0.0) continue;
        const double fb = inv(b);
        sum += (b - a) / 6.0 * (fa + 4.0 * inv(0.5 * (a + b)) + fb);
        fa = fb;
    }
    return sum;
}

}  // namespace gso
