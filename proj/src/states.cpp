#include "gso/states.hpp"

#include "gso/error.hpp"
#include "gso/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace gso {

namespace sf = specfun;

// ------------------------------------------------------------ parameters

cplx StateParams::l() const { return std::sqrt(w * w - 4.0 * u * v); }
cplx StateParams::r1() const { return -(w + l()) / (2.0 * u); }
cplx StateParams::r2() const { return -(w - l()) / (2.0 * u); }
cplx StateParams::s() const { return -std::norm(w + l()) / (4.0 * std::norm(u)); }
cplx StateParams::zeta() const { return 2.0 * l() / (w + l()); }

bool StateParams::degenerate() const {
    const double scale = std::max({std::abs(w), 1.0, std::abs(u), std::abs(v)});
    return std::abs(l()) < 1e-8 * scale;
}

namespace {

/// √((2κ)_n / n!) in log form.
double log_g(double kappa, unsigned n) {
    return 0.5 * (sf::log_gamma(2.0 * kappa + n) - sf::log_gamma(2.0 * kappa) - sf::log_gamma(n + 1.0));
}

/// Closed form with an explicit branch lb of √(w²−4uv), written as the
/// terminating ₂F₁ with r^n distributed over its terms so that l → 0 and
/// l + w → 0 are regular:
///   a_n = g_n (−1)^n (2u)^{−n} Σ_k (−n)_k/((2κ)_k k!) (lb+w)^{n−k} Π_{j<k}(2lb(κ+j) + 2z).
cplx closed_form_polynomial(const StateParams& p, cplx lb, unsigned n) {
    const double tk = 2.0 * p.kappa;
    const cplx lw = lb + p.w;
    cplx sum{0.0, 0.0};
    cplx prod{1.0, 0.0};
    double coef = 1.0;  // (−n)_k/((2κ)_k k!)
    for (unsigned k = 0; k <= n; ++k) {
        if (k > 0) {
            const double kk = k - 1.0;
            coef *= (kk - n) / ((tk + kk) * (kk + 1.0));
            prod *= 2.0 * lb * (p.kappa + kk) + 2.0 * p.z;
        }
        sum += coef * std::pow(lw, static_cast<int>(n - k)) * prod;
    }
    const cplx scale = std::pow(-1.0 / (2.0 * p.u), static_cast<int>(n));
    return std::exp(log_g(p.kappa, n)) * scale * sum;
}

cplx closed_form(const StateParams& p, cplx lb, bool degenerate, unsigned n) {
    if (n == 0) return 1.0;
    if (degenerate) return closed_form_polynomial(p, 0.0, n);
    const cplx lw = lb + p.w;
    const double scale = std::max({std::abs(p.w), 1.0, std::abs(p.u), std::abs(p.v)});
    if (std::abs(lw) < 1e-12 * scale) return closed_form_polynomial(p, lb, n);
    const cplx r = -lw / (2.0 * p.u);
    cplx A = p.kappa + p.z / lb;
    // Quantized eigenvalues: make the terminating parameter exact so that
    // the series stops at its true degree.
    const double m = std::round(A.real());
    const bool terminating = m <= 0.0 && std::abs(A - m) <= 1e-10 * (1.0 + std::abs(A));
    if (terminating) A = m;
    cplx zeta = 2.0 * lb / lw;
    cplx root = r;
    // Pfaff: r^n F(A, −n; 2κ; ζ) = (r(1−ζ))^n F(2κ−A, −n; 2κ; ζ/(ζ−1)), and
    // r(1−ζ) is the other root; the smaller argument limits cancellation
    if (!terminating && std::abs(zeta / (zeta - 1.0)) < std::abs(zeta)) {
        root = r * (1.0 - zeta);
        A = 2.0 * p.kappa - A;
        zeta = zeta / (zeta - 1.0);
    }
    const auto f = sf::gauss_2f1(A, cplx(-static_cast<double>(n), 0.0), 2.0 * p.kappa, zeta);
    return std::pow(root, static_cast<int>(n)) * std::exp(log_g(p.kappa, n)) * f.value;
}

/// Adaptive truncation driven by block sums of |c_n|². `next` yields
/// successive coefficients. Stops once the geometric continuation of the
/// block sums certifies tail ≤ tol·total and tail·(n+2κ+2)² ≤ 1e-20·total,
/// the second condition keeping the ladder leakage of the cut negligible.
struct Truncated {
    std::vector<cplx> coeffs;
    double total = 0.0;
    double tail = 0.0;
};

Truncated truncate_series(const std::function<cplx(std::size_t)>& next, double kappa, double tol,
                          std::size_t first_index = 0) {
    constexpr std::size_t kBlock = 8;
    Truncated out;
    out.coeffs.assign(first_index, cplx(0.0, 0.0));
    double block = 0.0, prev_block = -1.0;
    for (std::size_t k = 0;; ++k) {
        const std::size_t n = first_index + k;
        if (n >= kMaxCoefficients)
            throw NumericalError("state truncation failed: tail not certified within " +
                                 std::to_string(kMaxCoefficients) + " coefficients");
        const cplx c = next(k);
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw NumericalError("state coefficients overflowed at n = " + std::to_string(n));
        out.coeffs.push_back(c);
        const double a2 = std::norm(c);
        out.total += a2;
        block += a2;
        if ((k + 1) % kBlock) continue;
        if (k + 1 >= 4 * kBlock && prev_block >= 0.0) {
            double tail = -1.0;
            if (block == 0.0) {
                tail = 0.0;
            } else if (prev_block > 0.0 && block < 0.9 * prev_block) {
                const double q = block / prev_block;
                tail = block * q / (1.0 - q);
            }
            const double lev = static_cast<double>(n) + 2.0 * kappa + 2.0;
            if (tail >= 0.0 && tail <= tol * out.total && tail * lev * lev <= 1e-20 * out.total) {
                out.tail = tail;
                break;
            }
        }
        prev_block = block;
        block = 0.0;
    }
    while (out.coeffs.size() > 1 && out.coeffs.back() == cplx(0.0, 0.0)) out.coeffs.pop_back();
    return out;
}

FockState finish(Truncated tr, double kappa, double norm_sq) {
    FockState st;
    st.kappa = kappa;
    const double scale = 1.0 / std::sqrt(norm_sq);
    for (auto& c : tr.coeffs) c *= scale;
    st.coeffs = std::move(tr.coeffs);
    st.tail_bound = tr.tail / tr.total;
    return st;
}

// ------------------------------------------------------- closed-form overlap

/// Family member with an explicit branch of l.
struct Resolved {
    cplx z, u, v, w, l;
    bool degenerate = false;
    cplx r() const { return -(w + l) / (2.0 * u); }
    cplx A(double kappa) const { return kappa + z / l; }
    cplx zeta() const { return 2.0 * l / (w + l); }
    Resolved scaled(cplx lam) const { return {lam * z, u, lam * lam * v, lam * w, lam * l, degenerate}; }
};

Resolved resolve(const StateParams& p) {
    const FamilyBranch br = classify(p);
    return {p.z, p.u, p.v, p.w, br.l, br.kind == FamilyBranch::Kind::Degenerate};
}

/// Continued value of log(1 − t + ζt) − log(1 − t) (the straight segment
/// from 1 never winds around the origin, so principal logs are exact), with
/// the small-ζ part taken from log1p for accuracy when multiplied by a large
/// exponent.
cplx log_ratio(cplx zeta, cplx t) {
    const cplx exact = std::log(1.0 - t + zeta * t) - std::log(1.0 - t);
    const cplx fine = sf::log1p(zeta * t / (1.0 - t));
    const double k = std::round((exact.imag() - fine.imag()) / (2.0 * std::numbers::pi));
    return fine + cplx(0.0, 2.0 * std::numbers::pi * k);
}

/// log ₂F₁(a, b; c; X(1)) continued along the curve X(s), s ∈ [0, 1], from
/// X(0) = 0.  Off the unit disc the hypergeometric ODE is stepped by local
/// Taylor re-expansion; each step stays inside half the distance to the
/// nearer singular point (0 or 1), so the continuation follows the curve's
/// homotopy class.  A running log scale keeps large values finite.
cplx log_hyp2f1_along(cplx a, cplx b, double c, const std::function<cplx(double)>& X) {
    // Polynomial case: no continuation needed.
    auto snap = [](cplx& q) {
        const double n = std::round(q.real());
        if (n > 0.0 || std::abs(q - n) > 1e-10 * (1.0 + std::abs(q))) return false;
        q = n;
        return true;
    };
    if (snap(a) || snap(b)) return std::log(sf::gauss_2f1(a, b, c, X(1.0)).value);

    constexpr int kProbe = 256;
    double max_abs = 0.0;
    for (int i = 1; i <= kProbe; ++i) max_abs = std::max(max_abs, std::abs(X(static_cast<double>(i) / kProbe)));
    if (max_abs < 0.9) return std::log(sf::gauss_2f1(a, b, c, X(1.0)).value);

    double s = 1.0;
    while (std::abs(X(s)) > 0.5) s *= 0.5;
    cplx x = X(s);
    cplx w = sf::gauss_2f1(a, b, c, x).value;
    cplx d = a * b / c * sf::gauss_2f1(a + 1.0, b + 1.0, c + 1.0, x).value;
    cplx log_scale{0.0, 0.0};
    const cplx ab = a * b, apb1 = a + b + 1.0;

    auto step = [&](cplx x0, cplx h) {
        // x(1−x)w'' + [c − (a+b+1)x]w' − ab w = 0 expanded about x0.
        const cplx p0 = x0 * (1.0 - x0), p1 = 1.0 - 2.0 * x0;
        const cplx q0 = c - apb1 * x0;
        cplx ck = w, ck1 = d;  // c_k, c_{k+1}
        cplx hk = 1.0;         // h^k
        cplx wn = ck, dn = ck1;
        for (int k = 0; k < 5000; ++k) {
            const double kk = k;
            const cplx ck2 = -((p1 * kk + q0) * (kk + 1.0) * ck1 + (-kk * (kk - 1.0) - apb1 * kk - ab) * ck) /
                             (p0 * (kk + 2.0) * (kk + 1.0));
            const cplx hk1 = hk * h, hk2 = hk1 * h;
            const cplx tw = ck2 * hk2, td = (kk + 2.0) * ck2 * hk1;
            wn += k == 0 ? ck1 * hk1 + tw : tw;
            dn += td;
            const double mag = std::abs(tw) + std::abs(td * h);
            if (k > 4 && mag <= 1e-17 * (std::abs(wn) + std::abs(dn * h))) {
                w = wn;
                d = dn;
                return;
            }
            ck = ck1;
            ck1 = ck2;
            hk = hk1;
        }
        throw NumericalError("overlap: hypergeometric continuation did not converge");
    };

    for (int steps = 0; s < 1.0; ++steps) {
        if (steps > 20000) throw NumericalError("overlap: hypergeometric continuation passes a singular point");
        const double dist = std::min(std::abs(x), std::abs(1.0 - x));
        const double reach = 0.5 * dist;
        // Largest parameter step whose curve segment stays within reach of x.
        double ds = 1.0 - s;
        for (int tries = 0;; ++tries) {
            bool inside = true;
            for (int i = 1; i <= 16 && inside; ++i)
                inside = std::abs(X(s + ds * i / 16.0) - x) <= reach;
            if (inside) break;
            ds *= 0.5;
            if (tries > 60) throw NumericalError("overlap: hypergeometric continuation passes a singular point");
        }
        const double s1 = std::min(1.0, s + ds);
        const cplx x1 = X(s1);
        step(x, x1 - x);
        x = x1;
        s = s1;
        const double mag = std::abs(w) + std::abs(d);
        if (mag > 1e100 || (mag < 1e-100 && mag > 0.0)) {
            log_scale += std::log(mag);
            w /= mag;
            d /= mag;
        }
    }
    return log_scale + std::log(w);
}

cplx log_overlap(const Resolved& bra, const Resolved& ket, double kappa) {
    const double tk = 2.0 * kappa;
    const cplx rb = std::conj(bra.r());
    const cplx rk = ket.r();
    const cplx t = rb * rk;
    if (!(std::abs(t) < 1.0)) throw NumericalError("overlap: |t| >= 1, outside the convergent region");
    const cplx om = 1.0 - t;
    cplx res = -tk * std::log(om);
    if (!bra.degenerate && !ket.degenerate) {
        const cplx zb = std::conj(bra.zeta()), zk = ket.zeta();
        const cplx Ab = std::conj(bra.A(kappa)), Ak = ket.A(kappa);
        // X(s) = ζ_b ζ_k s t / ((1 − st + ζ_b st)(1 − st + ζ_k st)), continued from s = 0.
        const cplx K = zb * zk * t, eb = t * (zb - 1.0), ek = t * (zk - 1.0);
        auto Xs = [&](double s) { return K * s / ((1.0 + s * eb) * (1.0 + s * ek)); };
        res += -Ab * log_ratio(zb, t) - Ak * log_ratio(zk, t);
        res += log_hyp2f1_along(Ab, Ak, tk, Xs);
        return res;
    }
    const cplx P = -std::conj(bra.z) * rk / std::conj(bra.u);
    const cplx Q = -ket.z * rb / ket.u;
    if (bra.degenerate && ket.degenerate) {
        res += -(P + Q) / om;
        res += std::log(sf::hyper_0f1(tk, std::conj(bra.z) * ket.z / (std::conj(bra.u) * ket.u * om * om)));
        return res;
    }
    if (bra.degenerate) {
        const cplx zk = ket.zeta(), Ak = ket.A(kappa);
        res += -P / om - Ak * log_ratio(zk, t);
        res += std::log(sf::kummer_1f1(Ak, tk, P * zk / (om * (om + zk * t))).value);
        return res;
    }
    const cplx zb = std::conj(bra.zeta()), Ab = std::conj(bra.A(kappa));
    res += -Q / om - Ab * log_ratio(zb, t);
    res += std::log(sf::kummer_1f1(Ab, tk, Q * zb / (om * (om + zb * t))).value);
    return res;
}

}  // namespace

// ------------------------------------------------------------ classification

FamilyBranch classify(const StateParams& p) {
    if (!(p.kappa > 0.0)) throw ValidationError("state: kappa must be positive");
    if (p.u == cplx(0.0, 0.0)) throw ValidationError("state: u = 0 belongs to the separate u = 0 branch");
    FamilyBranch br;
    const cplx l = p.l();
    if (p.l() == cplx(0.0, 0.0) && p.w == cplx(0.0, 0.0) && p.v != cplx(0.0, 0.0))
        throw ValidationError("state: branch undefined (l = w = 0 with v != 0)");
    if (p.degenerate()) {
        br.kind = FamilyBranch::Kind::Degenerate;
        br.l = 0.0;
        if (!(std::abs(p.w / (2.0 * p.u)) < 1.0))
            throw ValidationError("state: non-normalizable parameters (|w| >= 2|u| with l = 0)");
        return br;
    }
    const double ra = std::abs(p.r1()), rb = std::abs(p.r2());
    if (ra < 1.0 && rb < 1.0) {
        br.kind = FamilyBranch::Kind::Regular;
        br.l = l;
        return br;
    }
    for (cplx lb : {l, -l}) {
        const cplx A = p.kappa + p.z / lb;
        const double tol = 1e-10 * (1.0 + std::abs(A));
        const double m = std::round(A.real());
        if (std::abs(A.imag()) <= tol && m <= 0.0 && std::abs(A.real() - m) <= tol &&
            std::abs((lb + p.w) / (2.0 * p.u)) < 1.0) {
            br.kind = FamilyBranch::Kind::Terminating;
            br.l = lb;
            br.degree = static_cast<unsigned>(-m);
            return br;
        }
    }
    throw ValidationError("state: non-normalizable parameters (|w ± l| must both be below 2|u|)");
}

cplx coeff_a_n(const StateParams& p, unsigned n) {
    if (p.u == cplx(0.0, 0.0)) throw ValidationError("coeff_a_n: requires u != 0");
    if (p.l() == cplx(0.0, 0.0) && p.w == cplx(0.0, 0.0) && p.v != cplx(0.0, 0.0))
        throw ValidationError("coeff_a_n: branch undefined (l = w = 0 with v != 0)");
    return closed_form(p, p.l(), p.degenerate(), n);
}

// ------------------------------------------------------------ builders

FockState build_state(const StateParams& p, double tail_tol) {
    const FamilyBranch br = classify(p);
    const double kappa = p.kappa;
    Truncated tr;
    if (br.kind == FamilyBranch::Kind::Terminating) {
        tr = truncate_series([&](std::size_t n) { return closed_form(p, br.l, false, static_cast<unsigned>(n)); },
                             kappa, tail_tol);
    } else {
        using lcplx = std::complex<long double>;
        const lcplx u(p.u), v(p.v), w(p.w), z(p.z);
        const long double tk = 2.0L * kappa;
        lcplx prev(0.0L), cur(1.0L);
        tr = truncate_series(
            [&](std::size_t n) -> cplx {
                if (n == 0) return cplx(1.0, 0.0);
                const long double m = static_cast<long double>(n - 1);
                const lcplx next = -(v * std::sqrt(m * (tk + m - 1.0L)) * prev + (w * (kappa + m) - z) * cur) /
                                   (u * std::sqrt((m + 1.0L) * (tk + m)));
                prev = cur;
                cur = next;
                return cplx(static_cast<double>(next.real()), static_cast<double>(next.imag()));
            },
            kappa, tail_tol);
    }
    const double total = tr.total;
    FockState st = finish(std::move(tr), kappa, total);
    st.params = p;
    try {
        const double n_an = analytic_normalization(p);
        st.analytic_norm_discrepancy = std::abs(n_an * std::sqrt(total) - 1.0);
    } catch (const NumericalError&) {
        st.analytic_norm_discrepancy = std::numeric_limits<double>::quiet_NaN();
    }
    return st;
}

FockState build_state_u0(unsigned m, cplx v, cplx w, double kappa, double tail_tol) {
    if (!(kappa > 0.0)) throw ValidationError("state: kappa must be positive");
    if (w == cplx(0.0, 0.0) || !(std::abs(v / w) < 1.0))
        throw ValidationError("state: u = 0 branch diverges unless |v/w| < 1");
    const cplx ratio = -v / w;
    const double tk = 2.0 * kappa;
    cplx d{1.0, 0.0};
    Truncated tr = truncate_series(
        [&](std::size_t n) {
            if (n > 0) {
                const double j = static_cast<double>(m + n);
                d *= ratio * std::sqrt(j * (tk + j - 1.0)) / static_cast<double>(n);
            }
            return d;
        },
        kappa, tail_tol, m);
    const double total = tr.total;
    FockState st = finish(std::move(tr), kappa, total);
    st.eigenvalue = w * (kappa + m);
    try {
        const double x = std::norm(v / w);
        const double f = sf::gauss_2f1(m + 1.0, tk + m, 1.0, x).value.real();
        st.analytic_norm_discrepancy = std::abs(std::sqrt(total / f) - 1.0);
    } catch (const NumericalError&) {
        st.analytic_norm_discrepancy = std::numeric_limits<double>::quiet_NaN();
    }
    return st;
}

FockState barut_girardello(cplx z, double kappa, double tail_tol) {
    if (!(kappa > 0.0)) throw ValidationError("state: kappa must be positive");
    const double tk = 2.0 * kappa;
    cplx c{1.0, 0.0};
    Truncated tr = truncate_series(
        [&](std::size_t n) {
            if (n > 0) c *= z / std::sqrt(static_cast<double>(n) * (tk + n - 1.0));
            return c;
        },
        kappa, tail_tol);
    const double norm_sq = sf::hyper_0f1(tk, std::norm(z));
    const double total = tr.total;
    FockState st = finish(std::move(tr), kappa, norm_sq);
    st.analytic_norm_discrepancy = std::abs(std::sqrt(norm_sq / total) - 1.0);
    st.params = StateParams{z, 1.0, 0.0, 0.0, kappa};
    return st;
}

FockState perelomov(cplx xi, double kappa, double tail_tol) {
    if (!(std::abs(xi) < 1.0)) throw DomainError("perelomov: requires |xi| < 1");
    if (!(kappa > 0.0)) throw ValidationError("state: kappa must be positive");
    const double tk = 2.0 * kappa;
    cplx c{1.0, 0.0};
    Truncated tr = truncate_series(
        [&](std::size_t n) {
            if (n > 0) c *= xi * std::sqrt((tk + n - 1.0) / static_cast<double>(n));
            return c;
        },
        kappa, tail_tol);
    const double norm_sq = std::pow(1.0 - std::norm(xi), -tk);
    const double total = tr.total;
    FockState st = finish(std::move(tr), kappa, norm_sq);
    st.analytic_norm_discrepancy = std::abs(std::sqrt(norm_sq / total) - 1.0);
    return st;
}

std::vector<cplx> barut_girardello_coeffs(cplx z, double kappa, unsigned nmax) {
    const double tk = 2.0 * kappa;
    const double norm = 1.0 / std::sqrt(sf::hyper_0f1(tk, std::norm(z)));
    std::vector<cplx> c(nmax + 1);
    cplx cur = norm;
    for (unsigned n = 0; n <= nmax; ++n) {
        if (n > 0) cur *= z / std::sqrt(static_cast<double>(n) * (tk + n - 1.0));
        c[n] = cur;
    }
    return c;
}

std::vector<cplx> perelomov_coeffs(cplx xi, double kappa, unsigned nmax) {
    if (!(std::abs(xi) < 1.0)) throw DomainError("perelomov: requires |xi| < 1");
    const double tk = 2.0 * kappa;
    std::vector<cplx> c(nmax + 1);
    cplx cur = std::pow(1.0 - std::norm(xi), kappa);
    for (unsigned n = 0; n <= nmax; ++n) {
        if (n > 0) cur *= xi * std::sqrt((tk + n - 1.0) / static_cast<double>(n));
        c[n] = cur;
    }
    return c;
}

// ------------------------------------------------------------ scalar products

cplx inner_product(const FockState& a, const FockState& b) {
    if (a.kappa != b.kappa) throw ValidationError("inner_product: states carry different kappa");
    cplx s{0.0, 0.0};
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) s += std::conj(a.coeffs[i]) * b.coeffs[i];
    return s;
}

cplx log_overlap_unnormalized(const StateParams& bra, const StateParams& ket) {
    if (bra.kappa != ket.kappa) throw ValidationError("inner_product_analytic: states carry different kappa");
    return log_overlap(resolve(bra), resolve(ket), bra.kappa);
}

double analytic_normalization(const StateParams& p) {
    return std::exp(-0.5 * log_overlap_unnormalized(p, p).real());
}

cplx inner_product_analytic(const StateParams& bra, const StateParams& ket) {
    const cplx l12 = log_overlap_unnormalized(bra, ket);
    const double l11 = log_overlap_unnormalized(bra, bra).real();
    const double l22 = log_overlap_unnormalized(ket, ket).real();
    return std::exp(l12 - 0.5 * (l11 + l22));
}

/// Σ λ^n |a_n|² / Σ |a_n|² at complex λ, used by the moment generator.
cplx scaled_norm_ratio(const StateParams& p, cplx lambda) {
    const Resolved r = resolve(p);
    const cplx base = log_overlap(r, r, p.kappa);
    return std::exp(log_overlap(r, r.scaled(lambda), p.kappa) - base);
}

std::vector<cplx> scaled_norm_ratios(const StateParams& p, const std::vector<cplx>& lambdas) {
    const Resolved r = resolve(p);
    const cplx base = log_overlap(r, r, p.kappa);
    std::vector<cplx> out;
    out.reserve(lambdas.size());
    for (const cplx lam : lambdas) out.push_back(std::exp(log_overlap(r, r.scaled(lam), p.kappa) - base));
    return out;
}

/// Radius of convergence of Σ λ^n |a_n|² in λ.
double scaled_norm_radius(const StateParams& p) {
    const FamilyBranch br = classify(p);
    double rmax = 0.0;
    if (br.kind == FamilyBranch::Kind::Regular) rmax = std::max(std::abs(p.r1()), std::abs(p.r2()));
    else rmax = std::abs((br.l + p.w) / (2.0 * p.u));
    return rmax == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / (rmax * rmax);
}

}  // namespace gso
