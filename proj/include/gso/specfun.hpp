#pragma once

#include <complex>
#include <cstddef>

namespace gso::specfun {

using cplx = std::complex<double>;

/// Uniform return contract for the series evaluators.
struct SeriesResult {
    cplx value{0.0, 0.0};
    std::size_t terms_used = 1;
    double truncation_estimate = 0.0;  ///< magnitude of the last retained term
};

/// Series stop when two consecutive terms fall below this fraction of the
/// partial sum; after `kMaxTerms` the evaluator reports non-convergence.
inline constexpr double kSeriesRelTol = 1e-16;
inline constexpr std::size_t kMaxTerms = 10000;

/// ln Γ(x) for x > 0 (Lanczos, g = 7, nine coefficients).
double log_gamma(double x);

/// Γ(x) for x > 0.
double gamma(double x);

/// Rising factorial (a)_n = a(a+1)...(a+n-1), (a)_0 = 1.
cplx pochhammer(cplx a, unsigned n);
double pochhammer(double a, unsigned n);

/// Generalized Laguerre polynomial L_n^d(x) by upward recurrence; d > -1.
double laguerre(unsigned n, double d, double x);

/// Bessel function of the first kind J_ν(x), ν ≥ 0, x ≥ 0.
/// Power series for x ≤ 8, Miller backward recurrence beyond.
double bessel_j(double nu, double x);

/// Modified Bessel function I_ν(z) for real ν ≥ 0 and complex z.
/// Pure-imaginary arguments are routed through J_ν (any magnitude);
/// other arguments use the power series, which is limited to |z| ≤ 30.
cplx bessel_i(double nu, cplx z);
double bessel_i(double nu, double x);

/// Modified Bessel function K_ν(x), x > 0, from the integral
/// ∫_0^∞ exp(-x cosh t) cosh(νt) dt evaluated with the trapezoid rule.
double bessel_k(double nu, double x);

/// Gauss hypergeometric series ₂F₁(a,b;c;z). Terminates when a or b is a
/// non-positive integer; otherwise requires |z| < 1.
SeriesResult gauss_2f1(cplx a, cplx b, double c, cplx z);

/// Kummer ₁F₁(a;c;z).
SeriesResult kummer_1f1(cplx a, double c, cplx z);

/// Confluent limit function ₀F₁(;c;x) = Σ x^k/((c)_k k!).
double hyper_0f1(double c, double x);
cplx hyper_0f1(double c, cplx z);

/// log(1+w) accurate for small |w|.
cplx log1p(cplx w);

}  // namespace gso::specfun
