#include "gso/algebra.hpp"

#include "gso/error.hpp"

#include <cmath>
#include <stdexcept>

namespace gso {

// ------------------------------------------------------------------ 3×3 ops

Mat3 identity3() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

Mat3 multiply(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

Mat3 transpose(const Mat3& a) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = a[j][i];
    return r;
}

double determinant(const Mat3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Mat3 inverse(const Mat3& a) {
    const double det = determinant(a);
    if (!(std::abs(det) >= 1e-12)) throw NumericalError("inverse: singular 3x3 matrix");
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
            r[i][j] = (a[i1][j1] * a[i2][j2] - a[i1][j2] * a[i2][j1]) / det;
        }
    return r;
}

double max_abs_diff(const Mat3& a, const Mat3& b) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
    return d;
}

namespace {

double norm_inf(const Mat3& a) {
    double n = 0.0;
    for (const auto& row : a) n = std::max(n, std::abs(row[0]) + std::abs(row[1]) + std::abs(row[2]));
    return n;
}

}  // namespace

// ------------------------------------------------------------------- kappa

KappaIndex kappa_from_c(double c, KappaBranch branch, bool allow_quarter) {
    const double disc = 1.0 + 4.0 * c;
    if (disc < 0.0) throw ValidationError("kappa: collapse, 1+4c < 0");
    const double root = 0.5 * std::sqrt(disc);
    KappaIndex k;
    k.c = c;
    k.branch = branch;
    k.kappa = 0.5 * (branch == KappaBranch::Principal ? 1.0 + root : 1.0 - root);
    if (allow_quarter && std::abs(k.kappa - 0.25) < 1e-14) {
        k.kappa = 0.25;
        return k;
    }
    if (!(k.kappa > 0.25))
        throw ValidationError("kappa: admissibility requires kappa > 1/4, got " + format_double(k.kappa));
    return k;
}

// ------------------------------------------------------------ SU11Element

SU11Element SU11Element::from_cartesian(cplx x1, cplx x2, cplx x3, Frame f, double t) {
    SU11Element e;
    e.coeff_minus = 0.5 * (x1 + cplx(0.0, 1.0) * x2);
    e.coeff_plus = 0.5 * (x1 - cplx(0.0, 1.0) * x2);
    e.coeff_3 = x3;
    e.frame = f;
    e.frame_time = t;
    return e;
}

SU11Element SU11Element::from_cartesian(const Vec3& x, Frame f, double t) {
    return from_cartesian(x[0], x[1], x[2], f, t);
}

SU11Element SU11Element::combination(cplx u, cplx v, cplx w, Frame f, double t) {
    SU11Element e;
    e.coeff_minus = u;
    e.coeff_plus = v;
    e.coeff_3 = w;
    e.frame = f;
    e.frame_time = t;
    return e;
}

std::array<cplx, 3> SU11Element::cartesian() const {
    return {coeff_minus + coeff_plus, cplx(0.0, -1.0) * (coeff_minus - coeff_plus), coeff_3};
}

bool SU11Element::is_hermitian(double tol) const {
    const double scale = std::max({1.0, std::abs(coeff_minus), std::abs(coeff_3)});
    return std::abs(coeff_plus - std::conj(coeff_minus)) <= tol * scale && std::abs(coeff_3.imag()) <= tol * scale;
}

Vec3 SU11Element::real_cartesian(double tol) const {
    if (!is_hermitian(tol)) throw ValidationError("su(1,1) element is not Hermitian");
    const auto x = cartesian();
    return {x[0].real(), x[1].real(), x[2].real()};
}

namespace {

void require_same_frame(const SU11Element& a, const SU11Element& b) {
    if (a.frame != b.frame || (a.frame == Frame::I && a.frame_time != b.frame_time))
        throw std::logic_error("su(1,1): arithmetic mixes elements from different frames");
}

}  // namespace

SU11Element SU11Element::operator+(const SU11Element& o) const {
    require_same_frame(*this, o);
    SU11Element r = *this;
    r.coeff_minus += o.coeff_minus;
    r.coeff_plus += o.coeff_plus;
    r.coeff_3 += o.coeff_3;
    return r;
}

SU11Element SU11Element::operator*(cplx s) const {
    SU11Element r = *this;
    r.coeff_minus *= s;
    r.coeff_plus *= s;
    r.coeff_3 *= s;
    return r;
}

SU11Element commutator(const SU11Element& x, const SU11Element& y) {
    require_same_frame(x, y);
    const auto a = x.cartesian();
    const auto b = y.cartesian();
    const cplx c1 = a[1] * b[2] - a[2] * b[1];
    const cplx c2 = a[2] * b[0] - a[0] * b[2];
    const cplx c3 = a[0] * b[1] - a[1] * b[0];
    const cplx mi(0.0, -1.0);
    return SU11Element::from_cartesian(mi * -c1, mi * -c2, mi * c3, x.frame, x.frame_time);
}

cplx casimir_form(const SU11Element& x) {
    const auto a = x.cartesian();
    return a[2] * a[2] - a[0] * a[0] - a[1] * a[1];
}

SU11Element hamiltonian_coeffs(const Scenario& s, double t) {
    const double m = s.mass(t), w = s.freq(t), b = s.squeeze(t);
    const double r = m * w * w / (s.m0 * s.omega0 * s.omega0);
    const double q = s.m0 / m;
    const double hw = s.hbar * s.omega0;
    return SU11Element::from_cartesian(hw * (r - q), -4.0 * s.hbar * b, hw * (r + q));
}

std::array<SU11Element, 3> invariant_elements(const QuadCoeffs& qc, const Scenario& s) {
    const double M = s.m0 * s.omega0;
    const double h2 = 2.0 * s.hbar;
    // J = I_1 − i I_2 = 2ħ[(γ/M − Mα)L1 − 2βL2 + (γ/M + Mα)L3]
    const cplx j1 = h2 * (qc.gamma / M - M * qc.alpha);
    const cplx j2 = h2 * (-2.0 * qc.beta);
    const cplx j3 = h2 * (qc.gamma / M + M * qc.alpha);
    const Vec3 a{j1.real(), j2.real(), j3.real()};
    const Vec3 b{-j1.imag(), -j2.imag(), -j3.imag()};
    // I_3 = i[I_1, I_2] = (−(a×b)_1, −(a×b)_2, (a×b)_3)
    const Vec3 c{-(a[1] * b[2] - a[2] * b[1]), -(a[2] * b[0] - a[0] * b[2]), a[0] * b[1] - a[1] * b[0]};
    return {SU11Element::from_cartesian(a), SU11Element::from_cartesian(b), SU11Element::from_cartesian(c)};
}

Mat3 invariant_matrix(const QuadCoeffs& qc, const Scenario& s) {
    const auto el = invariant_elements(qc, s);
    Mat3 m{};
    for (int j = 0; j < 3; ++j) m[j] = el[j].real_cartesian(1e-9);
    return m;
}

Mat3 lambda_closed_form(const QuadCoeffs& qc, const Scenario& s) {
    const double M = s.m0 * s.omega0;
    const double hb = s.hbar;
    const double pre = 8.0 * hb * hb;
    const double q = 1.0 / (4.0 * hb);
    const cplx al = qc.alpha, be = qc.beta, ga = qc.gamma;
    const double im_bg = (be * ga).imag();
    const double im_abs = (al * std::conj(be)).imag();
    const double im_ags = (al * std::conj(ga)).imag();
    Mat3 r{};
    r[0] = {q * (ga.real() / M - M * al.real()), q * (ga.real() / M - be.real()), q * M * al.real()};
    r[1] = {q * (ga.real() / M - M * al.imag()), q * (ga.real() / M - be.imag()), q * M * al.imag()};
    r[2] = {im_bg / M - M * im_abs, im_bg / M - im_ags, M * im_abs};
    for (auto& row : r)
        for (auto& v : row) v *= pre;
    return r;
}

LambdaReport lambda_matrix(const QuadCoeffs& qc, const Scenario& s) {
    LambdaReport rep;
    rep.t = qc.t;
    rep.coefficient_matrix = invariant_matrix(qc, s);
    if (!(std::abs(determinant(rep.coefficient_matrix)) >= 1e-12))
        throw NumericalError("lambda_matrix: invariant coefficient matrix is singular");
    rep.lambda = inverse(rep.coefficient_matrix);
    rep.condition_number = norm_inf(rep.coefficient_matrix) * norm_inf(rep.lambda);
    rep.lambda_closed = lambda_closed_form(qc, s);
    rep.max_abs_diff = max_abs_diff(rep.lambda, rep.lambda_closed);
    return rep;
}

Mat3 transport_moments(const Mat3& sigma_I, const Mat3& lambda) {
    return multiply(multiply(lambda, sigma_I), transpose(lambda));
}

// --------------------------------------------------------- ladder matrices

double OperatorMatrix::operator()(std::size_t row, std::size_t col) const {
    if (row >= dim || col >= dim) throw std::out_of_range("OperatorMatrix index");
    if (static_cast<long>(row) - static_cast<long>(col) != offset) return 0.0;
    return band[col];
}

std::vector<cplx> OperatorMatrix::apply(const std::vector<cplx>& psi) const {
    std::vector<cplx> out(dim, cplx(0.0, 0.0));
    const std::size_t n = std::min(dim, psi.size());
    for (std::size_t j = 0; j < n; ++j) {
        const long row = static_cast<long>(j) + offset;
        if (row < 0 || row >= static_cast<long>(dim)) continue;
        out[static_cast<std::size_t>(row)] += band[j] * psi[j];
    }
    return out;
}

LadderMatrices ladder_matrices(double kappa, std::size_t dim) {
    if (dim < 2) throw DomainError("ladder_matrices: dim must be at least 2");
    LadderMatrices lm;
    lm.lower = {kappa, dim, -1, std::vector<double>(dim, 0.0)};
    lm.raise = {kappa, dim, +1, std::vector<double>(dim, 0.0)};
    lm.diag = {kappa, dim, 0, std::vector<double>(dim, 0.0)};
    for (std::size_t j = 0; j < dim; ++j) {
        const double n = static_cast<double>(j);
        lm.lower.band[j] = std::sqrt(n * (2.0 * kappa + n - 1.0));
        lm.raise.band[j] = j + 1 < dim ? std::sqrt((n + 1.0) * (2.0 * kappa + n)) : 0.0;
        lm.diag.band[j] = kappa + n;
    }
    return lm;
}

std::vector<cplx> apply_combination(const LadderMatrices& lm, cplx u, cplx v, cplx w, const std::vector<cplx>& psi) {
    const auto a = lm.lower.apply(psi);
    const auto b = lm.raise.apply(psi);
    const auto c = lm.diag.apply(psi);
    std::vector<cplx> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = u * a[i] + v * b[i] + w * c[i];
    return out;
}

std::array<std::vector<cplx>, 3> apply_cartesian(const LadderMatrices& lm, const std::vector<cplx>& psi) {
    const auto a = lm.lower.apply(psi);
    const auto b = lm.raise.apply(psi);
    std::array<std::vector<cplx>, 3> out;
    out[0].resize(a.size());
    out[1].resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[0][i] = 0.5 * (b[i] + a[i]);
        out[1][i] = cplx(0.0, -0.5) * (b[i] - a[i]);
    }
    out[2] = lm.diag.apply(psi);
    return out;
}

}  // namespace gso
