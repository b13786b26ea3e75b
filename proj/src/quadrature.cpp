#include "gso/quadrature.hpp"

#include "gso/error.hpp"

#include <cmath>
#include <numbers>

namespace gso {

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
    if (n == 0) throw DomainError("gauss_legendre: need at least one node");
    QuadratureRule q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = x; p0 = 1.0; }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.nodes[i] = mid - half * x;
        q.nodes[n - 1 - i] = mid + half * x;
        q.weights[i] = q.weights[n - 1 - i] = half * w;
    }
    return q;
}

QuadratureRule composite_gauss_legendre(std::size_t panels, std::size_t n, double a, double b) {
    if (panels == 0) throw DomainError("composite_gauss_legendre: need at least one panel");
    QuadratureRule q;
    const double w = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + w * static_cast<double>(p);
        const QuadratureRule r = gauss_legendre(n, lo, lo + w);
        q.nodes.insert(q.nodes.end(), r.nodes.begin(), r.nodes.end());
        q.weights.insert(q.weights.end(), r.weights.begin(), r.weights.end());
    }
    return q;
}

QuadratureRule mapped_half_line(std::size_t n, double x_max) {
    QuadratureRule g = gauss_legendre(n, 0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = g.nodes[i];
        g.nodes[i] = x_max * u * u;
        g.weights[i] *= 2.0 * x_max * u;
    }
    return g;
}

double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (f[0] + f[1]);
    std::size_t intervals = n - 1;
    double tail = 0.0;
    std::size_t end = n - 1;
    if (intervals % 2 == 1) {
        if (intervals == 1) return 0.5 * h * (f[0] + f[1]);
        // 3/8 rule over the final three intervals.
        tail = 3.0 * h / 8.0 * (f[n - 4] + 3.0 * f[n - 3] + 3.0 * f[n - 2] + f[n - 1]);
        end = n - 4;
    }
    if (end == 0) return tail;
    double s = f[0] + f[end];
    for (std::size_t i = 1; i < end; ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
    return s * h / 3.0 + tail;
}

}  // namespace gso
