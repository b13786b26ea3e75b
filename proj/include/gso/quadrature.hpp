#pragma once

#include <cstddef>
#include <vector>

namespace gso {

/// Gauss–Legendre nodes and weights on [a, b].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

/// `panels` equal sub-intervals of [a, b], each with an n-point rule.
QuadratureRule composite_gauss_legendre(std::size_t panels, std::size_t n, double a, double b);

/// Half-line rule for integrands behaving like x^p near the origin:
/// Gauss–Legendre in u on [0,1] with x = x_max·u², weights include dx/du.
QuadratureRule mapped_half_line(std::size_t n, double x_max);

/// Composite Simpson rule on uniformly spaced samples. An even number of
/// intervals is integrated exactly by Simpson; an odd count finishes with
/// a 3/8 panel.
double simpson(const std::vector<double>& f, double h);

}  // namespace gso
