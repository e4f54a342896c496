#pragma once

#include <cstddef>
#include <vector>

namespace beamstab {

/// Gauss-Legendre rule on [0, 1]; weights sum to 1.
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
};

/// n-point rule, exact for polynomials of degree 2n - 1. Rules are cached.
const QuadratureRule& gauss_legendre(std::size_t n);

}  // namespace beamstab
