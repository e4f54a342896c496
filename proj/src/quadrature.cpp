#include "beamstab/quadrature.hpp"

#include "beamstab/errors.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace beamstab {

namespace {

QuadratureRule build_rule(std::size_t n) {
    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n from the Chebyshev-like initial guess, on [-1, 1].
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (std::size_t k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                const auto kd = static_cast<double>(k);
                p0 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p2) / kd;
            }
            dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        // map to [0, 1]
        rule.points[i] = 0.5 * (1.0 - z);
        rule.points[n - 1 - i] = 0.5 * (1.0 + z);
        rule.weights[i] = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(std::size_t n) {
    if (n == 0) throw DomainError("quadrature rule needs at least one point");
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<QuadratureRule>> cache;
    const std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<QuadratureRule>(build_rule(n));
    return *slot;
}

}  // namespace beamstab
