#pragma once

// Independent reference implementations used only by the tests.

#include "beamstab/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

/// n-point Gauss-Legendre rule on [0, 1], built from the three-term
/// Legendre recurrence with Newton refinement.
inline std::pair<std::vector<double>, std::vector<double>> gauss_rule(int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
        w[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

/// Integral of f over [a, b] split at the given points, 50-point rule per piece.
template <class F>
double integrate(F&& f, double a, double b, std::vector<double> cuts = {}) {
    static const auto rule = gauss_rule(50);
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = std::max(a, cuts[k]);
        const double hi = std::min(b, cuts[k + 1]);
        if (!(hi > lo)) continue;
        for (std::size_t g = 0; g < rule.first.size(); ++g) {
            sum += (hi - lo) * rule.second[g] * f(lo + (hi - lo) * rule.first[g]);
        }
    }
    return sum;
}

/// The standard cubic Hermite polynomials on [0, 1] with derivatives in xi.
inline std::array<std::array<double, 3>, 4> hermite(double s) {
    return {{
        {1 - 3 * s * s + 2 * s * s * s, -6 * s + 6 * s * s, -6 + 12 * s},
        {s - 2 * s * s + s * s * s, 1 - 4 * s + 3 * s * s, -4 + 6 * s},
        {3 * s * s - 2 * s * s * s, 6 * s - 6 * s * s, 6 - 12 * s},
        {-s * s + s * s * s, -2 * s + 3 * s * s, -2 + 6 * s},
    }};
}

/// Global basis function of free DOF `dof` (node dof/2 + 1, slope if odd)
/// on a uniform mesh: value and x-derivatives at x.
inline std::array<double, 3> basis(std::size_t dof, double x, double h) {
    const std::size_t node = dof / 2 + 1;
    const bool slope = dof % 2 == 1;
    const double xn = static_cast<double>(node) * h;
    std::array<double, 3> out{0.0, 0.0, 0.0};
    std::size_t local;
    double x0;
    if (x >= xn - h && x <= xn) {
        local = slope ? 3 : 2;
        x0 = xn - h;
    } else if (x > xn && x <= xn + h) {
        local = slope ? 1 : 0;
        x0 = xn;
    } else {
        return out;
    }
    const auto H = hermite((x - x0) / h)[local];
    const double scale = slope ? h : 1.0;
    out = {scale * H[0], scale * H[1] / h, scale * H[2] / (h * h)};
    return out;
}

struct DenseSystem {
    std::vector<std::vector<double>> mass;
    std::vector<std::vector<double>> damping;
    std::vector<std::vector<double>> stiffness;
};

/// Double loop over all basis pairs with global quadrature, no element
/// bookkeeping and no banding.
inline DenseSystem dense_assembly(const beamstab::BeamProblem& p, std::size_t nodes) {
    const std::size_t n = 2 * (nodes - 1);
    const double h = p.length / static_cast<double>(nodes - 1);
    std::vector<double> cuts;
    for (std::size_t i = 0; i < nodes; ++i) cuts.push_back(static_cast<double>(i) * h);
    for (const beamstab::Profile* c : {&p.rho, &p.mu, &p.r}) {
        for (double b : c->breakpoints(0.0, p.length)) cuts.push_back(b);
    }
    DenseSystem d{std::vector(n, std::vector(n, 0.0)), std::vector(n, std::vector(n, 0.0)),
                  std::vector(n, std::vector(n, 0.0))};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            d.mass[i][j] = integrate(
                [&](double x) { return p.rho.value(x) * basis(i, x, h)[0] * basis(j, x, h)[0]; }, 0.0, p.length, cuts);
            d.damping[i][j] = integrate(
                [&](double x) { return p.mu.value(x) * basis(i, x, h)[0] * basis(j, x, h)[0]; }, 0.0, p.length, cuts);
            d.stiffness[i][j] = integrate(
                [&](double x) { return p.r.value(x) * basis(i, x, h)[2] * basis(j, x, h)[2]; }, 0.0, p.length, cuts);
        }
    }
    d.stiffness[n - 2][n - 2] += p.boundary.k_d;
    d.stiffness[n - 1][n - 1] += p.boundary.k_r;
    d.damping[n - 2][n - 2] += p.boundary.k_v;
    d.damping[n - 1][n - 1] += p.boundary.k_a;
    return d;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        }
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

inline double max_abs(const std::vector<std::vector<double>>& a) {
    double m = 0.0;
    for (const auto& row : a) {
        for (double v : row) m = std::max(m, std::abs(v));
    }
    return m;
}

using cplx = std::complex<double>;

// Roots of z^3 + a z^2 + b z + c by Durand-Kerner.
inline std::array<cplx, 3> cubic_roots(double a, double b, double c) {
    std::array<cplx, 3> z{cplx(0.4, 0.9), cplx(0.4, 0.9) * cplx(0.4, 0.9), cplx(0.4, 0.9) * cplx(0.4, 0.9) * cplx(0.4, 0.9)};
    const auto p = [&](cplx x) { return ((x + a) * x + b) * x + c; };
    for (int it = 0; it < 500; ++it) {
        for (int i = 0; i < 3; ++i) {
            cplx d = 1.0;
            for (int j = 0; j < 3; ++j) {
                if (j != i) d *= z[i] - z[j];
            }
            z[i] -= p(z[i]) / d;
        }
    }
    return z;
}

// Closed-form solution of the scalar three-level recurrence
//   A u_j = B1 u_{j-1} + B2 u_{j-2} + B3 u_{j-3}
// through its characteristic roots, matched to u_0, u_1, u_2.
inline double recurrence_closed_form(double A, double B1, double B2, double B3, std::array<double, 3> start, int j) {
    const auto z = cubic_roots(-B1 / A, -B2 / A, -B3 / A);
    // Vandermonde system sum_i c_i z_i^k = u_k, k = 0, 1, 2, by Cramer's rule
    const auto det3 = [](std::array<std::array<cplx, 3>, 3> m) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    std::array<std::array<cplx, 3>, 3> v;
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 3; ++i) v[k][i] = std::pow(z[i], k);
    }
    const cplx d = det3(v);
    cplx u = 0.0;
    for (int i = 0; i < 3; ++i) {
        auto m = v;
        for (int k = 0; k < 3; ++k) m[k][i] = start[k];
        u += det3(m) / d * std::pow(z[i], j);
    }
    return u.real();
}

}  // namespace oracle
