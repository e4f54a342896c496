#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace beamstab {

/// Symmetric matrix with half-bandwidth b. Only the lower band is stored, so
/// the matrix is symmetric by construction: entry (i, j) and (j, i) are the
/// same storage cell. Entries with |i - j| > b are zero.
class BandedSymmetricMatrix {
public:
    BandedSymmetricMatrix() = default;
    BandedSymmetricMatrix(std::size_t dimension, std::size_t half_bandwidth);

    std::size_t dimension() const { return n_; }
    std::size_t half_bandwidth() const { return b_; }

    double operator()(std::size_t i, std::size_t j) const;
    /// Adds to the symmetric pair (i, j) / (j, i). Throws if outside the band.
    void add(std::size_t i, std::size_t j, double value);

    std::vector<double> multiply(std::span<const double> x) const;
    double quadratic_form(std::span<const double> x) const;

    /// alpha * this + beta * other, same dimension and bandwidth.
    BandedSymmetricMatrix combined(double alpha, const BandedSymmetricMatrix& other, double beta) const;

    std::vector<std::vector<double>> dense() const;

    /// MatrixMarket "coordinate real symmetric", lower triangle.
    void write_matrix_market(std::ostream& out) const;

    bool operator==(const BandedSymmetricMatrix&) const = default;

private:
    std::size_t index(std::size_t i, std::size_t j) const { return j * (b_ + 1) + (i - j); }

    std::size_t n_ = 0;
    std::size_t b_ = 0;
    std::vector<double> band_;  // column-major lower band
};

/// Cholesky factor L L^T of a banded SPD matrix; L keeps the bandwidth.
class BandedCholesky {
public:
    /// Throws NumericalError if the matrix is not positive definite.
    explicit BandedCholesky(const BandedSymmetricMatrix& matrix);

    std::vector<double> solve(std::span<const double> rhs) const;
    void solve_in_place(std::span<double> x) const;

    std::size_t dimension() const { return n_; }

private:
    std::size_t n_;
    std::size_t b_;
    std::vector<double> factor_;  // same layout as BandedSymmetricMatrix
};

}  // namespace beamstab
