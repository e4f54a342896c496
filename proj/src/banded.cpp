#include "beamstab/banded.hpp"

#include "beamstab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace beamstab {

BandedSymmetricMatrix::BandedSymmetricMatrix(std::size_t dimension, std::size_t half_bandwidth)
    : n_(dimension), b_(half_bandwidth), band_(dimension * (half_bandwidth + 1), 0.0) {}

double BandedSymmetricMatrix::operator()(std::size_t i, std::size_t j) const {
    if (i < j) std::swap(i, j);
    if (i >= n_ || i - j > b_) return 0.0;
    return band_[index(i, j)];
}

void BandedSymmetricMatrix::add(std::size_t i, std::size_t j, double value) {
    if (i < j) std::swap(i, j);
    if (i >= n_ || i - j > b_) {
        throw DomainError("entry (" + std::to_string(i) + ", " + std::to_string(j) + ") outside the band");
    }
    band_[index(i, j)] += value;
}

std::vector<double> BandedSymmetricMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        y[j] += band_[index(j, j)] * x[j];
        const std::size_t last = std::min(n_ - 1, j + b_);
        for (std::size_t i = j + 1; i <= last; ++i) {
            const double a = band_[index(i, j)];
            y[i] += a * x[j];
            y[j] += a * x[i];
        }
    }
    return y;
}

double BandedSymmetricMatrix::quadratic_form(std::span<const double> x) const {
    const std::vector<double> y = multiply(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) acc += x[i] * y[i];
    return acc;
}

BandedSymmetricMatrix BandedSymmetricMatrix::combined(double alpha, const BandedSymmetricMatrix& other,
                                                      double beta) const {
    if (other.n_ != n_ || other.b_ != b_) throw DomainError("matrix shapes differ");
    BandedSymmetricMatrix out(n_, b_);
    for (std::size_t k = 0; k < band_.size(); ++k) out.band_[k] = alpha * band_[k] + beta * other.band_[k];
    return out;
}

std::vector<std::vector<double>> BandedSymmetricMatrix::dense() const {
    std::vector<std::vector<double>> a(n_, std::vector<double>(n_, 0.0));
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) a[i][j] = (*this)(i, j);
    }
    return a;
}

void BandedSymmetricMatrix::write_matrix_market(std::ostream& out) const {
    std::size_t nnz = 0;
    for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t i = j; i <= std::min(n_ - 1, j + b_); ++i) {
            if (band_[index(i, j)] != 0.0) ++nnz;
        }
    }
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << n_ << ' ' << n_ << ' ' << nnz << '\n';
    out << std::setprecision(17);
    for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t i = j; i <= std::min(n_ - 1, j + b_); ++i) {
            const double a = band_[index(i, j)];
            if (a != 0.0) out << i + 1 << ' ' << j + 1 << ' ' << a << '\n';
        }
    }
}

BandedCholesky::BandedCholesky(const BandedSymmetricMatrix& a)
    : n_(a.dimension()), b_(a.half_bandwidth()), factor_(n_ * (b_ + 1), 0.0) {
    const auto at = [this](std::size_t i, std::size_t j) -> double& { return factor_[j * (b_ + 1) + (i - j)]; };
    for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t first = j > b_ ? j - b_ : 0;
        double d = a(j, j);
        for (std::size_t k = first; k < j; ++k) d -= at(j, k) * at(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw NumericalError("matrix is not positive definite (pivot " + std::to_string(j) + ")");
        }
        const double pivot = std::sqrt(d);
        at(j, j) = pivot;
        const std::size_t last = std::min(n_ - 1, j + b_);
        for (std::size_t i = j + 1; i <= last; ++i) {
            const std::size_t start = i > b_ ? i - b_ : 0;
            double s = a(i, j);
            for (std::size_t k = start; k < j; ++k) s -= at(i, k) * at(j, k);
            at(i, j) = s / pivot;
        }
    }
}

void BandedCholesky::solve_in_place(std::span<double> x) const {
    if (x.size() != n_) throw DomainError("right-hand side has wrong length");
    const auto at = [this](std::size_t i, std::size_t j) { return factor_[j * (b_ + 1) + (i - j)]; };
    // L y = b
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t first = i > b_ ? i - b_ : 0;
        double s = x[i];
        for (std::size_t k = first; k < i; ++k) s -= at(i, k) * x[k];
        x[i] = s / at(i, i);
    }
    // L^T x = y
    for (std::size_t ii = n_; ii-- > 0;) {
        const std::size_t last = std::min(n_ - 1, ii + b_);
        double s = x[ii];
        for (std::size_t k = ii + 1; k <= last; ++k) s -= at(k, ii) * x[k];
        x[ii] = s / at(ii, ii);
    }
}

std::vector<double> BandedCholesky::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_in_place(x);
    return x;
}

}  // namespace beamstab
