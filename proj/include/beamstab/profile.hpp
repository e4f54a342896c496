#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace beamstab {

enum class ProfileKind { zero, constant, polynomial, exponential, table };

std::string_view to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(std::string_view name);

/// A scalar function of one real variable (space or time).
///
/// Used for the coefficient fields rho, mu and r, for the initial
/// displacement and velocity, and for the boundary forcing signals.
/// Which kinds are admissible depends on the slot; BeamProblem validation
/// enforces that.
///
///   zero         f = 0
///   constant     f = c                      data = [c]
///   polynomial   f = sum c_k x^k            data = [c_0, c_1, ...]
///   exponential  f = a exp(b x)             data = [a, b]
///   table        piecewise linear through (x_i, y_i), x strictly increasing
class Profile {
public:
    Profile() = default;

    static Profile zero();
    static Profile constant(double value);
    static Profile polynomial(std::vector<double> coefficients);
    static Profile exponential(double amplitude, double rate);
    static Profile table(std::vector<double> abscissae, std::vector<double> values);

    ProfileKind kind() const { return kind_; }

    /// Polynomial coefficients (ascending), [a, b] for exponential, [c] for constant.
    std::span<const double> parameters() const { return params_; }
    std::span<const double> abscissae() const { return xs_; }
    std::span<const double> values() const { return ys_; }

    double operator()(double x) const { return value(x); }
    double value(double x) const;

    /// Derivative of the given order. Tables are piecewise linear: the first
    /// derivative is the slope of the segment containing x (right segment at
    /// interior breakpoints), higher derivatives vanish.
    double derivative(double x, int order = 1) const;

    /// Exact infimum and supremum over [a, b].
    std::pair<double, double> bounds(double a, double b) const;

    /// Polynomial degree per smooth piece; -1 for the exponential kind.
    int degree() const;

    /// Interior points where the function is only piecewise smooth.
    std::vector<double> breakpoints(double a, double b) const;

    bool is_zero() const;
    bool finite() const;

    /// Domain covered by the data; the whole line except for tables.
    std::pair<double, double> support() const;

    Profile scaled(double factor) const;

    bool operator==(const Profile&) const = default;

private:
    ProfileKind kind_ = ProfileKind::zero;
    std::vector<double> params_;
    std::vector<double> xs_;
    std::vector<double> ys_;
};

namespace poly {

double evaluate(std::span<const double> coefficients, double x);
std::vector<double> derivative(std::span<const double> coefficients);

/// All real roots of the polynomial inside [a, b], sorted. The polynomial is
/// split into monotone pieces at the roots of its derivative and each sign
/// change is isolated by bisection to full double precision.
std::vector<double> roots_in(std::span<const double> coefficients, double a, double b);

}  // namespace poly

}  // namespace beamstab
