#include "beamstab/profile.hpp"

#include "beamstab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace beamstab {

std::string_view to_string(ProfileKind kind) {
    switch (kind) {
    case ProfileKind::zero: return "zero";
    case ProfileKind::constant: return "constant";
    case ProfileKind::polynomial: return "polynomial";
    case ProfileKind::exponential: return "exponential";
    case ProfileKind::table: return "table";
    }
    return "zero";
}

ProfileKind profile_kind_from_string(std::string_view name) {
    if (name == "zero") return ProfileKind::zero;
    if (name == "constant") return ProfileKind::constant;
    if (name == "polynomial") return ProfileKind::polynomial;
    if (name == "exponential") return ProfileKind::exponential;
    if (name == "table") return ProfileKind::table;
    throw StructuralError("unknown profile kind '" + std::string(name) + "'");
}

namespace poly {

double evaluate(std::span<const double> c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<double> derivative(std::span<const double> c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
    return d;
}

namespace {

std::size_t effective_size(std::span<const double> c) {
    std::size_t n = c.size();
    while (n > 0 && c[n - 1] == 0.0) --n;
    return n;
}

// Root of a function monotone on [lo, hi] with a sign change.
double bisect(std::span<const double> c, double lo, double hi) {
    double flo = evaluate(c, lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = evaluate(c, mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> roots_in(std::span<const double> c, double a, double b) {
    const std::size_t n = effective_size(c);
    std::vector<double> roots;
    if (n <= 1) return roots;  // constant: no isolated roots
    const auto coeffs = c.first(n);
    if (n == 2) {
        const double x = -coeffs[0] / coeffs[1];
        if (x >= a && x <= b) roots.push_back(x);
        return roots;
    }
    std::vector<double> cuts{a};
    for (double x : roots_in(derivative(coeffs), a, b)) {
        if (x > cuts.back()) cuts.push_back(x);
    }
    if (b > cuts.back()) cuts.push_back(b);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = cuts[i + 1];
        const double flo = evaluate(coeffs, lo);
        const double fhi = evaluate(coeffs, hi);
        double root = std::numeric_limits<double>::quiet_NaN();
        if (flo == 0.0) {
            root = lo;
        } else if (fhi == 0.0) {
            root = hi;
        } else if ((flo < 0.0) != (fhi < 0.0)) {
            root = bisect(coeffs, lo, hi);
        }
        if (!std::isnan(root) && (roots.empty() || root > roots.back())) roots.push_back(root);
    }
    return roots;
}

}  // namespace poly

Profile Profile::zero() { return Profile{}; }

Profile Profile::constant(double value) {
    Profile p;
    p.kind_ = ProfileKind::constant;
    p.params_ = {value};
    return p;
}

Profile Profile::polynomial(std::vector<double> coefficients) {
    if (coefficients.empty()) throw StructuralError("polynomial needs at least one coefficient");
    Profile p;
    p.kind_ = ProfileKind::polynomial;
    p.params_ = std::move(coefficients);
    return p;
}

Profile Profile::exponential(double amplitude, double rate) {
    Profile p;
    p.kind_ = ProfileKind::exponential;
    p.params_ = {amplitude, rate};
    return p;
}

Profile Profile::table(std::vector<double> abscissae, std::vector<double> values) {
    if (abscissae.size() != values.size()) throw StructuralError("table abscissae and values differ in length");
    if (abscissae.size() < 2) throw StructuralError("table needs at least two nodes");
    for (std::size_t i = 1; i < abscissae.size(); ++i) {
        if (!(abscissae[i] > abscissae[i - 1])) throw StructuralError("table abscissae must be strictly increasing");
    }
    Profile p;
    p.kind_ = ProfileKind::table;
    p.xs_ = std::move(abscissae);
    p.ys_ = std::move(values);
    return p;
}

namespace {

// Segment index i with xs[i] <= x < xs[i+1], clamped to the table.
std::size_t segment(std::span<const double> xs, double x) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto idx = static_cast<std::size_t>(std::distance(xs.begin(), it));
    if (idx == 0) return 0;
    return std::min(idx - 1, xs.size() - 2);
}

}  // namespace

double Profile::value(double x) const {
    switch (kind_) {
    case ProfileKind::zero: return 0.0;
    case ProfileKind::constant: return params_[0];
    case ProfileKind::polynomial: return poly::evaluate(params_, x);
    case ProfileKind::exponential: return params_[0] * std::exp(params_[1] * x);
    case ProfileKind::table: {
        const std::size_t i = segment(xs_, x);
        const double xc = std::clamp(x, xs_.front(), xs_.back());
        const double w = (xc - xs_[i]) / (xs_[i + 1] - xs_[i]);
        return (1.0 - w) * ys_[i] + w * ys_[i + 1];
    }
    }
    return 0.0;
}

double Profile::derivative(double x, int order) const {
    if (order <= 0) return value(x);
    switch (kind_) {
    case ProfileKind::zero:
    case ProfileKind::constant: return 0.0;
    case ProfileKind::polynomial: {
        std::vector<double> d(params_.begin(), params_.end());
        for (int k = 0; k < order; ++k) d = poly::derivative(d);
        return poly::evaluate(d, x);
    }
    case ProfileKind::exponential:
        return params_[0] * std::pow(params_[1], order) * std::exp(params_[1] * x);
    case ProfileKind::table: {
        if (order > 1) return 0.0;
        const std::size_t i = segment(xs_, x);
        return (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
    }
    }
    return 0.0;
}

std::pair<double, double> Profile::bounds(double a, double b) const {
    std::vector<double> candidates{value(a), value(b)};
    switch (kind_) {
    case ProfileKind::zero:
    case ProfileKind::constant:
    case ProfileKind::exponential: break;  // monotone or constant
    case ProfileKind::polynomial:
        for (double x : poly::roots_in(poly::derivative(params_), a, b)) candidates.push_back(value(x));
        break;
    case ProfileKind::table:
        for (std::size_t i = 0; i < xs_.size(); ++i) {
            if (xs_[i] > a && xs_[i] < b) candidates.push_back(ys_[i]);
        }
        break;
    }
    const auto [lo, hi] = std::minmax_element(candidates.begin(), candidates.end());
    return {*lo, *hi};
}

int Profile::degree() const {
    switch (kind_) {
    case ProfileKind::zero:
    case ProfileKind::constant: return 0;
    case ProfileKind::polynomial: {
        int d = static_cast<int>(params_.size()) - 1;
        while (d > 0 && params_[static_cast<std::size_t>(d)] == 0.0) --d;
        return d;
    }
    case ProfileKind::exponential: return -1;
    case ProfileKind::table: return 1;
    }
    return 0;
}

std::vector<double> Profile::breakpoints(double a, double b) const {
    std::vector<double> out;
    if (kind_ != ProfileKind::table) return out;
    for (double x : xs_) {
        if (x > a && x < b) out.push_back(x);
    }
    return out;
}

bool Profile::is_zero() const {
    const auto all_zero = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; });
    };
    switch (kind_) {
    case ProfileKind::zero: return true;
    case ProfileKind::constant:
    case ProfileKind::polynomial: return all_zero(params_);
    case ProfileKind::exponential: return params_[0] == 0.0;
    case ProfileKind::table: return all_zero(ys_);
    }
    return false;
}

bool Profile::finite() const {
    const auto ok = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double c) { return std::isfinite(c); });
    };
    return ok(params_) && ok(xs_) && ok(ys_);
}

std::pair<double, double> Profile::support() const {
    if (kind_ == ProfileKind::table) return {xs_.front(), xs_.back()};
    const double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf};
}

Profile Profile::scaled(double factor) const {
    Profile p = *this;
    switch (kind_) {
    case ProfileKind::zero: break;
    case ProfileKind::constant:
    case ProfileKind::polynomial:
        for (double& c : p.params_) c *= factor;
        break;
    case ProfileKind::exponential: p.params_[0] *= factor; break;
    case ProfileKind::table:
        for (double& y : p.ys_) y *= factor;
        break;
    }
    return p;
}

}  // namespace beamstab
