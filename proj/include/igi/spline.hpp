#pragma once

#include <optional>
#include <span>
#include <vector>

namespace igi {

// C2 cubic spline interpolation. End conditions: not-a-knot by default; the
// left end can instead clamp the first derivative (used at the junction of a
// value function's flat region, where the slope is known).
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::span<const double> x, std::span<const double> y,
                std::optional<double> left_slope = std::nullopt);

    double value(double q) const;
    double deriv(double q) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    friend class SplineBasis;
    int segment(double q) const;

    std::vector<double> x_, y_, sigma_;  // sigma = second derivatives at nodes
};

// Factorized interpolation operator for a fixed grid. Exposes the spline value
// at a query point as a linear functional of the nodal data, which is what the
// policy-evaluation linear system needs.
class SplineBasis {
public:
    SplineBasis() = default;
    explicit SplineBasis(std::span<const double> x,
                         std::optional<double> left_slope = std::nullopt);

    int size() const { return n_; }

    // w[j] such that spline(x, y).value(q) == sum_j w[j] * y[j] + affine_term(q).
    // Accumulates scale * w into out (out must have size n).
    void accumulate_weight_row(double q, double scale, std::span<double> out) const;

    // Data-independent contribution of a nonzero clamped slope.
    double affine_term(double q) const;

private:
    int n_ = 0;
    std::vector<double> x_;
    std::vector<double> dsigma_;      // n*n dense: d sigma_i / d y_j, row-major
    std::vector<double> sigma_part_;  // particular solution for the clamped slope
};

// Second-derivative vector of the spline (shared implementation).
std::vector<double> spline_second_derivatives(std::span<const double> x,
                                              std::span<const double> y,
                                              std::optional<double> left_slope = std::nullopt);

}  // namespace igi
