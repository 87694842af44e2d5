#include "igi/spline.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "igi/errors.hpp"

namespace igi {

namespace {

// Solve for second derivatives. Right end: not-a-knot (third-derivative
// continuity at x_{n-2}, eliminated analytically). Left end: not-a-knot, or a
// clamped first derivative.
void solve_sigma(std::span<const double> x, std::span<const double> y,
                 std::optional<double> left_slope, std::vector<double>& sigma) {
    const int n = static_cast<int>(x.size());
    if (n < 4) throw InvalidParameters("cubic spline requires at least 4 nodes");
    std::vector<double> h(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        if (h[i] <= 0.0) throw InvalidParameters("spline nodes must be strictly ascending");
    }
    auto interior = [&](int i, double& a, double& b, double& c, double& d) {
        a = h[i - 1];
        b = 2.0 * (h[i - 1] + h[i]);
        c = h[i];
        d = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
    };

    const bool clamped = left_slope.has_value();
    // unknowns sigma_lo .. sigma_{n-2}; sigma_{n-1} eliminated via not-a-knot
    const int lo = clamped ? 0 : 1;
    const int m = (n - 1) - lo;
    std::vector<double> a(m, 0.0), b(m, 0.0), c(m, 0.0), d(m, 0.0);
    for (int i = std::max(1, lo); i <= n - 2; ++i)
        interior(i, a[i - lo], b[i - lo], c[i - lo], d[i - lo]);
    if (clamped) {
        b[0] = 2.0;
        c[0] = 1.0;
        d[0] = 6.0 * ((y[1] - y[0]) / h[0] - *left_slope) / h[0];
        a[0] = 0.0;
    } else {
        // fold sigma_0 = (1 + h0/h1) sigma_1 - (h0/h1) sigma_2 into the first row
        const double r = h[0] / h[1];
        b[0] += a[0] * (1.0 + r);
        c[0] -= a[0] * r;
        a[0] = 0.0;
    }
    {
        // fold sigma_{n-1} = (1 + h_{n-2}/h_{n-3}) sigma_{n-2} - (...) sigma_{n-3}
        const double s = h[n - 2] / h[n - 3];
        b[m - 1] += c[m - 1] * (1.0 + s);
        a[m - 1] -= c[m - 1] * s;
        c[m - 1] = 0.0;
    }
    for (int k = 1; k < m; ++k) {
        const double w = a[k] / b[k - 1];
        b[k] -= w * c[k - 1];
        d[k] -= w * d[k - 1];
    }
    sigma.assign(n, 0.0);
    sigma[n - 2] = d[m - 1] / b[m - 1];
    for (int k = m - 2; k >= 0; --k)
        sigma[k + lo] = (d[k] - c[k] * sigma[k + lo + 1]) / b[k];
    if (!clamped)
        sigma[0] = (1.0 + h[0] / h[1]) * sigma[1] - (h[0] / h[1]) * sigma[2];
    sigma[n - 1] = (1.0 + h[n - 2] / h[n - 3]) * sigma[n - 2] -
                   (h[n - 2] / h[n - 3]) * sigma[n - 3];
}

}  // namespace

std::vector<double> spline_second_derivatives(std::span<const double> x,
                                              std::span<const double> y,
                                              std::optional<double> left_slope) {
    std::vector<double> sigma;
    solve_sigma(x, y, left_slope, sigma);
    return sigma;
}

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y,
                         std::optional<double> left_slope)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    solve_sigma(x, y, left_slope, sigma_);
}

int CubicSpline::segment(double q) const {
    const int n = static_cast<int>(x_.size());
    auto it = std::upper_bound(x_.begin(), x_.end(), q);
    int i = static_cast<int>(it - x_.begin()) - 1;
    return std::clamp(i, 0, n - 2);
}

double CubicSpline::value(double q) const {
    const int i = segment(q);
    const double h = x_[i + 1] - x_[i];
    const double t = q - x_[i];
    const double slope = (y_[i + 1] - y_[i]) / h - h * (2.0 * sigma_[i] + sigma_[i + 1]) / 6.0;
    return y_[i] + t * (slope + t * (sigma_[i] / 2.0 + t * (sigma_[i + 1] - sigma_[i]) / (6.0 * h)));
}

double CubicSpline::deriv(double q) const {
    const int i = segment(q);
    const double h = x_[i + 1] - x_[i];
    const double t = q - x_[i];
    const double slope = (y_[i + 1] - y_[i]) / h - h * (2.0 * sigma_[i] + sigma_[i + 1]) / 6.0;
    return slope + t * sigma_[i] + t * t * (sigma_[i + 1] - sigma_[i]) / (2.0 * h);
}

SplineBasis::SplineBasis(std::span<const double> x, std::optional<double> left_slope)
    : n_(static_cast<int>(x.size())), x_(x.begin(), x.end()) {
    dsigma_.assign(static_cast<size_t>(n_) * n_, 0.0);
    std::vector<double> e(n_, 0.0), sigma;
    const std::optional<double> homog = left_slope ? std::optional<double>(0.0) : std::nullopt;
    for (int j = 0; j < n_; ++j) {
        e[j] = 1.0;
        solve_sigma(x_, e, homog, sigma);
        for (int i = 0; i < n_; ++i) dsigma_[static_cast<size_t>(i) * n_ + j] = sigma[i];
        e[j] = 0.0;
    }
    if (left_slope && *left_slope != 0.0) {
        solve_sigma(x_, e, left_slope, sigma_part_);  // e is all zeros here
    }
}

double SplineBasis::affine_term(double q) const {
    if (sigma_part_.empty()) return 0.0;
    auto it = std::upper_bound(x_.begin(), x_.end(), q);
    int i = std::clamp(static_cast<int>(it - x_.begin()) - 1, 0, n_ - 2);
    const double h = x_[i + 1] - x_[i];
    const double t = q - x_[i];
    const double C = t * t / 2.0 - t * h / 3.0 - t * t * t / (6.0 * h);
    const double D = t * t * t / (6.0 * h) - t * h / 6.0;
    return C * sigma_part_[i] + D * sigma_part_[i + 1];
}

void SplineBasis::accumulate_weight_row(double q, double scale, std::span<double> out) const {
    assert(static_cast<int>(out.size()) == n_);
    auto it = std::upper_bound(x_.begin(), x_.end(), q);
    int i = std::clamp(static_cast<int>(it - x_.begin()) - 1, 0, n_ - 2);
    const double h = x_[i + 1] - x_[i];
    const double t = q - x_[i];
    // value = A*y_i + B*y_{i+1} + C*sigma_i + D*sigma_{i+1}
    const double A = 1.0 - t / h;
    const double B = t / h;
    const double C = t * t / 2.0 - t * h / 3.0 - t * t * t / (6.0 * h);
    const double D = t * t * t / (6.0 * h) - t * h / 6.0;
    out[i] += scale * A;
    out[i + 1] += scale * B;
    const double* row_i = &dsigma_[static_cast<size_t>(i) * n_];
    const double* row_j = &dsigma_[static_cast<size_t>(i + 1) * n_];
    for (int k = 0; k < n_; ++k) out[k] += scale * (C * row_i[k] + D * row_j[k]);
}

}  // namespace igi
