#include <doctest.h>

#include <cmath>
#include <vector>

#include "igi/numerics.hpp"
#include "igi/spline.hpp"

using namespace igi;

TEST_CASE("bisection finds simple roots") {
    auto f = [](double x) { return x * x - 2.0; };
    CHECK(bisect(f, 0.0, 2.0, 1e-14) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(bisect(f, 2.0, 3.0), NumericalError);
}

TEST_CASE("chebyshev nodes include endpoints and are strictly ascending") {
    auto x = chebyshev_nodes(-1.5, -0.5, 51);
    CHECK(x.front() == -1.5);
    CHECK(x.back() == -0.5);
    for (size_t k = 1; k < x.size(); ++k) CHECK(x[k] > x[k - 1]);
}

TEST_CASE("pairwise sum is deterministic and accurate") {
    std::vector<double> v(1000, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("lu solve handles a small well-conditioned system") {
    std::vector<double> A = {4, 1, 0, 1, 3, 1, 0, 1, 2};
    std::vector<double> b = {1, 2, 3};
    lu_solve_inplace(A, b, 3);
    // residual check against the original matrix
    std::vector<double> A0 = {4, 1, 0, 1, 3, 1, 0, 1, 2};
    for (int i = 0; i < 3; ++i) {
        double r = 0.0;
        for (int j = 0; j < 3; ++j) r += A0[i * 3 + j] * b[j];
        CHECK(r == doctest::Approx(i + 1.0).epsilon(1e-13));
    }
}

TEST_CASE("not-a-knot spline reproduces cubics exactly") {
    auto poly = [](double x) { return 2.0 + x * (0.5 + x * (-1.25 + 0.3 * x)); };
    auto dpoly = [](double x) { return 0.5 + x * (-2.5 + 0.9 * x); };
    auto x = chebyshev_nodes(0.0, 3.0, 12);
    std::vector<double> y(x.size());
    for (size_t k = 0; k < x.size(); ++k) y[k] = poly(x[k]);
    CubicSpline s(x, y);
    for (double q : {0.05, 0.7, 1.33, 2.9}) {
        CHECK(s.value(q) == doctest::Approx(poly(q)).epsilon(1e-12));
        CHECK(s.deriv(q) == doctest::Approx(dpoly(q)).epsilon(1e-10));
    }
}

TEST_CASE("spline basis weight rows reproduce interpolation as a linear map") {
    auto x = chebyshev_nodes(-2.0, -1.0, 9);
    std::vector<double> y(x.size());
    for (size_t k = 0; k < x.size(); ++k) y[k] = std::sin(3.0 * x[k]);
    CubicSpline s(x, y);
    SplineBasis basis(x);
    for (double q : {-1.97, -1.5, -1.21, -1.02}) {
        std::vector<double> w(x.size(), 0.0);
        basis.accumulate_weight_row(q, 1.0, w);
        double acc = 0.0, wsum = 0.0;
        for (size_t k = 0; k < x.size(); ++k) {
            acc += w[k] * y[k];
            wsum += w[k];
        }
        CHECK(acc == doctest::Approx(s.value(q)).epsilon(1e-12));
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));  // constants reproduced
    }
}
