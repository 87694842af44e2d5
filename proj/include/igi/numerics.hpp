#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "igi/errors.hpp"

namespace igi {

// Bisection for f(x) = 0 on [lo, hi]. Requires a sign change; returns the
// midpoint of the final bracket. xtol is an absolute tolerance on x.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 1e-14, int max_iter = 200);

// Same, but f(lo) and f(hi) are already known (saves two evaluations).
double bisect_with(const std::function<double(double)>& f, double lo, double hi,
                   double flo, double fhi, double xtol = 1e-14, int max_iter = 200);

// n Chebyshev (Gauss-Lobatto) points on [a, b], ascending, endpoints included,
// interior points strictly inside.
std::vector<double> chebyshev_nodes(double a, double b, int n);

// Numerically stable sum with a deterministic reduction order.
double pairwise_sum(std::span<const double> v);

inline bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// Dense linear solve A x = b with partial pivoting; A is n*n row-major and is
// overwritten. Throws NumericalError on a singular pivot.
void lu_solve_inplace(std::vector<double>& A, std::vector<double>& b, int n);

}  // namespace igi
