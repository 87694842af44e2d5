#include "igi/numerics.hpp"

#include <cmath>

namespace igi {

double bisect_with(const std::function<double(double)>& f, double lo, double hi,
                   double flo, double fhi, double xtol, int max_iter) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericalError("bisect: no sign change on bracket");
    for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter) {
    return bisect_with(f, lo, hi, f(lo), f(hi), xtol, max_iter);
}

std::vector<double> chebyshev_nodes(double a, double b, int n) {
    std::vector<double> x(n);
    for (int k = 0; k < n; ++k) {
        const double u = -std::cos(M_PI * k / (n - 1));  // [-1,1] ascending
        x[k] = a + (b - a) * (u + 1.0) / 2.0;
    }
    x.front() = a;
    x.back() = b;
    return x;
}

double pairwise_sum(std::span<const double> v) {
    const size_t n = v.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const size_t half = n / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

void lu_solve_inplace(std::vector<double>& A, std::vector<double>& b, int n) {
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(A[static_cast<size_t>(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(A[static_cast<size_t>(i) * n + k]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) throw NumericalError("lu_solve: singular matrix");
        if (piv != k) {
            for (int j = k; j < n; ++j)
                std::swap(A[static_cast<size_t>(k) * n + j], A[static_cast<size_t>(piv) * n + j]);
            std::swap(b[k], b[piv]);
        }
        const double diag = A[static_cast<size_t>(k) * n + k];
        for (int i = k + 1; i < n; ++i) {
            const double w = A[static_cast<size_t>(i) * n + k] / diag;
            if (w == 0.0) continue;
            for (int j = k + 1; j < n; ++j)
                A[static_cast<size_t>(i) * n + j] -= w * A[static_cast<size_t>(k) * n + j];
            b[i] -= w * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A[static_cast<size_t>(i) * n + j] * b[j];
        b[i] = s / A[static_cast<size_t>(i) * n + i];
    }
}

}  // namespace igi
