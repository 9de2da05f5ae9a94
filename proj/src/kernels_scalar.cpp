#include "gmink/kernels.hpp"

#include <cmath>

namespace gmink::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

double sup_abs_diff(const double* a, const double* b, std::size_t n)
{
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

double max_abs(const double* a, std::size_t n)
{
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = std::fabs(a[i]);
        if (d > m) m = d;
    }
    return m;
}

std::size_t best_ratio_2d(const double* xs, const double* ys, const double* h,
                          std::size_t n, double ux, double uy)
{
    double best = -HUGE_VAL;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = (ux * xs[i] + uy * ys[i]) / h[i];
        if (r > best) { best = r; arg = i; }
    }
    return arg;
}

std::size_t best_ratio_3d(const double* xs, const double* ys, const double* zs,
                          const double* h, std::size_t n,
                          double ux, double uy, double uz)
{
    double best = -HUGE_VAL;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = ((ux * xs[i] + uy * ys[i]) + uz * zs[i]) / h[i];
        if (r > best) { best = r; arg = i; }
    }
    return arg;
}

bool contains_point_2d(const double* xs, const double* ys, const double* h,
                       std::size_t n, double px, double py)
{
    for (std::size_t i = 0; i < n; ++i)
        if (px * xs[i] + py * ys[i] > h[i]) return false;
    return true;
}

bool contains_point_3d(const double* xs, const double* ys, const double* zs,
                       const double* h, std::size_t n,
                       double px, double py, double pz)
{
    for (std::size_t i = 0; i < n; ++i)
        if ((px * xs[i] + py * ys[i]) + pz * zs[i] > h[i]) return false;
    return true;
}

}  // namespace gmink::kernels::scalar
