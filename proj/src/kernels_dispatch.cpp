#include "gmink/kernels.hpp"

#include <atomic>

namespace gmink::kernels {

namespace {

std::atomic<Backend> g_choice{Backend::automatic};

inline bool use_avx2()
{
    Backend b = g_choice.load(std::memory_order_relaxed);
    if (b == Backend::scalar) return false;
    if (b == Backend::avx2) return true;
    static const bool detected = avx2::available();
    return detected;
}

}  // namespace

void set_backend(Backend b) { g_choice.store(b, std::memory_order_relaxed); }

Backend active_backend()
{
    return use_avx2() ? Backend::avx2 : Backend::scalar;
}

bool avx2_supported() { return avx2::available(); }

double dot(const double* a, const double* b, std::size_t n)
{
    return use_avx2() ? avx2::dot(a, b, n) : scalar::dot(a, b, n);
}

double sup_abs_diff(const double* a, const double* b, std::size_t n)
{
    return use_avx2() ? avx2::sup_abs_diff(a, b, n) : scalar::sup_abs_diff(a, b, n);
}

double max_abs(const double* a, std::size_t n)
{
    return use_avx2() ? avx2::max_abs(a, n) : scalar::max_abs(a, n);
}

std::size_t best_ratio_2d(const double* xs, const double* ys, const double* h,
                          std::size_t n, double ux, double uy)
{
    return use_avx2() ? avx2::best_ratio_2d(xs, ys, h, n, ux, uy)
                      : scalar::best_ratio_2d(xs, ys, h, n, ux, uy);
}

std::size_t best_ratio_3d(const double* xs, const double* ys, const double* zs,
                          const double* h, std::size_t n,
                          double ux, double uy, double uz)
{
    return use_avx2() ? avx2::best_ratio_3d(xs, ys, zs, h, n, ux, uy, uz)
                      : scalar::best_ratio_3d(xs, ys, zs, h, n, ux, uy, uz);
}

bool contains_point_2d(const double* xs, const double* ys, const double* h,
                       std::size_t n, double px, double py)
{
    return use_avx2() ? avx2::contains_point_2d(xs, ys, h, n, px, py)
                      : scalar::contains_point_2d(xs, ys, h, n, px, py);
}

bool contains_point_3d(const double* xs, const double* ys, const double* zs,
                       const double* h, std::size_t n,
                       double px, double py, double pz)
{
    return use_avx2() ? avx2::contains_point_3d(xs, ys, zs, h, n, px, py, pz)
                      : scalar::contains_point_3d(xs, ys, zs, h, n, px, py, pz);
}

}  // namespace gmink::kernels
