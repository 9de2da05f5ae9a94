#pragma once
#include <cstddef>

/// Data-parallel inner loops shared by the quadrature, radial-conversion and
/// Monte Carlo code paths.  Every kernel exists in a scalar reference version
/// and (on x86-64) an AVX2 version; the top-level entry points dispatch at
/// runtime.  The max/argmax/containment kernels are bit-identical across
/// backends; dot() differs only by summation order.
namespace gmink::kernels {

enum class Backend { automatic, scalar, avx2 };

/// Select the backend used by the dispatching entry points.  `automatic`
/// (the default) picks AVX2 when the CPU supports it.  Not thread-safe
/// against concurrent kernel calls; intended for startup/tests.
void set_backend(Backend b);
Backend active_backend();
bool avx2_supported();

/// Sum of a[i]*b[i].
double dot(const double* a, const double* b, std::size_t n);
/// max_i |a[i] - b[i]|.
double sup_abs_diff(const double* a, const double* b, std::size_t n);
/// max_i |a[i]|.
double max_abs(const double* a, std::size_t n);

/// Index maximizing (ux*xs[i] + uy*ys[i]) / h[i]; first index wins ties.
std::size_t best_ratio_2d(const double* xs, const double* ys, const double* h,
                          std::size_t n, double ux, double uy);
std::size_t best_ratio_3d(const double* xs, const double* ys, const double* zs,
                          const double* h, std::size_t n,
                          double ux, double uy, double uz);

/// True iff px*xs[i] + py*ys[i] <= h[i] for every i (point inside the
/// intersection of the sampled supporting half-planes).
bool contains_point_2d(const double* xs, const double* ys, const double* h,
                       std::size_t n, double px, double py);
bool contains_point_3d(const double* xs, const double* ys, const double* zs,
                       const double* h, std::size_t n,
                       double px, double py, double pz);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sup_abs_diff(const double* a, const double* b, std::size_t n);
double max_abs(const double* a, std::size_t n);
std::size_t best_ratio_2d(const double* xs, const double* ys, const double* h,
                          std::size_t n, double ux, double uy);
std::size_t best_ratio_3d(const double* xs, const double* ys, const double* zs,
                          const double* h, std::size_t n,
                          double ux, double uy, double uz);
bool contains_point_2d(const double* xs, const double* ys, const double* h,
                       std::size_t n, double px, double py);
bool contains_point_3d(const double* xs, const double* ys, const double* zs,
                       const double* h, std::size_t n,
                       double px, double py, double pz);
}  // namespace scalar

namespace avx2 {
bool available();  // false when the binary or CPU lacks AVX2
double dot(const double* a, const double* b, std::size_t n);
double sup_abs_diff(const double* a, const double* b, std::size_t n);
double max_abs(const double* a, std::size_t n);
std::size_t best_ratio_2d(const double* xs, const double* ys, const double* h,
                          std::size_t n, double ux, double uy);
std::size_t best_ratio_3d(const double* xs, const double* ys, const double* zs,
                          const double* h, std::size_t n,
                          double ux, double uy, double uz);
bool contains_point_2d(const double* xs, const double* ys, const double* h,
                       std::size_t n, double px, double py);
bool contains_point_3d(const double* xs, const double* ys, const double* zs,
                       const double* h, std::size_t n,
                       double px, double py, double pz);
}  // namespace avx2

}  // namespace gmink::kernels
