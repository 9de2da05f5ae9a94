#include "gmink/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#include <cmath>
#include <cstdint>
#endif

namespace gmink::kernels::avx2 {

#if defined(__AVX2__)

bool available()
{
    return __builtin_cpu_supports("avx2") != 0;
}

// Multiply/add sequences below deliberately avoid FMA so each lane computes
// exactly the same rounded expression as the scalar reference kernels.

double dot(const double* a, const double* b, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

namespace {

inline __m256d abs_pd(__m256d v)
{
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

inline double hmax_pd(__m256d v)
{
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    double m = lanes[0];
    if (lanes[1] > m) m = lanes[1];
    if (lanes[2] > m) m = lanes[2];
    if (lanes[3] > m) m = lanes[3];
    return m;
}

}  // namespace

double sup_abs_diff(const double* a, const double* b, std::size_t n)
{
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        best = _mm256_max_pd(best, d);
    }
    double m = hmax_pd(best);
    for (; i < n; ++i) {
        double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

double max_abs(const double* a, std::size_t n)
{
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        best = _mm256_max_pd(best, abs_pd(_mm256_loadu_pd(a + i)));
    double m = hmax_pd(best);
    for (; i < n; ++i) {
        double d = std::fabs(a[i]);
        if (d > m) m = d;
    }
    return m;
}

namespace {

// Reduce four (value, index) lane candidates plus a scalar tail to the
// scalar kernel's answer: strictly greater value wins, ties keep the
// smallest index.
inline std::size_t reduce_argmax(__m256d vals, __m256i idxs,
                                 const double* tail_num, std::size_t tail_begin,
                                 std::size_t n, const double* h,
                                 double ux, double uy, double uz,
                                 const double* xs, const double* ys, const double* zs)
{
    alignas(32) double v[4];
    alignas(32) std::int64_t ix[4];
    _mm256_store_pd(v, vals);
    _mm256_store_si256(reinterpret_cast<__m256i*>(ix), idxs);
    double best = v[0];
    std::int64_t arg = ix[0];
    for (int l = 1; l < 4; ++l) {
        if (v[l] > best || (v[l] == best && ix[l] < arg)) {
            best = v[l];
            arg = ix[l];
        }
    }
    (void)tail_num;
    for (std::size_t i = tail_begin; i < n; ++i) {
        double num = zs ? ((ux * xs[i] + uy * ys[i]) + uz * zs[i])
                        : (ux * xs[i] + uy * ys[i]);
        double r = num / h[i];
        if (r > best) { best = r; arg = static_cast<std::int64_t>(i); }
    }
    return static_cast<std::size_t>(arg);
}

}  // namespace

std::size_t best_ratio_2d(const double* xs, const double* ys, const double* h,
                          std::size_t n, double ux, double uy)
{
    if (n < 8) return scalar::best_ratio_2d(xs, ys, h, n, ux, uy);
    const __m256d vux = _mm256_set1_pd(ux);
    const __m256d vuy = _mm256_set1_pd(uy);
    __m256d best = _mm256_set1_pd(-HUGE_VAL);
    __m256i bidx = _mm256_setzero_si256();
    __m256i idx = _mm256_setr_epi64x(0, 1, 2, 3);
    const __m256i four = _mm256_set1_epi64x(4);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d num = _mm256_add_pd(_mm256_mul_pd(vux, _mm256_loadu_pd(xs + i)),
                                    _mm256_mul_pd(vuy, _mm256_loadu_pd(ys + i)));
        __m256d r = _mm256_div_pd(num, _mm256_loadu_pd(h + i));
        __m256d gt = _mm256_cmp_pd(r, best, _CMP_GT_OQ);
        best = _mm256_blendv_pd(best, r, gt);
        bidx = _mm256_castpd_si256(_mm256_blendv_pd(
            _mm256_castsi256_pd(bidx), _mm256_castsi256_pd(idx), gt));
        idx = _mm256_add_epi64(idx, four);
    }
    return reduce_argmax(best, bidx, nullptr, i, n, h, ux, uy, 0.0, xs, ys, nullptr);
}

std::size_t best_ratio_3d(const double* xs, const double* ys, const double* zs,
                          const double* h, std::size_t n,
                          double ux, double uy, double uz)
{
    if (n < 8) return scalar::best_ratio_3d(xs, ys, zs, h, n, ux, uy, uz);
    const __m256d vux = _mm256_set1_pd(ux);
    const __m256d vuy = _mm256_set1_pd(uy);
    const __m256d vuz = _mm256_set1_pd(uz);
    __m256d best = _mm256_set1_pd(-HUGE_VAL);
    __m256i bidx = _mm256_setzero_si256();
    __m256i idx = _mm256_setr_epi64x(0, 1, 2, 3);
    const __m256i four = _mm256_set1_epi64x(4);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d num = _mm256_add_pd(_mm256_mul_pd(vux, _mm256_loadu_pd(xs + i)),
                                    _mm256_mul_pd(vuy, _mm256_loadu_pd(ys + i)));
        num = _mm256_add_pd(num, _mm256_mul_pd(vuz, _mm256_loadu_pd(zs + i)));
        __m256d r = _mm256_div_pd(num, _mm256_loadu_pd(h + i));
        __m256d gt = _mm256_cmp_pd(r, best, _CMP_GT_OQ);
        best = _mm256_blendv_pd(best, r, gt);
        bidx = _mm256_castpd_si256(_mm256_blendv_pd(
            _mm256_castsi256_pd(bidx), _mm256_castsi256_pd(idx), gt));
        idx = _mm256_add_epi64(idx, four);
    }
    return reduce_argmax(best, bidx, nullptr, i, n, h, ux, uy, uz, xs, ys, zs);
}

bool contains_point_2d(const double* xs, const double* ys, const double* h,
                       std::size_t n, double px, double py)
{
    const __m256d vpx = _mm256_set1_pd(px);
    const __m256d vpy = _mm256_set1_pd(py);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_add_pd(_mm256_mul_pd(vpx, _mm256_loadu_pd(xs + i)),
                                  _mm256_mul_pd(vpy, _mm256_loadu_pd(ys + i)));
        __m256d gt = _mm256_cmp_pd(d, _mm256_loadu_pd(h + i), _CMP_GT_OQ);
        if (_mm256_movemask_pd(gt)) return false;
    }
    for (; i < n; ++i)
        if (px * xs[i] + py * ys[i] > h[i]) return false;
    return true;
}

bool contains_point_3d(const double* xs, const double* ys, const double* zs,
                       const double* h, std::size_t n,
                       double px, double py, double pz)
{
    const __m256d vpx = _mm256_set1_pd(px);
    const __m256d vpy = _mm256_set1_pd(py);
    const __m256d vpz = _mm256_set1_pd(pz);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_add_pd(_mm256_mul_pd(vpx, _mm256_loadu_pd(xs + i)),
                                  _mm256_mul_pd(vpy, _mm256_loadu_pd(ys + i)));
        d = _mm256_add_pd(d, _mm256_mul_pd(vpz, _mm256_loadu_pd(zs + i)));
        __m256d gt = _mm256_cmp_pd(d, _mm256_loadu_pd(h + i), _CMP_GT_OQ);
        if (_mm256_movemask_pd(gt)) return false;
    }
    for (; i < n; ++i)
        if ((px * xs[i] + py * ys[i]) + pz * zs[i] > h[i]) return false;
    return true;
}

#else  // !__AVX2__

bool available() { return false; }

double dot(const double* a, const double* b, std::size_t n)
{
    return scalar::dot(a, b, n);
}
double sup_abs_diff(const double* a, const double* b, std::size_t n)
{
    return scalar::sup_abs_diff(a, b, n);
}
double max_abs(const double* a, std::size_t n)
{
    return scalar::max_abs(a, n);
}
std::size_t best_ratio_2d(const double* xs, const double* ys, const double* h,
                          std::size_t n, double ux, double uy)
{
    return scalar::best_ratio_2d(xs, ys, h, n, ux, uy);
}
std::size_t best_ratio_3d(const double* xs, const double* ys, const double* zs,
                          const double* h, std::size_t n,
                          double ux, double uy, double uz)
{
    return scalar::best_ratio_3d(xs, ys, zs, h, n, ux, uy, uz);
}
bool contains_point_2d(const double* xs, const double* ys, const double* h,
                       std::size_t n, double px, double py)
{
    return scalar::contains_point_2d(xs, ys, h, n, px, py);
}
bool contains_point_3d(const double* xs, const double* ys, const double* zs,
                       const double* h, std::size_t n,
                       double px, double py, double pz)
{
    return scalar::contains_point_3d(xs, ys, zs, h, n, px, py, pz);
}

#endif

}  // namespace gmink::kernels::avx2
