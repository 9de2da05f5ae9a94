#include "gmink/gaussian.hpp"
#include "gmink/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace gmink {

namespace {

const double PI = 3.14159265358979323846;
const double SQRT_2PI = 2.50662827463100050242;

void require_convex(const SupportField& h, const char* op)
{
    const ConvexityReport c = convexity_check(h);
    if (!c.is_convex)
        throw std::invalid_argument(std::string(op) + ": support field is not convex (min eigenvalue " +
                                    std::to_string(c.min_eigenvalue) + ")");
}

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Two independent standard normal draws from counter-based bits; the result
/// depends only on (seed, counter), never on evaluation order.
inline void normal_pair(std::uint64_t seed, std::uint64_t counter, double* g1, double* g2)
{
    const std::uint64_t a = splitmix64(seed ^ splitmix64(counter));
    const std::uint64_t b = splitmix64(a);
    const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;          // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    *g1 = r * std::cos(2.0 * PI * u2);
    *g2 = r * std::sin(2.0 * PI * u2);
}

}  // namespace

double radial_gn(double rho, int dim)
{
    if (dim == 2) return 1.0 - std::exp(-0.5 * rho * rho);
    return std::sqrt(0.5 * PI) * std::erf(rho / std::sqrt(2.0)) - rho * std::exp(-0.5 * rho * rho);
}

double gaussian_volume(const SupportField& h)
{
    require_convex(h, "gaussian_volume");
    const DirectionGrid& g = *h.grid;
    const std::size_t n = g.node_count();
    Eigen::VectorXd gn(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u[3] = {g.xs[k], g.ys[k], g.dim == 3 ? g.zs[k] : 0.0};
        gn[k] = radial_gn(radial_from_support(h, u), g.dim);
    }
    const double norm = std::pow(SQRT_2PI, g.dim);
    return kernels::dot(g.weights.data(), gn.data(), n) / norm;
}

McEstimate gaussian_volume_mc(const SupportField& h, std::int64_t samples, std::uint64_t seed)
{
    if (samples < 10000)
        throw std::invalid_argument("gaussian_volume_mc: need at least 1e4 samples");
    if (h.values.size() == 0 || static_cast<std::size_t>(h.values.size()) != h.grid->node_count())
        throw std::invalid_argument("gaussian_volume_mc: value count does not match grid");
    if (h.values.minCoeff() <= 0.0)
        throw std::invalid_argument("gaussian_volume_mc: support values must be positive");
    const DirectionGrid& g = *h.grid;
    const std::size_t n = g.node_count();
    std::int64_t inside = 0;
    if (g.dim == 2) {
        for (std::int64_t i = 0; i < samples; ++i) {
            double x, y;
            normal_pair(seed, static_cast<std::uint64_t>(i), &x, &y);
            inside += kernels::contains_point_2d(g.xs.data(), g.ys.data(), h.values.data(), n, x, y);
        }
    } else {
        for (std::int64_t i = 0; i < samples; ++i) {
            double x, y, z, spare;
            normal_pair(seed, 2 * static_cast<std::uint64_t>(i), &x, &y);
            normal_pair(seed, 2 * static_cast<std::uint64_t>(i) + 1, &z, &spare);
            inside += kernels::contains_point_3d(g.xs.data(), g.ys.data(), g.zs.data(),
                                                 h.values.data(), n, x, y, z);
        }
    }
    const double f = static_cast<double>(inside) / static_cast<double>(samples);
    const double se = std::sqrt(f * (1.0 - f) / static_cast<double>(samples));
    return McEstimate{f, se};
}

MeasureDensity surface_measure_density(const SupportField& h)
{
    require_convex(h, "surface_measure_density");
    const BodyGeometry geo = differentiate(h);
    const auto n = static_cast<Eigen::Index>(h.size());
    MeasureDensity out;
    out.grid = h.grid;
    out.values.resize(n);
    const double norm = std::pow(SQRT_2PI, h.dim());
    for (Eigen::Index k = 0; k < n; ++k) {
        const double hv = h.values[k];
        out.values[k] = std::pow(hv, 1.0 - h.p) *
                        std::exp(-0.5 * (hv * hv + geo.grad_norm2[k])) * geo.det_w[k] / norm;
    }
    out.l1_norm = kernels::dot(h.grid->weights.data(), out.values.data(), h.size());
    return out;
}

double surface_measure_total(const MeasureDensity& f)
{
    if (static_cast<std::size_t>(f.values.size()) != f.grid->node_count())
        throw std::invalid_argument("surface_measure_total: value count does not match grid");
    return kernels::dot(f.grid->weights.data(), f.values.data(), f.grid->node_count());
}

double surface_measure_total_radial(const SupportField& h)
{
    require_convex(h, "surface_measure_total_radial");
    const DirectionGrid& g = *h.grid;
    const std::size_t n = g.node_count();
    Eigen::VectorXd term(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u[3] = {g.xs[k], g.ys[k], g.dim == 3 ? g.zs[k] : 0.0};
        const RadialHit hit = radial_hit(h, u);
        term[k] = std::pow(hit.h_at_alpha, 1.0 - h.p) * std::exp(-0.5 * hit.rho * hit.rho) *
                  std::pow(hit.rho, g.dim - 1) / hit.u_dot_alpha;
    }
    const double norm = std::pow(SQRT_2PI, g.dim);
    return kernels::dot(g.weights.data(), term.data(), n) / norm;
}

double phi(double t)
{
    return std::exp(-0.5 * t * t) / SQRT_2PI;
}

double gamma_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace {

/// erf by its Taylor series, adequate to ~1e-15 for |x| <= 2.
double erf_series(double x)
{
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int k = 1; k < 80; ++k) {
        term *= -x2 / k;
        const double add = term / (2 * k + 1);
        sum += add;
        if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
    }
    return sum * (2.0 / std::sqrt(PI));
}

/// erfc(x) * exp(x^2) for x >= 2 via the Legendre continued fraction
/// 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), evaluated with the
/// modified Lentz algorithm.  The truncation is a rational function of x.
double erfcx_cf(double x)
{
    const double tiny = 1e-300;
    double f = tiny, c = f, d = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double a = (k == 0) ? 1.0 : 0.5 * k;
        const double b = x;
        d = b + a * d;
        if (d == 0.0) d = tiny;
        c = b + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) break;
    }
    return f / std::sqrt(PI);
}

double erfc_fallback(double x)
{
    const double ax = std::fabs(x);
    double v;
    if (ax <= 2.0)
        v = 1.0 - erf_series(ax);
    else
        v = std::exp(-ax * ax) * erfcx_cf(ax);
    return x >= 0.0 ? v : 2.0 - v;
}

}  // namespace

double gamma_cdf_rational(double x)
{
    return 0.5 * erfc_fallback(-x / std::sqrt(2.0));
}

double gamma_inv(double y)
{
    if (!(y > 0.0 && y < 1.0))
        throw std::invalid_argument("gamma_inv: argument must lie in (0, 1)");
    double lo = -1.0, hi = 1.0;
    while (gamma_cdf(lo) > y) lo *= 2.0;
    while (gamma_cdf(hi) < y) hi *= 2.0;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 80; ++it) {
        if (gamma_cdf(x) > y)
            hi = x;
        else
            lo = x;
        x = 0.5 * (lo + hi);
        if (hi - lo < 1e-13) break;
    }
    for (int it = 0; it < 8; ++it) {
        const double err = gamma_cdf(x) - y;
        const double d = phi(x);
        if (d <= 0.0) break;
        x -= err / d;
    }
    return x;
}

double isoperimetric_lower_bound(double gamma, int n, double p)
{
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("isoperimetric_lower_bound: gamma must lie in (0, 1)");
    if (n < 2 || p < 1.0)
        throw std::invalid_argument("isoperimetric_lower_bound: need n >= 2 and p >= 1");
    const double ng = n * gamma;
    return ng * std::pow(phi(gamma_inv(gamma)) / ng, p);
}

double mass_threshold(int n, double p)
{
    if (n < 2 || p < 1.0)
        throw std::invalid_argument("mass_threshold: need n >= 2 and p >= 1");
    return std::pow(1.0 / SQRT_2PI, p) * std::pow(0.5 * n, 1.0 - p);
}

}  // namespace gmink
