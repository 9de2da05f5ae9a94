#include "gmink/isotropic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gmink {

namespace {

void validate_np(int n, double p)
{
    if (n < 2) throw std::invalid_argument("isotropic analysis: need n >= 2");
    if (!(p >= 1.0) || !(p < n))
        throw std::invalid_argument("isotropic analysis: need 1 <= p < n, got p = " + std::to_string(p));
}

/// g(r) = r^(n-p) e^(-r^2/2), evaluated in log form for stability.
inline double g_iso(double r, double q)  // q = n - p
{
    if (r <= 0.0) return 0.0;
    return std::exp(q * std::log(r) - 0.5 * r * r);
}

double polish_root(double r, double C, double q)
{
    for (int it = 0; it < 60; ++it) {
        const double g = g_iso(r, q);
        const double dg = g * (q / r - r);
        if (dg == 0.0) break;
        const double step = (g - C) / dg;
        const double next = r - step;
        if (next <= 0.0) break;
        r = next;
        if (std::fabs(step) <= 1e-16 * r) break;
    }
    return r;
}

}  // namespace

double isotropic_threshold(int n, double p)
{
    validate_np(n, p);
    const double q = n - p;
    return std::exp(0.5 * q * (std::log(q) - 1.0));
}

int count_constant_solutions(int n, double p, double C)
{
    if (!(C > 0.0)) throw std::invalid_argument("count_constant_solutions: C must be positive");
    const double t = isotropic_threshold(n, p);
    if (std::fabs(C - t) <= 1e-12 * t) return 1;
    return C < t ? 2 : 0;
}

std::vector<double> solve_constant_roots(int n, double p, double C)
{
    const int count = count_constant_solutions(n, p, C);
    const double q = n - p;
    const double rstar = std::sqrt(q);
    if (count == 0)
        throw std::domain_error("solve_constant_roots: C exceeds the isotropic threshold, no constant solutions");
    if (count == 1) return {rstar};

    // Small root: g increases from 0 to the threshold on (0, rstar].
    double lo = 0.0, hi = rstar;
    for (int it = 0; it < 200 && hi - lo > 1e-300; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g_iso(mid, q) < C ? lo : hi) = mid;
    }
    const double small = polish_root(0.5 * (lo + hi), C, q);

    // Large root: g decreases from the threshold on [rstar, inf).
    double far = rstar + 1.0;
    while (g_iso(far, q) > C) far *= 1.5;
    lo = rstar;
    hi = far;
    for (int it = 0; it < 200 && hi - lo > 1e-300; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g_iso(mid, q) > C ? lo : hi) = mid;
    }
    const double large = polish_root(0.5 * (lo + hi), C, q);
    return {small, large};
}

SpectrumReport linearized_spectrum(int n, double p, double r0, int k_max)
{
    validate_np(n, p);
    if (!(r0 > 0.0)) throw std::invalid_argument("linearized_spectrum: r0 must be positive");
    if (k_max < 0) throw std::invalid_argument("linearized_spectrum: k_max must be nonnegative");
    const double nu = (n - p) - r0 * r0;
    SpectrumReport out;
    out.lambda.reserve(k_max + 1);
    for (int k = 0; k <= k_max; ++k)
        out.lambda.push_back(nu - static_cast<double>(k) * (k + n - 2));
    out.invertible = true;
    const double band = 1e-12 * std::max(1.0, std::fabs(nu));
    for (int k = 0; static_cast<double>(k) * (k + n - 2) <= nu + 1.0; ++k)
        if (std::fabs(nu - static_cast<double>(k) * (k + n - 2)) <= band) out.invertible = false;
    return out;
}

IsotropicReport analyze_isotropic(int n, double p, double C)
{
    IsotropicReport rep;
    rep.n = n;
    rep.p = p;
    rep.C = C;
    rep.threshold = isotropic_threshold(n, p);
    rep.root_count = count_constant_solutions(n, p, C);
    if (rep.root_count > 0) rep.roots = solve_constant_roots(n, p, C);
    return rep;
}

}  // namespace gmink
