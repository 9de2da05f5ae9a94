#pragma once
#include "gmink/support.hpp"

#include <cstdint>

namespace gmink {

/// Per-node density of the L_p Gaussian surface area measure of a body,
/// i.e. the integrand that represents dS_p against the grid quadrature.
struct MeasureDensity {
    std::shared_ptr<const DirectionGrid> grid;
    Eigen::VectorXd values;
    double l1_norm = 0.0;
};

/// Gaussian measure of the sampled body via the polar volume formula.
/// Rejects non-convex input.
double gaussian_volume(const SupportField& h);

struct McEstimate {
    double value;
    double std_error;
};

/// Monte Carlo estimate of the Gaussian measure: standard normal samples
/// tested against the sampled supporting half-spaces.  Deterministic for a
/// fixed seed (counter-based per-sample randomness), samples >= 10^4.
McEstimate gaussian_volume_mc(const SupportField& h, std::int64_t samples, std::uint64_t seed);

/// Density of the L_p Gaussian surface area measure on the grid.
/// Rejects non-convex input.
MeasureDensity surface_measure_density(const SupportField& h);

/// Total measure by quadrature of the density.
double surface_measure_total(const MeasureDensity& f);

/// Independent total via the radial-function change of variables
/// (integrand h(alpha(u))^{1-p} e^{-rho^2/2} rho^{n-1} / (u.alpha(u))).
double surface_measure_total_radial(const SupportField& h);

/// Standard normal density.
double phi(double t);
/// Standard normal CDF (error-function route).
double gamma_cdf(double x);
/// Fallback CDF built from a Taylor series plus a Lentz continued fraction;
/// agrees with gamma_cdf to 1e-14.
double gamma_cdf_rational(double x);
/// Inverse CDF by bisection plus Newton, |gamma_cdf(result) - y| <= 1e-12.
double gamma_inv(double y);

/// Sharp lower bound for the total L_p Gaussian surface measure at Gaussian
/// volume `gamma`:  n*gamma*(phi(gamma_inv(gamma))/(n*gamma))^p.
double isoperimetric_lower_bound(double gamma, int n, double p);

/// L^1 mass bound below which the small-volume branch is guaranteed:
/// (1/sqrt(2 pi))^p * (n/2)^(1-p).
double mass_threshold(int n, double p);

/// Integral of e^{-r^2/2} r^{n-1} from 0 to rho (closed forms for n = 2, 3).
double radial_gn(double rho, int dim);

}  // namespace gmink
