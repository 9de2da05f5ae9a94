#pragma once
#include "gmink/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gmink {

/// One property suite run; failures must be 0 for a pass, the worst margin is
/// kept even on success, and seeds reproduce the trials.
struct PropertyRunRecord {
    std::string name;
    int trials = 0;
    int failures = 0;
    double worst_margin = 0.0;
    std::vector<std::uint64_t> seeds;
};

/// Random o-symmetric strictly convex body: h = r0 (1 + even harmonic
/// perturbation of degrees 2..6), r0 uniform in [0.5, 2.5], coefficients
/// redrawn until convexity_check passes (cap 1000 attempts).  Exactly even,
/// deterministic per seed.  Carries p = 1; assign p afterwards if needed.
SupportField random_even_body(int n, std::uint64_t seed, double amplitude = 0.1,
                              std::shared_ptr<const DirectionGrid> grid = nullptr);

/// Total measure of each random body must stay above the sharp lower bound
/// minus 1e-6.  Margin recorded is (total - bound), worst = smallest.
PropertyRunRecord check_isoperimetric(int trials, int n, double p, std::uint64_t seed);

/// Gap sequences of perturbed-measure integrals against the target measure:
/// K_i has support h (1 + eps_i q), eps_i = 2^-i, i = 1..rate_points, q an
/// even seeded perturbation (halved until every K_i is convex).  One column
/// per test function in {1, (u.e1)^2, (u.e2)^2}.
struct ConvergenceDetail {
    std::vector<double> eps;
    Eigen::MatrixXd gaps;  // rate_points x 3
};
ConvergenceDetail weak_convergence_detail(const SupportField& target, int rate_points,
                                          std::uint64_t seed = 0, double amplitude = 0.05);

/// Weak-convergence record over the three test functions: each gap sequence
/// must be nonincreasing from the second point on (values under 1e-12 count
/// as converged noise) and end below 1e-6.  Margin = largest final gap.
PropertyRunRecord check_weak_convergence(const SupportField& target, int rate_points,
                                         std::uint64_t seed = 0, double amplitude = 0.05);

/// Newton runs on isotropic data f = C / (sqrt(2 pi))^n from non-constant
/// perturbed starts.  A converged run fails unless its spread (max h - min h)
/// and sup distance to a constant root are both below 1e-8; when C is above
/// the threshold (no roots) any converged run fails.  Non-convergence is
/// recorded, not failed.
PropertyRunRecord probe_isotropic_constancy(int n, double p, double C, int perturbation_seeds);

}  // namespace gmink
