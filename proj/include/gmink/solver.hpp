#pragma once
#include "gmink/gaussian.hpp"

#include <string>
#include <vector>

namespace gmink {

/// Which constant solution of the averaged problem seeds the continuation.
enum class Branch { small, large };

struct SolveConfig {
    Branch branch = Branch::small;
    double p = 1.0;
    double newton_tol = 1e-10;        // residual sup norm
    int max_newton_iters = 50;
    double backtrack_factor = 0.5;
    double min_step = 1.0 / (1 << 20);
    double homotopy_dt_init = 0.1;
    double homotopy_dt_min = 1e-4;
    bool convexity_guard = true;
};

/// Residual of the discrete Monge-Ampere equation at every node:
///   det(hess h + h I) - (sqrt(2 pi))^n e^{(|grad h|^2 + h^2)/2} h^{p-1} f.
/// The L_p parameter is taken from h.p; grids must share a layout.
Eigen::VectorXd residual(const SupportField& h, const MeasureDensity& f);

/// Dense Frechet derivative of the residual at h.
Eigen::MatrixXd assemble_jacobian(const SupportField& h, const MeasureDensity& f);

struct NewtonResult {
    bool converged = false;
    SupportField iterate;
    double residual_sup = 0.0;
    int iterations = 0;
    std::vector<double> history;  // residual sup norm, entry 0 at the start
    std::string failure_reason;
};

/// Damped Newton iteration with sup-norm backtracking.  Trial iterates are
/// symmetrized evenly and must stay positive (and spherically convex when the
/// guard is on) to be accepted.
NewtonResult newton_solve(const SupportField& start, const MeasureDensity& f,
                          const SolveConfig& cfg);

struct HomotopyPoint {
    double t;
    double gamma_n;  // NaN while an iterate is not convex
    double residual_sup;
};

/// Post-hoc certificate: ranges of h, of sqrt(|grad h|^2 + h^2), and of the
/// eigenvalues of (hess h + h I), plus a fresh residual evaluation.  Passes
/// when every range endpoint is strictly positive and finite; a minimum
/// eigenvalue below 1e-6 is flagged but does not fail the check.
struct AprioriReport {
    double min_support = 0.0, max_support = 0.0;
    double min_norm = 0.0, max_norm = 0.0;
    double min_eigenvalue = 0.0, max_eigenvalue = 0.0;
    double residual_sup = 0.0;
    bool eigenvalue_flagged = false;
    bool passed = false;
};
AprioriReport apriori_check(const SupportField& h, const MeasureDensity& f);

struct SolveReport {
    bool converged = false;
    std::string failure_reason;
    Branch branch = Branch::small;
    SupportField solution;
    double gamma_n = 0.0;
    double residual_sup = 0.0;
    bool gamma_crossed_half = false;  // trace passed through gamma = 1/2
    bool mass_threshold_ok = true;    // |f|_L1 below the small-branch bound
    std::vector<double> newton_history;  // final homotopy stage
    std::vector<HomotopyPoint> homotopy_trace;
    AprioriReport apriori;
};

AprioriReport apriori_check(const SolveReport& report, const MeasureDensity& f);

/// Homotopy continuation f_t = (1-t) c0 + t f from the constant isotropic
/// solution of the averaged density (branch-selected root) to the target f.
/// A start whose linearization is near-singular gets its mean nudged by a few
/// percent before giving up.
SolveReport homotopy_solve(const MeasureDensity& f, const SolveConfig& cfg);

}  // namespace gmink
