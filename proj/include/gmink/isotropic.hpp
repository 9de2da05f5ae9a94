#pragma once
#include <vector>

namespace gmink {

/// Threshold value of C below which r^(n-p) e^(-r^2/2) = C has two positive
/// roots, at which it has one, above which none:
/// e^(-(n-p)/2) * (n-p)^((n-p)/2).  Requires 1 <= p < n.
double isotropic_threshold(int n, double p);

/// Number of constant solutions (2 / 1 / 0); equality with the threshold is
/// decided at relative tolerance 1e-12.
int count_constant_solutions(int n, double p, double C);

/// The constant solutions themselves, ascending; bisection brackets each
/// root and Newton polishes it.  Throws when the count is zero.
std::vector<double> solve_constant_roots(int n, double p, double C);

/// Eigenvalues lambda_k = ((n-p) - r0^2) - k(k+n-2) of the linearized
/// operator at the constant solution r0, k = 0..k_max.  The discrete solver
/// Jacobian at the constant has spectrum r0^(n-2) * lambda_k.
struct SpectrumReport {
    std::vector<double> lambda;
    bool invertible;  // no integer k >= 0 makes lambda_k vanish
};
SpectrumReport linearized_spectrum(int n, double p, double r0, int k_max);

struct IsotropicReport {
    int n = 0;
    double p = 0.0;
    double C = 0.0;
    double threshold = 0.0;
    int root_count = 0;
    std::vector<double> roots;
};
IsotropicReport analyze_isotropic(int n, double p, double C);

}  // namespace gmink
