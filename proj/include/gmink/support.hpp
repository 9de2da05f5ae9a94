#pragma once
#include "gmink/grid.hpp"

#include <memory>

namespace gmink {

/// Support function samples of an origin-symmetric convex body, together
/// with the L_p parameter carried by the measures built from it.
/// Invariants (enforced by operations, not the constructor, because Newton
/// trial iterates may violate them): values positive, even under the
/// antipodal map, and spherical-convex (det(hess + h I) > 0 nodewise).
struct SupportField {
    std::shared_ptr<const DirectionGrid> grid;
    Eigen::VectorXd values;
    double p = 1.0;

    int dim() const { return grid->dim; }
    std::size_t size() const { return grid->node_count(); }
};

/// Convenience constructors.
SupportField constant_field(std::shared_ptr<const DirectionGrid> grid, double r, double p = 1.0);

/// Pointwise derivative data of a support field.
///
/// Gradient and Hessian live in the orthonormal tangent frame
/// (e_theta, e_phi) for S^2; on S^1 only the theta components are used.
/// det_w holds det(hess + h I), the reciprocal Gauss curvature composed
/// with the Gauss map.
struct BodyGeometry {
    Eigen::VectorXd grad_theta;  // dim 2: h'
    Eigen::VectorXd grad_phi;    // dim 3 only
    Eigen::VectorXd grad_norm2;  // |grad h|^2
    Eigen::VectorXd hess11;      // dim 2: h''
    Eigen::VectorXd hess12, hess22;  // dim 3 only
    Eigen::VectorXd det_w;
    Eigen::MatrixXd boundary_points;  // node_count x dim, x = grad h + h u
    Eigen::VectorXd radial;           // filled only when requested
};

/// Differentiate a support field on its grid (spectral on S^1, 4th-order
/// finite differences on S^2).  When with_radial is set, the radial function
/// is sampled at every grid direction as well.
BodyGeometry differentiate(const SupportField& h, bool with_radial = false);

/// Radial function of the sampled body in direction u (unit vector, dim
/// doubles).  Discrete maximization of (u.v)/h(v) over grid nodes plus a
/// local quadratic refinement.  Throws if no node has u.v > 0.
double radial_from_support(const SupportField& h, const double* u);

/// Radial evaluation detail shared with the radial-route measure total.
struct RadialHit {
    double rho;          // radial function value
    double u_dot_alpha;  // cosine between u and the refined normal direction
    double h_at_alpha;   // support value at the refined normal (= rho * u_dot_alpha)
    std::size_t node;    // maximizing grid node
};
RadialHit radial_hit(const SupportField& h, const double* u);

struct ConvexityReport {
    double min_eigenvalue;  // min over nodes of the eigenvalues of hess + h I
    bool is_convex;         // min_eigenvalue > 0
};
ConvexityReport convexity_check(const SupportField& h);

/// Sup distance between support samples; requires identical grid layout.
double hausdorff_distance(const SupportField& a, const SupportField& b);

/// Even part of a support field (exact antipodal averaging).
SupportField symmetrize_even(const SupportField& h);

}  // namespace gmink
