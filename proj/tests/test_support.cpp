#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gmink/support.hpp"

#include <cmath>
#include <stdexcept>

using namespace gmink;

namespace {

const double PI = 3.14159265358979323846;

/// Support function of the ellipse with semi-axes (a, b).
SupportField ellipse(std::shared_ptr<const DirectionGrid> g, double a, double b)
{
    SupportField h{g, Eigen::VectorXd(g->node_count()), 1.0};
    for (std::size_t i = 0; i < g->node_count(); ++i) {
        const double x = g->xs[i], y = g->ys[i];
        h.values[static_cast<Eigen::Index>(i)] = std::sqrt(a * a * x * x + b * b * y * y);
    }
    return h;
}

/// Support function of the ellipsoid with semi-axes (a, b, c).
SupportField ellipsoid(std::shared_ptr<const DirectionGrid> g, double a, double b, double c)
{
    SupportField h{g, Eigen::VectorXd(g->node_count()), 1.0};
    for (std::size_t i = 0; i < g->node_count(); ++i) {
        const double x = g->xs[i], y = g->ys[i], z = g->zs[i];
        h.values[static_cast<Eigen::Index>(i)] =
            std::sqrt(a * a * x * x + b * b * y * y + c * c * z * z);
    }
    return h;
}

}  // namespace

TEST_CASE("constant fields: geometry of the ball is exact")
{
    for (int dim : {2, 3}) {
        auto g = default_grid(dim);
        const double r = 1.3;
        SupportField h = constant_field(g, r);
        CHECK(h.dim() == dim);
        BodyGeometry geo = differentiate(h, true);

        CHECK(geo.grad_theta.lpNorm<Eigen::Infinity>() <= 1e-11);
        CHECK(geo.grad_norm2.lpNorm<Eigen::Infinity>() <= 1e-11);
        const double want_det = dim == 2 ? r : r * r;
        CHECK((geo.det_w.array() - want_det).abs().maxCoeff() <= 1e-10);

        // Boundary of a ball: x = r u; radial function = r.
        for (std::size_t i = 0; i < g->node_count(); ++i) {
            const auto row = geo.boundary_points.row(static_cast<Eigen::Index>(i));
            Eigen::Vector3d u = g->node(i);
            for (int d = 0; d < dim; ++d) CHECK(row[d] == doctest::Approx(r * u[d]).epsilon(1e-10));
            CHECK(geo.radial[static_cast<Eigen::Index>(i)] == doctest::Approx(r).epsilon(1e-10));
        }

        ConvexityReport conv = convexity_check(h);
        CHECK(conv.is_convex);
        CHECK(conv.min_eigenvalue == doctest::Approx(r).epsilon(1e-10));
    }
}

TEST_CASE("ellipse geometry matches closed forms")
{
    auto g = build_grid_s1(256);
    const double a = 1.4, b = 0.7;
    SupportField h = ellipse(g, a, b);
    BodyGeometry geo = differentiate(h, true);

    for (std::size_t i = 0; i < g->node_count(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double hv = h.values[k];
        // h'' + h = a^2 b^2 / h^3 (reciprocal curvature of an ellipse).
        CHECK(geo.det_w[k] == doctest::Approx(a * a * b * b / (hv * hv * hv)).epsilon(1e-8));
        // h' = (b^2 - a^2) sin(t) cos(t) / h.
        const double x = g->xs[i], y = g->ys[i];
        CHECK(geo.grad_theta[k] == doctest::Approx((b * b - a * a) * x * y / hv).epsilon(1e-8));
        // Boundary point lies on the ellipse.
        const double ex = geo.boundary_points(k, 0) / a;
        const double ey = geo.boundary_points(k, 1) / b;
        CHECK(ex * ex + ey * ey == doctest::Approx(1.0).epsilon(1e-8));
        // Radial function of the ellipse: 1/rho^2 = x^2/a^2 + y^2/b^2.  The
        // discrete argmax plus quadratic refinement is ~1e-5 accurate at 256.
        const double want_rho = 1.0 / std::sqrt(x * x / (a * a) + y * y / (b * b));
        CHECK(geo.radial[k] == doctest::Approx(want_rho).epsilon(1e-5));
    }
}

TEST_CASE("ellipsoid geometry matches closed forms")
{
    auto g = build_grid_s2(32, 64);
    const double a = 1.2, b = 0.9, c = 0.75;
    SupportField h = ellipsoid(g, a, b, c);
    BodyGeometry geo = differentiate(h, true);

    double worst_det = 0.0, worst_rho = 0.0;
    for (std::size_t i = 0; i < g->node_count(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double hv = h.values[k];
        // det(hess + h I) = (abc)^2 / h^4 for an ellipsoid.
        const double want = a * a * b * b * c * c / (hv * hv * hv * hv);
        worst_det = std::max(worst_det, std::abs(geo.det_w[k] - want) / want);

        const double x = g->xs[i], y = g->ys[i], z = g->zs[i];
        const double want_rho =
            1.0 / std::sqrt(x * x / (a * a) + y * y / (b * b) + z * z / (c * c));
        worst_rho = std::max(worst_rho, std::abs(geo.radial[k] - want_rho));

        // Boundary point lies on the ellipsoid surface.
        const double ex = geo.boundary_points(k, 0) / a;
        const double ey = geo.boundary_points(k, 1) / b;
        const double ez = geo.boundary_points(k, 2) / c;
        CHECK(ex * ex + ey * ey + ez * ez == doctest::Approx(1.0).epsilon(2e-4));
    }
    // 4th-order stencils at 32 x 64: relative det error well below a percent.
    CHECK(worst_det <= 2e-3);
    CHECK(worst_rho <= 5e-4);

    CHECK(convexity_check(h).is_convex);
}

TEST_CASE("radial_from_support agrees with a brute-force oracle (S^1)")
{
    auto g = build_grid_s1(256);
    SupportField h = ellipse(g, 1.6, 0.8);

    // Oracle: rho(u) = min over a dense set of directions v of h(v)/(u.v).
    auto oracle = [&](double ux, double uy) {
        double best = std::numeric_limits<double>::infinity();
        const int M = 2000000;
        for (int j = 0; j < M; ++j) {
            const double t = 2.0 * PI * j / M;
            const double vx = std::cos(t), vy = std::sin(t);
            const double d = ux * vx + uy * vy;
            if (d <= 0.0) continue;
            const double hv = std::sqrt(1.6 * 1.6 * vx * vx + 0.8 * 0.8 * vy * vy);
            best = std::min(best, hv / d);
        }
        return best;
    };

    for (double t : {0.0, 0.3, 1.1, 2.0, 4.4}) {
        const double u[2] = {std::cos(t), std::sin(t)};
        const double got = radial_from_support(h, u);
        CHECK(got == doctest::Approx(oracle(u[0], u[1])).epsilon(1e-5));

        RadialHit hit = radial_hit(h, u);
        CHECK(hit.rho == got);
        CHECK(hit.h_at_alpha == doctest::Approx(hit.rho * hit.u_dot_alpha).epsilon(1e-12));
        CHECK(hit.u_dot_alpha > 0.0);
        CHECK(hit.node < g->node_count());
    }
}

TEST_CASE("hausdorff_distance on balls and layout checks")
{
    auto g = default_grid(2);
    SupportField b1 = constant_field(g, 1.0);
    SupportField b2 = constant_field(g, 2.5);
    CHECK(hausdorff_distance(b1, b2) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(hausdorff_distance(b1, b1) == 0.0);

    SupportField other{build_grid_s1(128), Eigen::VectorXd::Ones(128), 1.0};
    CHECK_THROWS_AS(hausdorff_distance(b1, other), std::invalid_argument);
}

TEST_CASE("symmetrize_even yields an even field and convexity_check flags non-convex input")
{
    auto g = build_grid_s1(64);
    SupportField h{g, Eigen::VectorXd(64), 1.0};
    for (int i = 0; i < 64; ++i)
        h.values[i] = 1.0 + 0.2 * std::cos(g->theta[i]);  // odd part present

    SupportField e = symmetrize_even(h);
    CHECK(is_even(e.values, *g));
    CHECK((e.values.array() - 1.0).abs().maxCoeff() <= 1e-12);  // cos averages away

    // h = 1 + 0.9 cos(2t): h'' + h = 1 - 2.7 cos(2t) < 0 near t = 0.
    SupportField bad{g, Eigen::VectorXd(64), 1.0};
    for (int i = 0; i < 64; ++i) bad.values[i] = 1.0 + 0.9 * std::cos(2.0 * g->theta[i]);
    ConvexityReport rep = convexity_check(bad);
    CHECK_FALSE(rep.is_convex);
    CHECK(rep.min_eigenvalue == doctest::Approx(-1.7).epsilon(1e-6));
}
