#include "gmink/support.hpp"
#include "gmink/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace gmink {

namespace {

void require_same_grid(const SupportField& a, const SupportField& b, const char* op)
{
    if (!a.grid || !b.grid || !a.grid->same_layout(*b.grid))
        throw std::invalid_argument(std::string(op) + ": support fields live on different grids");
}

void require_positive(const SupportField& h, const char* op)
{
    if (h.values.size() == 0 || static_cast<std::size_t>(h.values.size()) != h.grid->node_count())
        throw std::invalid_argument(std::string(op) + ": value count does not match grid");
    if (h.values.minCoeff() <= 0.0)
        throw std::invalid_argument(std::string(op) + ": support values must be positive");
}

/// Quadratic Lagrange basis on three nodes; value/first/second derivative.
struct Quad3 {
    double p[3];
    double l(int a, double x) const
    {
        const int b = (a + 1) % 3, c = (a + 2) % 3;
        return (x - p[b]) * (x - p[c]) / ((p[a] - p[b]) * (p[a] - p[c]));
    }
    double dl(int a, double x) const
    {
        const int b = (a + 1) % 3, c = (a + 2) % 3;
        return ((x - p[b]) + (x - p[c])) / ((p[a] - p[b]) * (p[a] - p[c]));
    }
    double d2l(int a) const
    {
        const int b = (a + 1) % 3, c = (a + 2) % 3;
        return 2.0 / ((p[a] - p[b]) * (p[a] - p[c]));
    }
};

struct RefineResult {
    double ratio;
    double theta;
    double phi;  // unused on S^1
};

/// S^1 refinement: one quadratic fit of m_j = (u.v_j)/h_j over the argmax
/// node and its two neighbours (uniform angle spacing).
RefineResult refine_s1(const DirectionGrid& g, const Eigen::VectorXd& h,
                       double ux, double uy, std::size_t j0)
{
    const int n = g.res.n;
    const auto m_at = [&](int j) {
        j = (j % n + n) % n;
        return (ux * g.xs[j] + uy * g.ys[j]) / h[j];
    };
    const int j = static_cast<int>(j0);
    const double m0 = m_at(j), mm = m_at(j - 1), mp = m_at(j + 1);
    const double a = 0.5 * (mm - 2.0 * m0 + mp);
    const double b = 0.5 * (mp - mm);
    RefineResult r{m0, g.theta[j0], 0.0};
    if (a < 0.0) {
        double d = -b / (2.0 * a);
        if (d > 1.0) d = 1.0;
        if (d < -1.0) d = -1.0;
        const double mhat = m0 + (b + a * d) * d;
        if (mhat > r.ratio) {
            r.ratio = mhat;
            r.theta = g.theta[j0] + d * (2.0 * 3.14159265358979323846 / n);
        }
    }
    return r;
}

/// S^2 refinement: biquadratic interpolation of h over the 3x3 stencil
/// around the argmax node (pole-wrapped), then a clamped Newton
/// maximization of (u.v)/h over the stencil cell.
RefineResult refine_s2(const DirectionGrid& g, const Eigen::VectorXd& h,
                       double ux, double uy, double uz, std::size_t k0)
{
    const int n_lat = g.res.n_lat, n_lon = g.res.n_lon;
    const int i0 = static_cast<int>(k0) / n_lon;
    const int j0 = static_cast<int>(k0) % n_lon;

    Quad3 qt{}, qp{};
    double vals[3][3];
    for (int a = -1; a <= 1; ++a) {
        int r = i0 + a;
        int row, extra = 0;
        double pos;
        if (r < 0) {
            row = -1 - r;
            pos = -g.colat[row];
            extra = n_lon / 2;
        } else if (r >= n_lat) {
            row = 2 * n_lat - 1 - r;
            pos = 2.0 * 3.14159265358979323846 - g.colat[row];
            extra = n_lon / 2;
        } else {
            row = r;
            pos = g.colat[row];
        }
        qt.p[a + 1] = pos;
        for (int b = -1; b <= 1; ++b) {
            const int col = ((j0 + b + extra) % n_lon + n_lon) % n_lon;
            vals[a + 1][b + 1] = h[static_cast<std::size_t>(row) * n_lon + col];
        }
    }
    const double phi0 = g.lon_step * j0;
    qp.p[0] = phi0 - g.lon_step;
    qp.p[1] = phi0;
    qp.p[2] = phi0 + g.lon_step;

    const auto H = [&](double th, double ph, double* d1th, double* d1ph,
                       double* d2th, double* d2ph, double* dthph) {
        double lv[3], ld[3], l2[3], mv[3], md[3], m2[3];
        for (int a = 0; a < 3; ++a) {
            lv[a] = qt.l(a, th);
            ld[a] = qt.dl(a, th);
            l2[a] = qt.d2l(a);
            mv[a] = qp.l(a, ph);
            md[a] = qp.dl(a, ph);
            m2[a] = qp.d2l(a);
        }
        double v = 0, vt = 0, vp = 0, vtt = 0, vpp = 0, vtp = 0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const double x = vals[a][b];
                v += x * lv[a] * mv[b];
                vt += x * ld[a] * mv[b];
                vp += x * lv[a] * md[b];
                vtt += x * l2[a] * mv[b];
                vpp += x * lv[a] * m2[b];
                vtp += x * ld[a] * md[b];
            }
        *d1th = vt;
        *d1ph = vp;
        *d2th = vtt;
        *d2ph = vpp;
        *dthph = vtp;
        return v;
    };
    const auto N = [&](double th, double ph, double* d1th, double* d1ph,
                       double* d2th, double* d2ph, double* dthph) {
        const double ct = std::cos(th), st = std::sin(th);
        const double cp = std::cos(ph), sp = std::sin(ph);
        const double a = ux * cp + uy * sp;
        const double da = -ux * sp + uy * cp;
        const double v = st * a + uz * ct;
        *d1th = ct * a - uz * st;
        *d1ph = st * da;
        *d2th = -v;
        *d2ph = -st * a;
        *dthph = ct * da;
        return v;
    };

    const double m0 = (ux * g.xs[k0] + uy * g.ys[k0] + uz * g.zs[k0]) / h[k0];
    RefineResult best{m0, g.colat[i0], phi0};

    double th = g.colat[i0], ph = phi0;
    for (int it = 0; it < 8; ++it) {
        double nt, np, ntt, npp, ntp;
        const double nv = N(th, ph, &nt, &np, &ntt, &npp, &ntp);
        double ht, hp, htt, hpp, htp;
        const double hv = H(th, ph, &ht, &hp, &htt, &hpp, &htp);
        if (nv <= 0.0 || hv <= 0.0) break;
        // gradient and Hessian of log(N/H)
        const double gt = nt / nv - ht / hv;
        const double gp = np / nv - hp / hv;
        const double att = ntt / nv - (nt / nv) * (nt / nv) - htt / hv + (ht / hv) * (ht / hv);
        const double app = npp / nv - (np / nv) * (np / nv) - hpp / hv + (hp / hv) * (hp / hv);
        const double atp = ntp / nv - (nt * np) / (nv * nv) - htp / hv + (ht * hp) / (hv * hv);
        const double det = att * app - atp * atp;
        if (!(att < 0.0 && det > 0.0)) break;  // not locally concave
        double dth = (-gt * app + gp * atp) / det;
        double dph = (-gp * att + gt * atp) / det;
        th += dth;
        ph += dph;
        if (th < qt.p[0]) th = qt.p[0];
        if (th > qt.p[2]) th = qt.p[2];
        if (ph < qp.p[0]) ph = qp.p[0];
        if (ph > qp.p[2]) ph = qp.p[2];
        if (std::fabs(dth) + std::fabs(dph) < 1e-12) break;
    }
    double nt, np, ntt, npp, ntp, ht, hp, htt, hpp, htp;
    const double nv = N(th, ph, &nt, &np, &ntt, &npp, &ntp);
    const double hv = H(th, ph, &ht, &hp, &htt, &hpp, &htp);
    if (hv > 0.0 && nv > 0.0 && nv / hv > best.ratio) {
        best.ratio = nv / hv;
        best.theta = th;
        best.phi = ph;
    }
    return best;
}

}  // namespace

SupportField constant_field(std::shared_ptr<const DirectionGrid> grid, double r, double p)
{
    if (r <= 0.0) throw std::invalid_argument("constant_field: radius must be positive");
    SupportField h;
    h.values = Eigen::VectorXd::Constant(grid->node_count(), r);
    h.grid = std::move(grid);
    h.p = p;
    return h;
}

BodyGeometry differentiate(const SupportField& h, bool with_radial)
{
    require_positive(h, "differentiate");
    const DirectionGrid& g = *h.grid;
    const auto n = static_cast<Eigen::Index>(g.node_count());
    BodyGeometry geo;
    geo.boundary_points.resize(n, g.dim);

    if (g.dim == 2) {
        geo.grad_theta = g.d1 * h.values;
        geo.hess11 = g.d2 * h.values;
        geo.grad_norm2 = geo.grad_theta.array().square();
        geo.det_w = geo.hess11 + h.values;
        for (Eigen::Index k = 0; k < n; ++k) {
            const double c = g.xs[k], s = g.ys[k];
            geo.boundary_points(k, 0) = -geo.grad_theta[k] * s + h.values[k] * c;
            geo.boundary_points(k, 1) = geo.grad_theta[k] * c + h.values[k] * s;
        }
    } else {
        const Eigen::VectorXd hth = g.s_th1 * h.values;
        const Eigen::VectorXd hthth = g.s_th2 * h.values;
        const Eigen::VectorXd hph = g.s_ph1 * h.values;
        const Eigen::VectorXd hphph = g.s_ph2 * h.values;
        const Eigen::VectorXd hthph = g.s_thph * h.values;
        geo.grad_theta = hth;
        geo.grad_phi.resize(n);
        geo.grad_norm2.resize(n);
        geo.hess11 = hthth;
        geo.hess12.resize(n);
        geo.hess22.resize(n);
        geo.det_w.resize(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const int row = g.lat_of(k);
            const double s = g.sin_colat[row];
            const double cot = g.cot_colat[row];
            const double gph = hph[k] / s;
            geo.grad_phi[k] = gph;
            geo.grad_norm2[k] = hth[k] * hth[k] + gph * gph;
            geo.hess22[k] = hphph[k] / (s * s) + cot * hth[k];
            geo.hess12[k] = (hthph[k] - cot * hph[k]) / s;
            const double w11 = geo.hess11[k] + h.values[k];
            const double w22 = geo.hess22[k] + h.values[k];
            geo.det_w[k] = w11 * w22 - geo.hess12[k] * geo.hess12[k];

            const double ct = g.zs[k];
            const double cp = g.xs[k] / s, sp = g.ys[k] / s;
            // e_theta = (ct*cp, ct*sp, -s), e_phi = (-sp, cp, 0)
            geo.boundary_points(k, 0) = hth[k] * ct * cp - gph * sp + h.values[k] * g.xs[k];
            geo.boundary_points(k, 1) = hth[k] * ct * sp + gph * cp + h.values[k] * g.ys[k];
            geo.boundary_points(k, 2) = -hth[k] * s + h.values[k] * g.zs[k];
        }
    }

    if (with_radial) {
        geo.radial.resize(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double u[3] = {g.xs[k], g.ys[k], g.dim == 3 ? g.zs[k] : 0.0};
            geo.radial[k] = radial_from_support(h, u);
        }
    }
    return geo;
}

RadialHit radial_hit(const SupportField& h, const double* u)
{
    require_positive(h, "radial_from_support");
    const DirectionGrid& g = *h.grid;
    const std::size_t n = g.node_count();
    RadialHit hit{};
    RefineResult ref{};
    double alpha[3] = {0.0, 0.0, 0.0};
    if (g.dim == 2) {
        hit.node = kernels::best_ratio_2d(g.xs.data(), g.ys.data(), h.values.data(), n, u[0], u[1]);
        ref = refine_s1(g, h.values, u[0], u[1], hit.node);
        alpha[0] = std::cos(ref.theta);
        alpha[1] = std::sin(ref.theta);
        hit.u_dot_alpha = u[0] * alpha[0] + u[1] * alpha[1];
    } else {
        hit.node = kernels::best_ratio_3d(g.xs.data(), g.ys.data(), g.zs.data(),
                                          h.values.data(), n, u[0], u[1], u[2]);
        ref = refine_s2(g, h.values, u[0], u[1], u[2], hit.node);
        const double st = std::sin(ref.theta), ct = std::cos(ref.theta);
        alpha[0] = st * std::cos(ref.phi);
        alpha[1] = st * std::sin(ref.phi);
        alpha[2] = ct;
        hit.u_dot_alpha = u[0] * alpha[0] + u[1] * alpha[1] + u[2] * alpha[2];
    }
    if (ref.ratio <= 0.0)
        throw std::runtime_error("radial_from_support: no grid node has u.v > 0");
    hit.rho = 1.0 / ref.ratio;
    hit.h_at_alpha = hit.rho * hit.u_dot_alpha;
    return hit;
}

double radial_from_support(const SupportField& h, const double* u)
{
    return radial_hit(h, u).rho;
}

ConvexityReport convexity_check(const SupportField& h)
{
    require_positive(h, "convexity_check");
    const BodyGeometry geo = differentiate(h);
    const auto n = static_cast<Eigen::Index>(h.size());
    double min_eig = HUGE_VAL;
    if (h.dim() == 2) {
        min_eig = geo.det_w.minCoeff();
    } else {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double w11 = geo.hess11[k] + h.values[k];
            const double w22 = geo.hess22[k] + h.values[k];
            const double mid = 0.5 * (w11 + w22);
            const double off = 0.5 * (w11 - w22);
            const double eig = mid - std::sqrt(off * off + geo.hess12[k] * geo.hess12[k]);
            if (eig < min_eig) min_eig = eig;
        }
    }
    return ConvexityReport{min_eig, min_eig > 0.0};
}

double hausdorff_distance(const SupportField& a, const SupportField& b)
{
    require_same_grid(a, b, "hausdorff_distance");
    return kernels::sup_abs_diff(a.values.data(), b.values.data(), a.size());
}

SupportField symmetrize_even(const SupportField& h)
{
    SupportField out = h;
    out.values = symmetrize_even(h.values, *h.grid);
    return out;
}

}  // namespace gmink
