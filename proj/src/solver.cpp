#include "gmink/solver.hpp"

#include "gmink/isotropic.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace gmink {

namespace {

constexpr double SQRT_2PI = 2.50662827463100050242;

void require_same_grid(const SupportField& h, const MeasureDensity& f)
{
    if (!h.grid || !f.grid) throw std::invalid_argument("solver: missing grid");
    if (!h.grid->same_layout(*f.grid))
        throw std::invalid_argument("solver: support field and density live on different grids");
}

/// (sqrt(2 pi))^n f e^{(|grad h|^2 + h^2)/2} h^{p-1}, nodewise.
Eigen::VectorXd nonlinear_term(const SupportField& h, const BodyGeometry& geo,
                               const Eigen::VectorXd& f)
{
    const double K = std::pow(SQRT_2PI, h.dim());
    const Eigen::ArrayXd hv = h.values.array();
    return (K * f.array() * (0.5 * (geo.grad_norm2.array() + hv.square())).exp()
            * hv.pow(h.p - 1.0)).matrix();
}

double min_w_eigenvalue(const SupportField& h, const BodyGeometry& geo)
{
    if (h.dim() == 2) return geo.det_w.minCoeff();
    double m = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < h.values.size(); ++k) {
        const double w11 = geo.hess11[k] + h.values[k];
        const double w22 = geo.hess22[k] + h.values[k];
        const double mid = 0.5 * (w11 + w22), off = 0.5 * (w11 - w22);
        m = std::min(m, mid - std::sqrt(off * off + geo.hess12[k] * geo.hess12[k]));
    }
    return m;
}

double sup_norm(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

void validate_config(const SolveConfig& cfg)
{
    if (!(cfg.newton_tol > 0.0) || !(cfg.min_step > 0.0) || !(cfg.homotopy_dt_init > 0.0)
        || !(cfg.homotopy_dt_min > 0.0) || cfg.max_newton_iters < 1
        || !(cfg.backtrack_factor > 0.0 && cfg.backtrack_factor < 1.0))
        throw std::invalid_argument("solver: invalid configuration");
}

}  // namespace

Eigen::VectorXd residual(const SupportField& h, const MeasureDensity& f)
{
    require_same_grid(h, f);
    if (h.values.minCoeff() <= 0.0)
        throw std::invalid_argument("residual: support field must be positive");
    const BodyGeometry geo = differentiate(h);
    return geo.det_w - nonlinear_term(h, geo, f.values);
}

Eigen::MatrixXd assemble_jacobian(const SupportField& h, const MeasureDensity& f)
{
    require_same_grid(h, f);
    if (h.values.minCoeff() <= 0.0)
        throw std::invalid_argument("assemble_jacobian: support field must be positive");
    const DirectionGrid& g = *h.grid;
    const Eigen::Index n = h.values.size();
    const BodyGeometry geo = differentiate(h);
    const Eigen::VectorXd T = nonlinear_term(h, geo, f.values);
    // d/dh of the exponential and power factors
    const Eigen::VectorXd zero_order =
        (T.array() * (h.values.array() + (h.p - 1.0) / h.values.array())).matrix();

    if (h.dim() == 2) {
        Eigen::MatrixXd J = g.d2;
        const Eigen::VectorXd c1 = (T.array() * geo.grad_theta.array()).matrix();
        J.noalias() -= c1.asDiagonal() * g.d1;
        J.diagonal().array() += 1.0 - zero_order.array();
        return J;
    }

    using Sp = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    Eigen::VectorXd w11(n), w22(n), w12(n), inv_sin(n), cot(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const int row = g.lat_of(k);
        inv_sin[k] = 1.0 / g.sin_colat[row];
        cot[k] = g.cot_colat[row];
        w11[k] = geo.hess11[k] + h.values[k];
        w22[k] = geo.hess22[k] + h.values[k];
        w12[k] = geo.hess12[k];
    }
    // d(det W) = W22 dW11 + W11 dW22 - 2 W12 dW12 with
    //   dW11 = (Dth2 + I),
    //   dW22 = (sin^-2 Dph2 + cot Dth1 + I),
    //   dW12 = sin^-1 (Dthph - cot Dph1),
    // then subtract T (grad_th Dth1 + grad_ph sin^-1 Dph1 + zero order).
    Sp Js = Sp(w22.asDiagonal() * g.s_th2);
    Js += Sp((w11.array() * inv_sin.array().square()).matrix().asDiagonal() * g.s_ph2);
    Js += Sp((w11.array() * cot.array() - T.array() * geo.grad_theta.array())
                 .matrix()
                 .asDiagonal()
             * g.s_th1);
    Js += Sp((2.0 * w12.array() * inv_sin.array() * cot.array()
              - T.array() * geo.grad_phi.array() * inv_sin.array())
                 .matrix()
                 .asDiagonal()
             * g.s_ph1);
    Js += Sp((-2.0 * w12.array() * inv_sin.array()).matrix().asDiagonal() * g.s_thph);

    Eigen::MatrixXd J = Eigen::MatrixXd(Js);
    J.diagonal() += w11 + w22 - zero_order;
    return J;
}

NewtonResult newton_solve(const SupportField& start, const MeasureDensity& f,
                          const SolveConfig& cfg)
{
    validate_config(cfg);
    NewtonResult res;
    SupportField h = symmetrize_even(start);
    h.p = cfg.p;
    require_same_grid(h, f);
    if (h.values.minCoeff() <= 0.0) {
        res.iterate = h;
        res.residual_sup = std::numeric_limits<double>::infinity();
        res.failure_reason = "start is not positive";
        return res;
    }

    BodyGeometry geo = differentiate(h);
    Eigen::VectorXd r = geo.det_w - nonlinear_term(h, geo, f.values);
    double rs = sup_norm(r);
    res.history.push_back(rs);

    while (rs > cfg.newton_tol && res.iterations < cfg.max_newton_iters) {
        const Eigen::MatrixXd J = assemble_jacobian(h, f);
        const Eigen::VectorXd delta = J.partialPivLu().solve(-r);
        if (!delta.allFinite()) {
            res.failure_reason = "linear solve produced a non-finite step";
            break;
        }

        bool accepted = false;
        SupportField trial = h;
        for (double step = 1.0; step >= cfg.min_step; step *= cfg.backtrack_factor) {
            trial.values = h.values + step * delta;
            trial = symmetrize_even(trial);
            if (trial.values.minCoeff() <= 0.0) continue;
            BodyGeometry tg = differentiate(trial);
            if (cfg.convexity_guard && min_w_eigenvalue(trial, tg) <= 0.0) continue;
            Eigen::VectorXd tr = tg.det_w - nonlinear_term(trial, tg, f.values);
            const double trs = sup_norm(tr);
            if (std::isfinite(trs) && trs < rs) {
                h = std::move(trial);
                geo = std::move(tg);
                r = std::move(tr);
                rs = trs;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            res.failure_reason = "line search stalled";
            break;
        }
        res.history.push_back(rs);
        ++res.iterations;
    }

    res.iterate = std::move(h);
    res.residual_sup = rs;
    res.converged = rs <= cfg.newton_tol;
    if (!res.converged && res.failure_reason.empty())
        res.failure_reason = "newton iteration limit reached";
    return res;
}

AprioriReport apriori_check(const SupportField& h, const MeasureDensity& f)
{
    require_same_grid(h, f);
    AprioriReport rep;
    rep.min_support = h.values.minCoeff();
    rep.max_support = h.values.maxCoeff();
    if (rep.min_support <= 0.0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rep.min_norm = rep.max_norm = rep.min_eigenvalue = rep.max_eigenvalue = nan;
        rep.residual_sup = nan;
        return rep;
    }
    const BodyGeometry geo = differentiate(h);
    const Eigen::ArrayXd norm =
        (geo.grad_norm2.array() + h.values.array().square()).sqrt();
    rep.min_norm = norm.minCoeff();
    rep.max_norm = norm.maxCoeff();
    rep.min_eigenvalue = std::numeric_limits<double>::infinity();
    rep.max_eigenvalue = -std::numeric_limits<double>::infinity();
    if (h.dim() == 2) {
        rep.min_eigenvalue = geo.det_w.minCoeff();
        rep.max_eigenvalue = geo.det_w.maxCoeff();
    } else {
        for (Eigen::Index k = 0; k < h.values.size(); ++k) {
            const double w11 = geo.hess11[k] + h.values[k];
            const double w22 = geo.hess22[k] + h.values[k];
            const double mid = 0.5 * (w11 + w22), off = 0.5 * (w11 - w22);
            const double half_gap = std::sqrt(off * off + geo.hess12[k] * geo.hess12[k]);
            rep.min_eigenvalue = std::min(rep.min_eigenvalue, mid - half_gap);
            rep.max_eigenvalue = std::max(rep.max_eigenvalue, mid + half_gap);
        }
    }
    rep.residual_sup = sup_norm(geo.det_w - nonlinear_term(h, geo, f.values));
    rep.eigenvalue_flagged = rep.min_eigenvalue < 1e-6;
    rep.passed = rep.min_support > 0.0 && rep.min_norm > 0.0 && rep.min_eigenvalue > 0.0
                 && std::isfinite(rep.max_support) && std::isfinite(rep.max_norm)
                 && std::isfinite(rep.max_eigenvalue) && std::isfinite(rep.residual_sup);
    return rep;
}

AprioriReport apriori_check(const SolveReport& report, const MeasureDensity& f)
{
    return apriori_check(report.solution, f);
}

SolveReport homotopy_solve(const MeasureDensity& f, const SolveConfig& cfg)
{
    validate_config(cfg);
    SolveReport rep;
    rep.branch = cfg.branch;
    if (!f.grid) throw std::invalid_argument("homotopy_solve: missing grid");
    const DirectionGrid& g = *f.grid;
    const int n = g.dim;
    if (f.values.size() != static_cast<Eigen::Index>(g.node_count()))
        throw std::invalid_argument("homotopy_solve: density size does not match its grid");
    if (f.values.minCoeff() <= 0.0)
        throw std::invalid_argument("homotopy_solve: density must be positive");
    if (!is_even(f.values, g))
        throw std::invalid_argument("homotopy_solve: density must be even");

    const double l1 = g.weights.dot(f.values);
    const double K = std::pow(SQRT_2PI, n);
    rep.mass_threshold_ok = l1 < mass_threshold(n, cfg.p);

    // Pick the branch root of the averaged problem, nudging the mean away
    // from spectral resonances of the linearization when necessary.
    const double mean = l1 / g.weights.sum();
    const double factors[] = {1.0, 0.99, 1.01, 0.98, 1.02, 0.95, 1.05};
    double c0 = 0.0, r0 = 0.0;
    bool seeded = false;
    std::string why_not = "averaged density admits no isotropic start";
    for (const double fac : factors) {
        const double c = mean * fac;
        if (count_constant_solutions(n, cfg.p, K * c) < 2) {
            why_not = "averaged density at or above the isotropic threshold";
            continue;
        }
        const auto roots = solve_constant_roots(n, cfg.p, K * c);
        const double r = (cfg.branch == Branch::small) ? roots.front() : roots.back();
        const double nu = (n - cfg.p) - r * r;
        double sep = std::fabs(nu);
        for (int k = 1; k <= 10; ++k)
            sep = std::min(sep, std::fabs(nu - static_cast<double>(k) * (k + n - 2)));
        if (sep < 1e-8) {
            why_not = "isotropic start linearization is singular";
            continue;
        }
        c0 = c;
        r0 = r;
        seeded = true;
        break;
    }
    if (!seeded) {
        rep.failure_reason = why_not;
        return rep;
    }

    SupportField h = constant_field(f.grid, r0, cfg.p);
    MeasureDensity ft{f.grid, Eigen::VectorXd(), 0.0};
    const auto set_ft = [&](double t) {
        ft.values = (t * f.values.array() + (1.0 - t) * c0).matrix();
        ft.l1_norm = g.weights.dot(ft.values);
    };
    const auto gamma_of = [](const SupportField& s) {
        return convexity_check(s).is_convex ? gaussian_volume(s)
                                            : std::numeric_limits<double>::quiet_NaN();
    };

    set_ft(0.0);
    {
        const BodyGeometry geo = differentiate(h);
        rep.residual_sup = sup_norm(geo.det_w - nonlinear_term(h, geo, ft.values));
    }
    rep.homotopy_trace.push_back({0.0, gamma_of(h), rep.residual_sup});

    double t = 0.0, dt = cfg.homotopy_dt_init;
    while (t < 1.0) {
        const double t_next = std::min(1.0, t + dt);
        set_ft(t_next);
        NewtonResult nr = newton_solve(h, ft, cfg);
        if (nr.converged) {
            h = std::move(nr.iterate);
            t = t_next;
            rep.residual_sup = nr.residual_sup;
            rep.newton_history = std::move(nr.history);
            rep.homotopy_trace.push_back({t, gamma_of(h), rep.residual_sup});
            dt = std::min(cfg.homotopy_dt_init, 2.0 * dt);
        } else {
            dt *= 0.5;
            if (dt < cfg.homotopy_dt_min) {
                rep.failure_reason = "homotopy step underflow near t = " + std::to_string(t_next)
                                     + " (" + nr.failure_reason + ")";
                rep.solution = std::move(h);
                rep.gamma_n = rep.homotopy_trace.back().gamma_n;
                return rep;
            }
        }
    }

    rep.solution = std::move(h);
    rep.gamma_n = rep.homotopy_trace.back().gamma_n;
    for (std::size_t i = 1; i < rep.homotopy_trace.size(); ++i) {
        const double a = rep.homotopy_trace[i - 1].gamma_n - 0.5;
        const double b = rep.homotopy_trace[i].gamma_n - 0.5;
        if (std::isfinite(a) && std::isfinite(b) && (a == 0.0 || b == 0.0 || (a < 0.0) != (b < 0.0)))
            rep.gamma_crossed_half = true;
    }
    rep.apriori = apriori_check(rep.solution, f);
    rep.converged = rep.apriori.residual_sup <= cfg.newton_tol;
    if (!rep.converged)
        rep.failure_reason = "independent residual re-check exceeded the newton tolerance";
    return rep;
}

}  // namespace gmink
