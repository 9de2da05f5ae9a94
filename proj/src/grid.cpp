#include "gmink/grid.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace gmink {

namespace {

const double PI = 3.14159265358979323846;

void require_even_resolution(int v, const char* what)
{
    if (v < 8 || (v % 2) != 0)
        throw std::invalid_argument(std::string(what) +
                                    " must be even and at least 8, got " + std::to_string(v));
}

/// Gauss-Legendre nodes (descending) and weights on [-1, 1].  Newton on the
/// Legendre recurrence; the negative half mirrors the positive half exactly
/// so that antipodal latitude rows carry exactly negated abscissae.
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w)
{
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    const int half = m / 2;
    for (int k = 0; k < half; ++k) {
        // k-th root counted from x = +1
        double xi = std::cos(PI * (k + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = xi;
            for (int j = 2; j <= m; ++j) {
                double p2 = ((2 * j - 1) * xi * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (xi * p1 - p0) / (xi * xi - 1.0);
            double step = p1 / dp;
            xi -= step;
            if (std::fabs(step) < 1e-15) break;
        }
        double p0 = 1.0, p1 = xi;
        for (int j = 2; j <= m; ++j) {
            double p2 = ((2 * j - 1) * xi * p1 - (j - 1) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = m * (xi * p1 - p0) / (xi * xi - 1.0);
        x[k] = xi;
        w[k] = 2.0 / ((1.0 - xi * xi) * dp * dp);
        x[m - 1 - k] = -xi;
        w[m - 1 - k] = w[k];
    }
}

/// Fornberg finite-difference weights: c(i, k) is the weight of node xs[i]
/// in the k-th derivative at x0.  Exact for arbitrary node spacing.
Eigen::MatrixXd fd_weights(double x0, const std::vector<double>& xs, int max_order)
{
    const int n = static_cast<int>(xs.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, max_order + 1);
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_order);
        double c2 = 1.0;
        double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c;
}

}  // namespace

std::shared_ptr<const DirectionGrid> build_grid_s1(int n)
{
    require_even_resolution(n, "S^1 resolution");
    auto g = std::make_shared<DirectionGrid>();
    g->dim = 2;
    g->res = GridResolution{n, 0, 0};

    const int half = n / 2;
    g->theta.resize(n);
    g->xs.resize(n);
    g->ys.resize(n);
    g->weights = Eigen::VectorXd::Constant(n, 2.0 * PI / n);
    g->antipode.resize(n);
    for (int j = 0; j < n; ++j) {
        g->theta[j] = 2.0 * PI * j / n;
        g->antipode[j] = (j + half) % n;
    }
    for (int j = 0; j < half; ++j) {
        g->xs[j] = std::cos(g->theta[j]);
        g->ys[j] = std::sin(g->theta[j]);
        g->xs[j + half] = -g->xs[j];  // exact antipodal negation
        g->ys[j + half] = -g->ys[j];
    }

    // Trigonometric differentiation matrices for an even number of nodes.
    const double h = 2.0 * PI / n;
    g->d1 = Eigen::MatrixXd::Zero(n, n);
    g->d2 = Eigen::MatrixXd::Zero(n, n);
    const double diag2 = -PI * PI / (3.0 * h * h) - 1.0 / 6.0;
    for (int i = 0; i < n; ++i) {
        g->d2(i, i) = diag2;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int d = i - j;
            const double sign = (d & 1) ? -1.0 : 1.0;
            const double half_angle = 0.5 * h * d;
            g->d1(i, j) = 0.5 * sign / std::tan(half_angle);
            const double s = std::sin(half_angle);
            g->d2(i, j) = -sign / (2.0 * s * s);
        }
    }
    return g;
}

std::shared_ptr<const DirectionGrid> build_grid_s2(int n_lat, int n_lon)
{
    require_even_resolution(n_lat, "S^2 latitude resolution");
    require_even_resolution(n_lon, "S^2 longitude resolution");
    auto g = std::make_shared<DirectionGrid>();
    g->dim = 3;
    g->res = GridResolution{0, n_lat, n_lon};

    std::vector<double> glx, glw;
    gauss_legendre(n_lat, glx, glw);  // glx descending: north pole first

    g->colat.resize(n_lat);
    g->sin_colat.resize(n_lat);
    g->cot_colat.resize(n_lat);
    for (int i = 0; i < n_lat / 2; ++i) {
        const double th = std::acos(glx[i]);
        g->colat[i] = th;
        g->colat[n_lat - 1 - i] = PI - th;  // exact mirror
        const double s = std::sqrt(1.0 - glx[i] * glx[i]);
        g->sin_colat[i] = s;
        g->sin_colat[n_lat - 1 - i] = s;
        g->cot_colat[i] = glx[i] / s;
        g->cot_colat[n_lat - 1 - i] = -glx[i] / s;
    }

    const int half_lon = n_lon / 2;
    std::vector<double> cphi(n_lon), sphi(n_lon);
    for (int j = 0; j < half_lon; ++j) {
        const double phi = 2.0 * PI * j / n_lon;
        cphi[j] = std::cos(phi);
        sphi[j] = std::sin(phi);
        cphi[j + half_lon] = -cphi[j];  // exact antipodal negation
        sphi[j + half_lon] = -sphi[j];
    }

    const std::size_t total = static_cast<std::size_t>(n_lat) * n_lon;
    g->xs.resize(total);
    g->ys.resize(total);
    g->zs.resize(total);
    g->weights.resize(total);
    g->antipode.resize(total);
    g->lon_step = 2.0 * PI / n_lon;
    for (int i = 0; i < n_lat; ++i) {
        const double s = g->sin_colat[i];
        const double z = glx[i];  // negative half is an exact mirror already
        for (int j = 0; j < n_lon; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * n_lon + j;
            g->xs[k] = s * cphi[j];
            g->ys[k] = s * sphi[j];
            g->zs[k] = z;
            g->weights[k] = glw[i] * g->lon_step;
            g->antipode[k] =
                (n_lat - 1 - i) * n_lon + (j + half_lon) % n_lon;
        }
    }

    // Latitude stencils: rows i-2 .. i+2; rows beyond a pole fold back to the
    // mirrored latitude with a half-turn in longitude.
    struct Slot {
        int row;
        bool shift;
        double pos;
    };
    std::vector<std::array<Slot, 5>> lat(n_lat);
    std::vector<std::array<double, 5>> lat_c1(n_lat), lat_c2(n_lat);
    for (int i = 0; i < n_lat; ++i) {
        for (int s = 0; s < 5; ++s) {
            int r = i - 2 + s;
            Slot slot{};
            if (r < 0) {
                slot.row = -1 - r;
                slot.shift = true;
                slot.pos = -g->colat[slot.row];
            } else if (r >= n_lat) {
                slot.row = 2 * n_lat - 1 - r;
                slot.shift = true;
                slot.pos = 2.0 * PI - g->colat[slot.row];
            } else {
                slot.row = r;
                slot.shift = false;
                slot.pos = g->colat[r];
            }
            lat[i][s] = slot;
        }
        std::vector<double> pos(5);
        for (int s = 0; s < 5; ++s) pos[s] = lat[i][s].pos;
        Eigen::MatrixXd c = fd_weights(g->colat[i], pos, 2);
        for (int s = 0; s < 5; ++s) {
            lat_c1[i][s] = c(s, 1);
            lat_c2[i][s] = c(s, 2);
        }
    }

    // Longitude stencils: uniform periodic 4th-order centered differences.
    const double dp = g->lon_step;
    const double lon_c1[5] = {1.0 / (12 * dp), -8.0 / (12 * dp), 0.0,
                              8.0 / (12 * dp), -1.0 / (12 * dp)};
    const double lon_c2[5] = {-1.0 / (12 * dp * dp), 16.0 / (12 * dp * dp),
                              -30.0 / (12 * dp * dp), 16.0 / (12 * dp * dp),
                              -1.0 / (12 * dp * dp)};

    using T = Eigen::Triplet<double>;
    std::vector<T> t_th1, t_th2, t_ph1, t_ph2;
    t_th1.reserve(total * 5);
    t_th2.reserve(total * 5);
    t_ph1.reserve(total * 4);
    t_ph2.reserve(total * 5);
    for (int i = 0; i < n_lat; ++i) {
        for (int j = 0; j < n_lon; ++j) {
            const int row = i * n_lon + j;
            for (int s = 0; s < 5; ++s) {
                const Slot& slot = lat[i][s];
                const int jj = slot.shift ? (j + half_lon) % n_lon : j;
                const int col = slot.row * n_lon + jj;
                if (lat_c1[i][s] != 0.0) t_th1.emplace_back(row, col, lat_c1[i][s]);
                if (lat_c2[i][s] != 0.0) t_th2.emplace_back(row, col, lat_c2[i][s]);
            }
            for (int s = 0; s < 5; ++s) {
                const int col = i * n_lon + (j - 2 + s + n_lon) % n_lon;
                if (lon_c1[s] != 0.0) t_ph1.emplace_back(row, col, lon_c1[s]);
                t_ph2.emplace_back(row, col, lon_c2[s]);
            }
        }
    }
    const int nn = static_cast<int>(total);
    g->s_th1.resize(nn, nn);
    g->s_th2.resize(nn, nn);
    g->s_ph1.resize(nn, nn);
    g->s_ph2.resize(nn, nn);
    g->s_th1.setFromTriplets(t_th1.begin(), t_th1.end());
    g->s_th2.setFromTriplets(t_th2.begin(), t_th2.end());
    g->s_ph1.setFromTriplets(t_ph1.begin(), t_ph1.end());
    g->s_ph2.setFromTriplets(t_ph2.begin(), t_ph2.end());
    g->s_thph = (g->s_th1 * g->s_ph1).pruned();
    return g;
}

std::shared_ptr<const DirectionGrid> build_grid(int dim, GridResolution res)
{
    if (dim == 2) return build_grid_s1(res.n);
    if (dim == 3) return build_grid_s2(res.n_lat, res.n_lon);
    throw std::invalid_argument("grid dimension must be 2 or 3, got " + std::to_string(dim));
}

std::shared_ptr<const DirectionGrid> default_grid(int dim)
{
    if (dim == 2) return build_grid_s1(256);
    if (dim == 3) return build_grid_s2(32, 64);
    throw std::invalid_argument("grid dimension must be 2 or 3, got " + std::to_string(dim));
}

Eigen::VectorXd symmetrize_even(const Eigen::VectorXd& v, const DirectionGrid& g)
{
    if (static_cast<std::size_t>(v.size()) != g.node_count())
        throw std::invalid_argument("symmetrize_even: value count does not match grid");
    Eigen::VectorXd out(v.size());
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const std::size_t a = static_cast<std::size_t>(g.antipode[i]);
        if (i <= a) {
            const double m = 0.5 * (v[i] + v[a]);
            out[i] = m;
            out[a] = m;
        }
    }
    return out;
}

bool is_even(const Eigen::VectorXd& v, const DirectionGrid& g)
{
    if (static_cast<std::size_t>(v.size()) != g.node_count()) return false;
    for (std::size_t i = 0; i < g.node_count(); ++i)
        if (v[i] != v[g.antipode[i]]) return false;
    return true;
}

GridResolution parse_resolution(const std::string& text)
{
    GridResolution res;
    const auto x = text.find('x');
    try {
        if (x == std::string::npos) {
            std::size_t used = 0;
            res.n = std::stoi(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        } else {
            std::size_t used = 0;
            res.n_lat = std::stoi(text.substr(0, x), &used);
            if (used != x) throw std::invalid_argument(text);
            res.n_lon = std::stoi(text.substr(x + 1), &used);
            if (used != text.size() - x - 1) throw std::invalid_argument(text);
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse grid resolution '" + text + "'");
    }
    return res;
}

std::string format_resolution(const GridResolution& res, int dim)
{
    if (dim == 2) return std::to_string(res.n);
    return std::to_string(res.n_lat) + "x" + std::to_string(res.n_lon);
}

}  // namespace gmink
