#pragma once
#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <string>
#include <vector>

namespace gmink {

/// Resolution request: S^1 grids use `n`, S^2 grids use `n_lat` x `n_lon`.
struct GridResolution {
    int n = 0;
    int n_lat = 0;
    int n_lon = 0;

    bool operator==(const GridResolution&) const = default;
};

/// Quadrature/differentiation grid of unit directions on S^1 or S^2.
///
/// S^1: n uniformly spaced angles, weight 2*pi/n each; differentiation is
/// spectral (dense trigonometric differentiation matrices, exact for
/// trigonometric polynomials of degree < n/2).
///
/// S^2: Gauss-Legendre colatitudes x uniform longitudes with product
/// weights; poles are excluded.  Differentiation uses 4th-order centered
/// finite differences: periodic in longitude, and closed over the poles in
/// latitude (a stencil row crossing a pole reads the antipodal-in-longitude
/// column of the mirrored latitude row).
///
/// Node coordinates are stored SoA for the SIMD kernels.  Antipodal pairs
/// have exactly negated coordinates, so even symmetry can be enforced and
/// tested exactly.
struct DirectionGrid {
    int dim = 2;  // ambient dimension n (2 or 3)
    GridResolution res;

    std::vector<double> xs, ys, zs;  // zs empty for dim == 2
    Eigen::VectorXd weights;
    std::vector<int> antipode;  // node index of -u

    // S^1 data
    Eigen::VectorXd theta;
    Eigen::MatrixXd d1, d2;  // spectral differentiation matrices

    // S^2 data (row-major node index = lat * n_lon + lon)
    Eigen::VectorXd colat;                 // per latitude row
    Eigen::VectorXd sin_colat, cot_colat;  // per latitude row
    double lon_step = 0.0;
    // 4th-order derivative operators acting on per-node value vectors
    Eigen::SparseMatrix<double, Eigen::RowMajor> s_th1, s_th2, s_ph1, s_ph2, s_thph;

    std::size_t node_count() const { return xs.size(); }
    int lat_of(std::size_t i) const { return static_cast<int>(i) / res.n_lon; }
    int lon_of(std::size_t i) const { return static_cast<int>(i) % res.n_lon; }
    Eigen::Vector3d node(std::size_t i) const
    {
        return {xs[i], ys[i], dim == 3 ? zs[i] : 0.0};
    }

    bool same_layout(const DirectionGrid& o) const
    {
        return dim == o.dim && res == o.res;
    }
};

/// Build a grid.  dim must be 2 or 3; every angular resolution must be even
/// and >= 8 (evenness makes the node set antipodally closed).
std::shared_ptr<const DirectionGrid> build_grid(int dim, GridResolution res);
std::shared_ptr<const DirectionGrid> build_grid_s1(int n);
std::shared_ptr<const DirectionGrid> build_grid_s2(int n_lat, int n_lon);

/// Default grid used by the CLI and the property suites: 256 on S^1,
/// 32 x 64 on S^2.
std::shared_ptr<const DirectionGrid> default_grid(int dim);

/// Replace v by its even part: antipodal pairs share the exact average.
Eigen::VectorXd symmetrize_even(const Eigen::VectorXd& v, const DirectionGrid& g);

/// True iff v[i] == v[antipode(i)] exactly for all i.
bool is_even(const Eigen::VectorXd& v, const DirectionGrid& g);

/// Parse "256" or "32x64" into a resolution (used by the CLI and file I/O).
GridResolution parse_resolution(const std::string& text);
std::string format_resolution(const GridResolution& res, int dim);

}  // namespace gmink
