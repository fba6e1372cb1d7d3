#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace linboltz {

// Uniform, cell-centered tensor grid on [-R, R]^n. The node set is symmetric
// under xi -> -xi.
struct VelocityGrid {
    int dim = 0;
    int per_axis = 0;
    double extent = 0.0;  // R

    std::size_t size() const {
        std::size_t s = 1;
        for (int i = 0; i < dim; ++i) s *= per_axis;
        return s;
    }
    double spacing() const { return 2.0 * extent / per_axis; }
    double cell_weight() const {
        double w = 1.0;
        for (int i = 0; i < dim; ++i) w *= spacing();
        return w;
    }
    double axis_coord(int k) const { return -extent + (k + 0.5) * spacing(); }
    std::vector<double> node(std::size_t flat) const {
        std::vector<double> x(dim);
        for (int i = dim - 1; i >= 0; --i) {
            x[i] = axis_coord(static_cast<int>(flat % per_axis));
            flat /= per_axis;
        }
        return x;
    }
};

VelocityGrid make_velocity_grid(int n, int m, double extent);

struct CollisionBuildOptions {
    int hermite_nodes = 32;     // for nu
    int angle_nodes = 48;       // total angular nodes (per-quadrant GL in 2D)
    double mass_cutoff = 1e-20; // skip pairs with M_a M_b below this
    double correction_limit = 0.01;
};

// Discrete linearized collision operator L = diag(nu) - K on the grid.
// Built so that L is symmetric positive semidefinite with the discretized
// collision invariants {sqrt M, xi_i sqrt M, |xi|^2 sqrt M} in its kernel.
struct CollisionOperator {
    VelocityGrid grid;
    double gamma = 0.0;
    double q0 = 1.0;
    Eigen::VectorXd nu;  // multiplication part
    Eigen::MatrixXd K;   // gain part, dense symmetric
    bool conservation_corrected = false;
    double correction_magnitude = 0.0;  // ||L - P L P||_F / ||L||_F before correction

    Eigen::MatrixXd L() const {
        Eigen::MatrixXd M = -K;
        M.diagonal() += nu;
        return M;
    }
};

// nu(xi) = int |xi - xi*|^gamma q(theta) M(xi*) domega dxi*, with
// q(theta) = q0 |cos theta|.
Eigen::VectorXd build_nu(const VelocityGrid& grid, double gamma, double q0,
                         const CollisionBuildOptions& opts = {});

CollisionOperator build_collision_operator(const VelocityGrid& grid, double gamma, double q0,
                                           const CollisionBuildOptions& opts = {});

// Orthogonal projection onto the discrete span of the collision invariants.
struct Projection {
    Eigen::MatrixXd basis;  // N x (n+2), orthonormal in the plain dot product
    Eigen::VectorXd apply(const Eigen::VectorXd& f) const {
        return basis * (basis.transpose() * f);
    }
};

Projection projection_P(const VelocityGrid& grid);

// Smallest eigenvalue of nu^{-1/2} L nu^{-1/2} on the orthogonal complement
// of ker L (generalized eigenproblem L g = lambda diag(nu) g on that
// subspace). Throws if the result is not positive.
double coercivity_lambda0(const CollisionOperator& op, const Projection& proj);

// Binary cache keyed by (n, m, R, gamma, q0, build options). A hit is
// bit-identical to a single-threaded rebuild because assembly is
// deterministic and single-threaded.
void save_operator_cache(const std::string& path, const CollisionOperator& op,
                         const CollisionBuildOptions& opts);
std::optional<CollisionOperator> load_operator_cache(const std::string& path,
                                                     const VelocityGrid& grid, double gamma,
                                                     double q0,
                                                     const CollisionBuildOptions& opts);

}  // namespace linboltz
