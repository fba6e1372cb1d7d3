#include "linboltz/collision.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "linboltz/rules.hpp"

namespace linboltz {

namespace {

constexpr char kCacheMagic[8] = {'L', 'B', 'O', 'P', 'C', 'A', 'C', 'H'};
constexpr std::uint32_t kCacheVersion = 1;

// angular quadrature nodes on S^{n-1} with q(theta) smooth per segment.
// 2D: per-quadrant Gauss-Legendre in the polar angle (|cos| is smooth on each
// quadrant). 3D: two polar panels split at the equator times uniform azimuth.
struct AngularRule {
    // unit vectors, row-major dim entries each
    std::vector<double> omega;
    std::vector<double> weight;
    int dim = 0;
    std::size_t size() const { return weight.size(); }
};

AngularRule angular_rule(int dim, int total_nodes) {
    AngularRule rule;
    rule.dim = dim;
    if (dim == 2) {
        const int per_quadrant = std::max(2, total_nodes / 4);
        for (int q = 0; q < 4; ++q) {
            Rule1D r = gauss_legendre(per_quadrant, q * 0.5 * std::numbers::pi,
                                      (q + 1) * 0.5 * std::numbers::pi);
            for (std::size_t k = 0; k < r.nodes.size(); ++k) {
                rule.omega.push_back(std::cos(r.nodes[k]));
                rule.omega.push_back(std::sin(r.nodes[k]));
                rule.weight.push_back(r.weights[k]);
            }
        }
    } else if (dim == 3) {
        const int n_az = std::max(4, static_cast<int>(std::sqrt(2.0 * total_nodes)));
        const int n_pol = std::max(2, total_nodes / n_az / 2);
        for (int panel = 0; panel < 2; ++panel) {
            Rule1D r = gauss_legendre(n_pol, panel == 0 ? -1.0 : 0.0, panel == 0 ? 0.0 : 1.0);
            for (std::size_t k = 0; k < r.nodes.size(); ++k) {
                const double c = r.nodes[k];
                const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
                for (int a = 0; a < n_az; ++a) {
                    const double az = 2.0 * std::numbers::pi * (a + 0.5) / n_az;
                    rule.omega.push_back(s * std::cos(az));
                    rule.omega.push_back(s * std::sin(az));
                    rule.omega.push_back(c);
                    rule.weight.push_back(r.weights[k] * 2.0 * std::numbers::pi / n_az);
                }
            }
        }
    } else {
        throw std::invalid_argument("angular_rule: only n = 2, 3 supported");
    }
    return rule;
}

// log of the normalized Gaussian at a node
inline double log_maxwellian(const std::vector<double>& xi) {
    double r2 = 0.0;
    for (double v : xi) r2 += v * v;
    return -0.5 * r2 - 0.5 * xi.size() * std::log(2.0 * std::numbers::pi);
}

// cubic Lagrange stencil along one axis: 4 consecutive grid indices and
// weights, exact for per-axis cubics even with the one-sided shift near the
// edges
struct AxisStencil {
    int base = 0;        // first of 4 indices
    double w[4] = {0, 0, 0, 0};
};

inline bool axis_stencil(const VelocityGrid& g, double y, AxisStencil& st) {
    if (std::abs(y) > g.extent) return false;  // outside the box: drop
    const double u = (y + g.extent) / g.spacing() - 0.5;  // node-index coordinate
    int lo = static_cast<int>(std::floor(u)) - 1;
    lo = std::max(0, std::min(lo, g.per_axis - 4));
    const double t = u - lo;
    // Lagrange weights on local positions 0,1,2,3
    st.base = lo;
    st.w[0] = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    st.w[1] = t * (t - 2.0) * (t - 3.0) / 2.0;
    st.w[2] = -t * (t - 1.0) * (t - 3.0) / 2.0;
    st.w[3] = t * (t - 1.0) * (t - 2.0) / 6.0;
    return true;
}

}  // namespace

VelocityGrid make_velocity_grid(int n, int m, double extent) {
    if (n < 1 || n > 3) throw std::invalid_argument("make_velocity_grid: n in {1,2,3}");
    if (m < 4) throw std::invalid_argument("make_velocity_grid: need m >= 4");
    if (extent <= 0.0) throw std::invalid_argument("make_velocity_grid: need extent > 0");
    VelocityGrid g;
    g.dim = n;
    g.per_axis = m;
    g.extent = extent;
    return g;
}

Eigen::VectorXd build_nu(const VelocityGrid& grid, double gamma, double q0,
                         const CollisionBuildOptions& opts) {
    if (gamma < 0.0) throw std::invalid_argument("build_nu: gamma >= 0 required");
    if (q0 <= 0.0) throw std::invalid_argument("build_nu: q0 > 0 required");
    const std::size_t N = grid.size();
    Eigen::VectorXd nu(N);

    // angular factor: int q(theta) domega is independent of the direction of
    // xi - xi*, so it factors out of the xi* integral
    AngularRule ang = angular_rule(grid.dim, opts.angle_nodes);
    double a_q = 0.0;
    for (std::size_t c = 0; c < ang.size(); ++c) {
        // reference direction e1; theta measured against it
        a_q += ang.weight[c] * q0 * std::abs(ang.omega[c * grid.dim + 0]);
    }

    VelocityQuadrature hq = hermite_rule(opts.hermite_nodes, grid.dim);
    for (std::size_t k = 0; k < N; ++k) {
        const std::vector<double> xi = grid.node(k);
        if (gamma == 0.0) {
            nu(k) = a_q;  // Maxwellian mass is one
            continue;
        }
        const double integral = velocity_moment(
            [&](std::span<const double> xs) {
                double d2 = 0.0;
                for (int i = 0; i < grid.dim; ++i) {
                    const double d = xi[i] - xs[i];
                    d2 += d * d;
                }
                return std::pow(d2, 0.5 * gamma);
            },
            hq);
        nu(k) = a_q * integral;
    }
    return nu;
}

CollisionOperator build_collision_operator(const VelocityGrid& grid, double gamma, double q0,
                                           const CollisionBuildOptions& opts) {
    const int n = grid.dim;
    const std::size_t N = grid.size();
    if (N > 40000)
        throw std::invalid_argument("build_collision_operator: grid too large for dense build");

    CollisionOperator op;
    op.grid = grid;
    op.gamma = gamma;
    op.q0 = q0;
    op.nu = build_nu(grid, gamma, q0, opts);

    AngularRule ang = angular_rule(n, opts.angle_nodes);

    // node coordinates and Maxwellian weights
    std::vector<std::vector<double>> coords(N);
    std::vector<double> logM(N);
    for (std::size_t k = 0; k < N; ++k) {
        coords[k] = grid.node(k);
        logM[k] = log_maxwellian(coords[k]);
    }
    const double log_cutoff = std::log(opts.mass_cutoff);

    // quadratic form of the collision Dirichlet form in g = f / sqrt(M):
    //   <L f, f> = 1/4 iint B M M* (g' + g*' - g - g*)^2
    // accumulated as rank-one updates G += coef * phi phi^T over all velocity
    // pairs and angles; post-collision values enter through cubic Lagrange
    // stencils, so 1, xi, |xi|^2 are annihilated exactly.
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(N, N);

    const double w_cell = grid.cell_weight();
    const int max_entries = 2 + 2 * (n == 2 ? 16 : 64);
    std::vector<int> idx(max_entries);
    std::vector<double> val(max_entries);
    std::vector<double> xi_post(n), xis_post(n);
    std::vector<AxisStencil> st_a(n), st_b(n);

    for (std::size_t a = 0; a < N; ++a) {
        for (std::size_t b = a + 1; b < N; ++b) {
            const double logMM = logM[a] + logM[b];
            if (logMM < log_cutoff) continue;
            const double mass = std::exp(logMM);

            double d2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const double d = coords[a][i] - coords[b][i];
                d2 += d * d;
            }
            const double dn = std::sqrt(d2);
            const double b_base = (gamma == 0.0 ? 1.0 : std::pow(d2, 0.5 * gamma)) * q0;

            for (std::size_t c = 0; c < ang.size(); ++c) {
                const double* om = &ang.omega[c * n];
                double proj = 0.0;
                for (int i = 0; i < n; ++i) proj += (coords[a][i] - coords[b][i]) * om[i];
                const double cos_theta = proj / dn;
                const double bq = b_base * std::abs(cos_theta) * ang.weight[c];
                if (bq == 0.0) continue;

                // post-collision velocities; a gain landing outside the box
                // is discarded (g reads zero there) while the loss part of
                // the pair stays, so energetic nodes keep their full damping.
                // The small conservation defect this creates is removed by
                // the invariant-subspace correction below.
                bool gain_a = true, gain_b = true;
                for (int i = 0; i < n; ++i) {
                    xi_post[i] = coords[a][i] - proj * om[i];
                    xis_post[i] = coords[b][i] + proj * om[i];
                    gain_a = gain_a && std::abs(xi_post[i]) <= grid.extent;
                    gain_b = gain_b && std::abs(xis_post[i]) <= grid.extent;
                }
                if (gain_a)
                    for (int i = 0; i < n; ++i) gain_a = gain_a && axis_stencil(grid, xi_post[i], st_a[i]);
                if (gain_b)
                    for (int i = 0; i < n; ++i) gain_b = gain_b && axis_stencil(grid, xis_post[i], st_b[i]);

                // assemble phi = S' + S*' - e_a - e_b, scaled by sqrt(coef)
                // (factor 2 for the mirrored ordered pair)
                const double coef = 0.5 * w_cell * bq * mass;  // 2 * (1/4) * w^2 / w
                const double s = std::sqrt(coef);
                int ne = 0;
                idx[ne] = static_cast<int>(a);
                val[ne++] = -s;
                idx[ne] = static_cast<int>(b);
                val[ne++] = -s;
                if (n == 2) {
                    if (gain_a)
                        for (int i0 = 0; i0 < 4; ++i0)
                            for (int i1 = 0; i1 < 4; ++i1) {
                                idx[ne] = (st_a[0].base + i0) * grid.per_axis + (st_a[1].base + i1);
                                val[ne++] = s * st_a[0].w[i0] * st_a[1].w[i1];
                            }
                    if (gain_b)
                        for (int i0 = 0; i0 < 4; ++i0)
                            for (int i1 = 0; i1 < 4; ++i1) {
                                idx[ne] = (st_b[0].base + i0) * grid.per_axis + (st_b[1].base + i1);
                                val[ne++] = s * st_b[0].w[i0] * st_b[1].w[i1];
                            }
                } else {
                    if (gain_a)
                        for (int i0 = 0; i0 < 4; ++i0)
                            for (int i1 = 0; i1 < 4; ++i1)
                                for (int i2 = 0; i2 < 4; ++i2) {
                                    idx[ne] = ((st_a[0].base + i0) * grid.per_axis +
                                               (st_a[1].base + i1)) * grid.per_axis +
                                              (st_a[2].base + i2);
                                    val[ne++] = s * st_a[0].w[i0] * st_a[1].w[i1] * st_a[2].w[i2];
                                }
                    if (gain_b)
                        for (int i0 = 0; i0 < 4; ++i0)
                            for (int i1 = 0; i1 < 4; ++i1)
                                for (int i2 = 0; i2 < 4; ++i2) {
                                    idx[ne] = ((st_b[0].base + i0) * grid.per_axis +
                                               (st_b[1].base + i1)) * grid.per_axis +
                                              (st_b[2].base + i2);
                                    val[ne++] = s * st_b[0].w[i0] * st_b[1].w[i1] * st_b[2].w[i2];
                                }
                }
                // combine duplicate indices (overlapping stencils) so the
                // rank-one update below stays exact
                int nc = 0;
                for (int p = 0; p < ne; ++p) {
                    int hit = -1;
                    for (int r = 0; r < nc; ++r)
                        if (idx[r] == idx[p]) {
                            hit = r;
                            break;
                        }
                    if (hit >= 0) {
                        val[hit] += val[p];
                    } else {
                        idx[nc] = idx[p];
                        val[nc++] = val[p];
                    }
                }
                // upper triangle of the rank-one update
                for (int p = 0; p < nc; ++p) {
                    const int ip = idx[p];
                    const double vp = val[p];
                    for (int r = p; r < nc; ++r) {
                        const int ir = idx[r];
                        if (ip <= ir)
                            G(ip, ir) += vp * val[r];
                        else
                            G(ir, ip) += vp * val[r];
                    }
                }
            }
        }
    }
    // mirror the upper triangle
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) G(j, i) = G(i, j);

    // back to f-space: L = D^{-1/2} G D^{-1/2}, D = diag(M)
    Eigen::VectorXd inv_sqrt_m(N);
    for (std::size_t k = 0; k < N; ++k) inv_sqrt_m(k) = std::exp(-0.5 * logM[k]);
    Eigen::MatrixXd L = inv_sqrt_m.asDiagonal() * G * inv_sqrt_m.asDiagonal();

    // conservation correction: compress onto the complement of the discrete
    // invariants. The interior stencils annihilate them exactly; what remains
    // is the small defect from gains discarded at the box boundary. A large
    // correction signals a grid too coarse to trust.
    Projection proj = projection_P(grid);
    Eigen::MatrixXd LB = L * proj.basis;  // N x (n+2)
    Eigen::MatrixXd corr = LB * proj.basis.transpose();
    Eigen::MatrixXd corrT = corr.transpose();
    Eigen::MatrixXd Lc = L - corr - corrT + proj.basis * (proj.basis.transpose() * LB) *
                                                proj.basis.transpose();
    const double l_norm = L.norm();
    op.correction_magnitude = l_norm > 0.0 ? (L - Lc).norm() / l_norm : 0.0;
    if (op.correction_magnitude > opts.correction_limit)
        throw std::runtime_error(
            "build_collision_operator: conservation correction exceeds limit; grid too "
            "coarse");
    L = 0.5 * (Lc + Lc.transpose());  // exact symmetry
    op.conservation_corrected = true;

    op.K = -L;
    op.K.diagonal() += op.nu;
    return op;
}

Projection projection_P(const VelocityGrid& grid) {
    const int n = grid.dim;
    const std::size_t N = grid.size();
    Eigen::MatrixXd raw(N, n + 2);
    for (std::size_t k = 0; k < N; ++k) {
        const std::vector<double> xi = grid.node(k);
        const double sm = std::exp(0.5 * log_maxwellian(xi));
        raw(k, 0) = sm;
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            raw(k, 1 + i) = xi[i] * sm;
            r2 += xi[i] * xi[i];
        }
        raw(k, n + 1) = r2 * sm;
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(N, n + 2);
    Projection p;
    p.basis = q;
    return p;
}

double coercivity_lambda0(const CollisionOperator& op, const Projection& proj) {
    const std::size_t N = op.grid.size();
    const int k = static_cast<int>(proj.basis.cols());
    Eigen::MatrixXd L = op.L();

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(proj.basis);
    Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(N, N);
    Eigen::MatrixXd Z = full.rightCols(N - k);

    Eigen::MatrixXd A = Z.transpose() * L * Z;
    Eigen::MatrixXd B = Z.transpose() * op.nu.asDiagonal() * Z;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
        0.5 * (A + A.transpose()), 0.5 * (B + B.transpose()));
    const double lambda0 = ges.eigenvalues()(0);
    if (!(lambda0 > 0.0))
        throw std::runtime_error("coercivity_lambda0: nonpositive spectral gap; "
                                 "discretization is inconsistent");
    return lambda0;
}

namespace {

template <typename T>
void write_pod(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
bool read_pod(std::ifstream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return static_cast<bool>(is);
}

}  // namespace

void save_operator_cache(const std::string& path, const CollisionOperator& op,
                         const CollisionBuildOptions& opts) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("save_operator_cache: cannot open " + path);
    os.write(kCacheMagic, sizeof(kCacheMagic));
    write_pod(os, kCacheVersion);
    write_pod(os, static_cast<std::uint32_t>(op.grid.dim));
    write_pod(os, static_cast<std::uint32_t>(op.grid.per_axis));
    write_pod(os, op.grid.extent);
    write_pod(os, op.gamma);
    write_pod(os, op.q0);
    write_pod(os, static_cast<std::uint32_t>(opts.hermite_nodes));
    write_pod(os, static_cast<std::uint32_t>(opts.angle_nodes));
    write_pod(os, opts.mass_cutoff);
    write_pod(os, op.correction_magnitude);
    const std::size_t N = op.grid.size();
    os.write(reinterpret_cast<const char*>(op.nu.data()),
             static_cast<std::streamsize>(N * sizeof(double)));
    os.write(reinterpret_cast<const char*>(op.K.data()),
             static_cast<std::streamsize>(N * N * sizeof(double)));
    if (!os) throw std::runtime_error("save_operator_cache: write failed");
}

std::optional<CollisionOperator> load_operator_cache(const std::string& path,
                                                     const VelocityGrid& grid, double gamma,
                                                     double q0,
                                                     const CollisionBuildOptions& opts) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) return std::nullopt;
    std::uint32_t version, dim, per_axis, hermite, angle;
    double extent, g, q, cutoff, corr;
    if (!read_pod(is, version) || version != kCacheVersion) return std::nullopt;
    if (!read_pod(is, dim) || !read_pod(is, per_axis) || !read_pod(is, extent) ||
        !read_pod(is, g) || !read_pod(is, q) || !read_pod(is, hermite) ||
        !read_pod(is, angle) || !read_pod(is, cutoff) || !read_pod(is, corr))
        return std::nullopt;
    if (static_cast<int>(dim) != grid.dim || static_cast<int>(per_axis) != grid.per_axis ||
        extent != grid.extent || g != gamma || q != q0 ||
        static_cast<int>(hermite) != opts.hermite_nodes ||
        static_cast<int>(angle) != opts.angle_nodes || cutoff != opts.mass_cutoff)
        return std::nullopt;

    CollisionOperator op;
    op.grid = grid;
    op.gamma = gamma;
    op.q0 = q0;
    op.conservation_corrected = true;
    op.correction_magnitude = corr;
    const std::size_t N = grid.size();
    op.nu.resize(N);
    op.K.resize(N, N);
    is.read(reinterpret_cast<char*>(op.nu.data()),
            static_cast<std::streamsize>(N * sizeof(double)));
    is.read(reinterpret_cast<char*>(op.K.data()),
            static_cast<std::streamsize>(N * N * sizeof(double)));
    if (!is) return std::nullopt;
    return op;
}

}  // namespace linboltz
