#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>

#include "linboltz/collision.hpp"
#include "linboltz/rules.hpp"

using namespace linboltz;

namespace {

// sqrt of the normalized Maxwellian at a grid node
double sqrt_maxwellian(const VelocityGrid& g, std::size_t k) {
    const std::vector<double> xi = g.node(k);
    double r2 = 0.0;
    for (double v : xi) r2 += v * v;
    return std::pow(2.0 * std::numbers::pi, -0.25 * g.dim) * std::exp(-0.25 * r2);
}

Eigen::VectorXd invariant_field(const VelocityGrid& g, int which) {
    Eigen::VectorXd f(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const std::vector<double> xi = g.node(k);
        double mult = 1.0;
        if (which >= 1 && which <= g.dim) mult = xi[which - 1];
        if (which == g.dim + 1) {
            mult = 0.0;
            for (double v : xi) mult += v * v;
        }
        f(k) = mult * sqrt_maxwellian(g, k);
    }
    return f;
}

}  // namespace

TEST_CASE("build_nu") {
    const VelocityGrid g = make_velocity_grid(2, 16, 6.0);

    SUBCASE("gamma = 0 gives the constant 4 q0") {
        // independent angular oracle: int_{S^1} |cos u| du = 4 and the
        // Maxwellian has unit mass, so nu = 4 q0 exactly
        const Eigen::VectorXd nu = build_nu(g, 0.0, 1.0);
        for (int k = 0; k < nu.size(); ++k)
            CHECK(nu(k) == doctest::Approx(4.0).epsilon(1e-8));
        const Eigen::VectorXd nu2 = build_nu(g, 0.0, 2.5);
        CHECK(nu2(0) == doctest::Approx(10.0).epsilon(1e-8));
    }

    SUBCASE("gamma = 1 grows like (1 + |xi|)") {
        const Eigen::VectorXd nu = build_nu(g, 1.0, 1.0);
        double lo = 1e300, hi = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const std::vector<double> xi = g.node(k);
            const double speed = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
            const double ratio = nu(k) / (1.0 + speed);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        CHECK(lo > 0.5);
        CHECK(hi < 8.0);
        CHECK(hi / lo < 5.0);
    }

    SUBCASE("nu is even") {
        const Eigen::VectorXd nu = build_nu(g, 1.0, 1.0);
        const int m = g.per_axis;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const int k = i * m + j;
                const int kneg = (m - 1 - i) * m + (m - 1 - j);
                CHECK(nu(k) == doctest::Approx(nu(kneg)).epsilon(1e-12));
            }
    }
}

TEST_CASE("collision operator structure (n = 2)") {
    const VelocityGrid g = make_velocity_grid(2, 16, 6.0);
    const CollisionOperator op = build_collision_operator(g, 0.0, 1.0);
    const Eigen::MatrixXd L = op.L();
    const double lnorm = L.norm();

    SUBCASE("symmetry") {
        CHECK((L - L.transpose()).cwiseAbs().maxCoeff() < 1e-12 * lnorm);
        CHECK((op.K - op.K.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("discrete invariants are annihilated") {
        for (int which = 0; which < 4; ++which) {
            const Eigen::VectorXd psi = invariant_field(g, which);
            CHECK((L * psi).norm() < 1e-10 * lnorm * psi.norm());
        }
    }

    SUBCASE("self-adjoint on random pairs") {
        std::mt19937_64 rng(1);
        std::normal_distribution<double> N(0.0, 1.0);
        for (int t = 0; t < 20; ++t) {
            Eigen::VectorXd f(g.size()), h(g.size());
            for (std::size_t k = 0; k < g.size(); ++k) {
                f(k) = N(rng);
                h(k) = N(rng);
            }
            const double a = (L * f).dot(h), b = f.dot(L * h);
            CHECK(std::abs(a - b) < 1e-10 * std::abs(a) + 1e-10);
        }
    }

    SUBCASE("positive semidefinite") {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
        const double radius = std::max(std::abs(es.eigenvalues()(0)),
                                       es.eigenvalues()(es.eigenvalues().size() - 1));
        CHECK(es.eigenvalues()(0) >= -1e-10 * radius);

        std::mt19937_64 rng(2);
        std::normal_distribution<double> N(0.0, 1.0);
        for (int t = 0; t < 100; ++t) {
            Eigen::VectorXd f(g.size());
            for (std::size_t k = 0; k < g.size(); ++k) f(k) = N(rng);
            CHECK(f.dot(L * f) >= -1e-10 * radius * f.squaredNorm());
        }
    }

    SUBCASE("kernel dimension is exactly n + 2") {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
        const double radius = std::max(std::abs(es.eigenvalues()(0)),
                                       es.eigenvalues()(es.eigenvalues().size() - 1));
        int kernel = 0;
        for (int k = 0; k < es.eigenvalues().size(); ++k)
            if (std::abs(es.eigenvalues()(k)) < 1e-8 * radius) ++kernel;
        CHECK(kernel == 4);
    }

    SUBCASE("conservation correction is tiny") {
        CHECK(op.conservation_corrected);
        CHECK(op.correction_magnitude < 1e-3);
    }
}

TEST_CASE("projection onto ker L") {
    const VelocityGrid g = make_velocity_grid(2, 16, 6.0);
    const Projection P = projection_P(g);

    SUBCASE("basis members are fixed points") {
        const Eigen::VectorXd sm = invariant_field(g, 0);
        CHECK((P.apply(sm) - sm).norm() < 1e-12 * sm.norm());
    }
    SUBCASE("P (I - P) = 0") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> N(0.0, 1.0);
        for (int t = 0; t < 10; ++t) {
            Eigen::VectorXd f(g.size());
            for (std::size_t k = 0; k < g.size(); ++k) f(k) = N(rng);
            const Eigen::VectorXd r = P.apply(f - P.apply(f));
            CHECK(r.norm() < 1e-12 * f.norm());
        }
    }
    SUBCASE("xi1 xi2 sqrtM is orthogonal to the invariants") {
        // Gaussian moment orthogonality: odd cross moments vanish
        Eigen::VectorXd f(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) {
            const std::vector<double> xi = g.node(k);
            f(k) = xi[0] * xi[1] * sqrt_maxwellian(g, k);
        }
        CHECK(P.apply(f).norm() < 1e-10 * f.norm());
    }
}

TEST_CASE("coercivity constant lambda0") {
    const VelocityGrid g = make_velocity_grid(2, 16, 6.0);
    const CollisionOperator op = build_collision_operator(g, 0.0, 1.0);
    const Projection P = projection_P(g);
    const double lambda0 = coercivity_lambda0(op, P);
    CHECK(lambda0 > 0.0);

    SUBCASE("kernel directions have zero Rayleigh quotient") {
        const Eigen::MatrixXd L = op.L();
        const Eigen::VectorXd psi = invariant_field(g, 2);
        CHECK(std::abs(psi.dot(L * psi)) < 1e-10 * L.norm() * psi.squaredNorm());
    }

    SUBCASE("discrete coercivity bound holds on random fields") {
        const Eigen::MatrixXd L = op.L();
        std::mt19937_64 rng(4);
        std::normal_distribution<double> N(0.0, 1.0);
        for (int t = 0; t < 100; ++t) {
            Eigen::VectorXd f(g.size());
            for (std::size_t k = 0; k < g.size(); ++k) f(k) = N(rng);
            const Eigen::VectorXd micro = f - P.apply(f);
            const double lhs = f.dot(L * f);
            const double rhs = lambda0 * micro.dot(op.nu.asDiagonal() * micro);
            CHECK(lhs >= rhs * (1.0 - 1e-10) - 1e-12);
        }
    }

    SUBCASE("nu has a positive floor") {
        CHECK(op.nu.minCoeff() > 0.0);
    }
}

TEST_CASE("Dirichlet form matches an independent quadrature oracle") {
    // <L f, f> for f = xi1 xi2 sqrtM equals
    //   1/4 iint B M M* (g' + g*' - g - g*)^2,  g = xi1 xi2,
    // evaluated here with tensor Gauss-Hermite nodes and a fine angular rule,
    // fully independent of the grid build.
    const int hq = 20;
    const VelocityQuadrature vq = hermite_rule(hq, 2);
    const int n_angle = 64;
    double reference = 0.0;
    for (std::size_t a = 0; a < vq.size(); ++a) {
        const std::vector<double> xi = vq.node(a);
        const double wa = vq.weight(a);
        for (std::size_t b = 0; b < vq.size(); ++b) {
            const std::vector<double> xs = vq.node(b);
            const double wb = vq.weight(b);
            const double dx = xi[0] - xs[0], dy = xi[1] - xs[1];
            const double dn = std::sqrt(dx * dx + dy * dy);
            if (dn < 1e-14) continue;
            double angsum = 0.0;
            for (int c = 0; c < n_angle; ++c) {
                const double u = 2.0 * std::numbers::pi * (c + 0.5) / n_angle;
                const double ox = std::cos(u), oy = std::sin(u);
                const double proj = dx * ox + dy * oy;
                const double q = std::abs(proj / dn);  // |cos theta|, q0 = 1
                const double x1p = xi[0] - proj * ox, x2p = xi[1] - proj * oy;
                const double y1p = xs[0] + proj * ox, y2p = xs[1] + proj * oy;
                const double phi = x1p * x2p + y1p * y2p - xi[0] * xi[1] - xs[0] * xs[1];
                angsum += q * phi * phi;
            }
            angsum *= 2.0 * std::numbers::pi / n_angle;
            reference += 0.25 * wa * wb * angsum;
        }
    }

    const VelocityGrid g = make_velocity_grid(2, 24, 6.0);
    const CollisionOperator op = build_collision_operator(g, 0.0, 1.0);
    Eigen::VectorXd f(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const std::vector<double> xi = g.node(k);
        f(k) = xi[0] * xi[1] * sqrt_maxwellian(g, k);
    }
    const double measured = g.cell_weight() * f.dot(op.L() * f);
    CHECK(measured == doctest::Approx(reference).epsilon(5e-3));
}

TEST_CASE("lambda0 is stable under grid refinement") {
    const CollisionOperator op16 =
        build_collision_operator(make_velocity_grid(2, 16, 6.0), 0.0, 1.0);
    const CollisionOperator op24 =
        build_collision_operator(make_velocity_grid(2, 24, 6.0), 0.0, 1.0);
    const double l16 = coercivity_lambda0(op16, projection_P(op16.grid));
    const double l24 = coercivity_lambda0(op24, projection_P(op24.grid));
    CHECK(std::abs(l16 - l24) / l24 < 0.10);
}

TEST_CASE("hard-potential operator (gamma = 1) keeps the structure") {
    const VelocityGrid g = make_velocity_grid(2, 12, 6.0);
    const CollisionOperator op = build_collision_operator(g, 1.0, 1.0);
    const Eigen::MatrixXd L = op.L();
    CHECK((L - L.transpose()).cwiseAbs().maxCoeff() < 1e-12 * L.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    const double radius = std::max(std::abs(es.eigenvalues()(0)),
                                   es.eigenvalues()(es.eigenvalues().size() - 1));
    CHECK(es.eigenvalues()(0) >= -1e-10 * radius);
    int kernel = 0;
    for (int k = 0; k < es.eigenvalues().size(); ++k)
        if (std::abs(es.eigenvalues()(k)) < 1e-8 * radius) ++kernel;
    CHECK(kernel == 4);
    CHECK(coercivity_lambda0(op, projection_P(g)) > 0.0);
}

TEST_CASE("operator in three dimensions") {
    const VelocityGrid g = make_velocity_grid(3, 6, 6.0);
    CollisionBuildOptions opts;
    opts.angle_nodes = 32;
    const CollisionOperator op = build_collision_operator(g, 0.0, 1.0, opts);
    const Eigen::MatrixXd L = op.L();
    CHECK((L - L.transpose()).cwiseAbs().maxCoeff() < 1e-12 * L.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    const double radius = std::max(std::abs(es.eigenvalues()(0)),
                                   es.eigenvalues()(es.eigenvalues().size() - 1));
    CHECK(es.eigenvalues()(0) >= -1e-10 * radius);
    int kernel = 0;
    for (int k = 0; k < es.eigenvalues().size(); ++k)
        if (std::abs(es.eigenvalues()(k)) < 1e-8 * radius) ++kernel;
    CHECK(kernel == 5);  // n + 2
}

TEST_CASE("operator cache round trip is bit identical") {
    const VelocityGrid g = make_velocity_grid(2, 8, 6.0);
    CollisionBuildOptions opts;
    const CollisionOperator op = build_collision_operator(g, 0.0, 1.0, opts);

    const std::string path = (std::filesystem::temp_directory_path() /
                              "linboltz_cache_test.bin").string();
    save_operator_cache(path, op, opts);
    const auto loaded = load_operator_cache(path, g, 0.0, 1.0, opts);
    REQUIRE(loaded.has_value());
    CHECK(loaded->nu == op.nu);
    CHECK(loaded->K == op.K);

    // a second (single-threaded, deterministic) rebuild is bit identical
    const CollisionOperator rebuilt = build_collision_operator(g, 0.0, 1.0, opts);
    CHECK(rebuilt.nu == op.nu);
    CHECK(rebuilt.K == op.K);

    // key mismatch misses
    CHECK_FALSE(load_operator_cache(path, g, 1.0, 1.0, opts).has_value());
    std::filesystem::remove(path);
}
