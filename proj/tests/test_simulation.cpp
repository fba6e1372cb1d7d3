#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "linboltz/collision.hpp"
#include "linboltz/fft.hpp"
#include "linboltz/quadrature.hpp"
#include "linboltz/simulation.hpp"

using namespace linboltz;

namespace {

struct World {
    Potential phi;
    AngularPairSet s_phi;
    SpectralConstants constants;
    SpatialGrid xgrid;
    VelocityGrid vgrid;
};

World make_world(int spatial_cells = 32, int velocity_cells = 16) {
    World w;
    w.phi = normalize(Potential::phi1(2, 2.0, 1.0));
    w.s_phi = compute_S_phi(w.phi);
    w.constants = spectral_constants(w.phi, build_gibbs_rule(w.phi), hermite_rule(32, 2));
    w.xgrid.box = truncation_box(w.phi, 1e-14);
    w.xgrid.cells = {spatial_cells, spatial_cells};
    w.vgrid = make_velocity_grid(2, velocity_cells, 6.0);
    return w;
}

Simulator make_sim(const World& w, SimulationOptions opts,
                   bool with_collision = true) {
    std::optional<CollisionOperator> op;
    if (with_collision)
        op = build_collision_operator(w.vgrid, 0.0, 1.0);
    return Simulator(w.phi, w.s_phi, w.constants, op, w.xgrid, w.vgrid, opts);
}

}  // namespace

TEST_CASE("decay_fit") {
    SUBCASE("exact exponential") {
        std::vector<double> ts, ns;
        for (int k = 0; k < 50; ++k) {
            ts.push_back(0.2 * k);
            ns.push_back(std::exp(-0.3 * 0.2 * k));
        }
        const DecayReport rep = decay_fit(ts, ns, 0.0, 10.0);
        CHECK(rep.sigma == doctest::Approx(0.3).epsilon(1e-10));
        CHECK(rep.fit_residual < 1e-12);
    }
    SUBCASE("constant series") {
        std::vector<double> ts, ns;
        for (int k = 0; k < 40; ++k) {
            ts.push_back(0.1 * k);
            ns.push_back(2.5);
        }
        const DecayReport rep = decay_fit(ts, ns, 0.0, 4.0);
        CHECK(std::abs(rep.sigma) < 1e-12);
    }
    SUBCASE("modulated envelope") {
        // e^{-0.3 t} (2 + cos 5t): window longer than three periods
        std::vector<double> ts, ns;
        for (int k = 0; k <= 200; ++k) {
            const double t = 0.05 * k;
            ts.push_back(t);
            ns.push_back(std::exp(-0.3 * t) * (2.0 + std::cos(5.0 * t)));
        }
        const DecayReport rep = decay_fit(ts, ns, 0.0, 10.0);
        CHECK(rep.sigma == doctest::Approx(0.3).epsilon(0.05 / 0.3));
    }
    SUBCASE("nonpositive tail shrinks the window and is reported") {
        std::vector<double> ts, ns;
        for (int k = 0; k <= 40; ++k) {
            const double t = 0.25 * k;
            ts.push_back(t);
            ns.push_back(t < 8.0 ? std::exp(-0.2 * t) : 0.0);
        }
        const DecayReport rep = decay_fit(ts, ns, 0.0, 10.0);
        CHECK(rep.window_shrunk);
        CHECK(rep.window_t1 < 8.1);
        CHECK(rep.sigma == doctest::Approx(0.2).epsilon(1e-8));
    }
    SUBCASE("too few samples is an error") {
        std::vector<double> ts{0, 1, 2}, ns{1, 0.5, 0.25};
        CHECK_THROWS(decay_fit(ts, ns, 0.0, 2.0));
    }
}

TEST_CASE("build_initial zeroes every conservation functional") {
    World w = make_world();
    SimulationOptions opts;
    opts.dt = 0.01;
    Simulator sim = make_sim(w, opts, false);

    SUBCASE("random smooth bump") {
        InitialBump bump;
        bump.sigma_x = 2.0;
        bump.center_x = {1.0, 0.0};
        const PhaseField f0 = sim.build_initial(sim.bump_field(bump));
        const LedgerRow row = sim.measure(f0, 0.0);
        CHECK(std::abs(row.mass) < 1e-10);
        CHECK(std::abs(row.energy) < 1e-10);
        for (double a : row.angular) CHECK(std::abs(a) < 1e-10);
    }

    SUBCASE("already-constrained fields are unchanged") {
        InitialBump bump;
        bump.sigma_x = 2.0;
        bump.center_x = {1.0, 0.0};
        const PhaseField f0 = sim.build_initial(sim.bump_field(bump));
        const PhaseField f1 = sim.build_initial(f0);
        CHECK((f1.data - f0.data).norm() < 1e-12 * f0.data.norm());
    }

    SUBCASE("sqrt local Maxwellian acquires zero mass functional") {
        PhaseField f = sim.zero_field();
        f.data = sim.duals().front();  // the mass dual is sqrt(M_loc) itself
        const PhaseField g = sim.build_initial(f);
        const LedgerRow row = sim.measure(g, 0.0);
        CHECK(std::abs(row.mass) < 1e-10);
    }
}

TEST_CASE("step behavior") {
    World w = make_world();
    SimulationOptions opts;
    opts.dt = 0.01;

    SUBCASE("zero field stays zero") {
        Simulator sim = make_sim(w, opts);
        PhaseField f = sim.zero_field();
        sim.step(f);
        CHECK(f.data.norm() == 0.0);
    }

    SUBCASE("steady state holds over 100 steps") {
        Simulator sim = make_sim(w, opts);
        PhaseField f = sim.zero_field();
        for (int k = 0; k < 100; ++k) sim.step(f);
        CHECK(sim.l2_norm(f) < 1e-12);
    }

    SUBCASE("pure collision leaves kernel fields unchanged") {
        SimulationOptions pure = opts;
        pure.transport_enabled = false;
        pure.conserve_projection = false;
        Simulator sim = make_sim(w, pure);
        PhaseField f = sim.zero_field();
        // a macroscopic field: (1 + xi1 + |xi|^2) sqrtM per cell, modulated in x
        const int m = w.vgrid.per_axis;
        for (std::size_t j = 0; j < w.xgrid.size(); ++j) {
            const std::vector<double> x = w.xgrid.point(j);
            const double gx = std::exp(-0.1 * (x[0] * x[0] + x[1] * x[1]));
            for (std::size_t r = 0; r < w.vgrid.size(); ++r) {
                const std::vector<double> xi = w.vgrid.node(r);
                const double xi2 = xi[0] * xi[0] + xi[1] * xi[1];
                const double sm = std::pow(2.0 * std::numbers::pi, -0.5) *
                                  std::exp(-0.25 * xi2);
                f.data(r, j) = gx * (1.0 + xi[0] + xi2) * sm;
            }
        }
        (void)m;
        const Eigen::MatrixXd before = f.data;
        for (int k = 0; k < 10; ++k) sim.step(f);
        CHECK((f.data - before).norm() < 1e-12 * before.norm());
    }

    SUBCASE("per-step norm is non-increasing") {
        Simulator sim = make_sim(w, opts);
        InitialBump bump;
        bump.sigma_x = 2.0;
        bump.center_x = {1.0, 0.0};
        PhaseField f = sim.build_initial(sim.bump_field(bump));
        double prev = sim.l2_norm(f);
        for (int k = 0; k < 50; ++k) {
            sim.step(f);
            const double now = sim.l2_norm(f);
            CHECK(now <= prev * (1.0 + 1e-8));
            prev = now;
        }
    }
}

TEST_CASE("periodic spectral mode matches the translation oracle") {
    World w = make_world(32, 16);
    SimulationOptions opts;
    opts.dt = 0.02;
    opts.collision_enabled = false;
    opts.potential_enabled = false;  // pure x-advection
    opts.conserve_projection = false;
    opts.boundary = BoundaryMode::kPeriodic;
    opts.interpolation = InterpolationMode::kSpectral;
    Simulator sim = make_sim(w, opts, false);

    InitialBump bump;
    bump.sigma_x = 2.0;
    bump.center_x = {1.0, 0.0};
    PhaseField f = sim.build_initial(sim.bump_field(bump));
    const Eigen::MatrixXd f0 = f.data;
    sim.step(f);

    // oracle: per velocity node, translate the initial plane by xi dt with
    // periodic spectral shifts (two half shifts compose exactly)
    const int nx1 = w.xgrid.cells[0], nx2 = w.xgrid.cells[1];
    const int m = w.vgrid.per_axis;
    double worst = 0.0;
    for (std::size_t r = 0; r < w.vgrid.size(); ++r) {
        const double v1 = w.vgrid.axis_coord(static_cast<int>(r) / m);
        const double v2 = w.vgrid.axis_coord(static_cast<int>(r) % m);
        std::vector<double> plane(nx1 * nx2);
        for (int j = 0; j < nx1 * nx2; ++j) plane[j] = f0(r, j);
        std::vector<double> line1(nx1), line2(nx2);
        for (int i2 = 0; i2 < nx2; ++i2) {
            for (int i1 = 0; i1 < nx1; ++i1) line1[i1] = plane[i1 * nx2 + i2];
            spectral_shift_periodic(line1, v1 * opts.dt, w.xgrid.spacing(0));
            for (int i1 = 0; i1 < nx1; ++i1) plane[i1 * nx2 + i2] = line1[i1];
        }
        for (int i1 = 0; i1 < nx1; ++i1) {
            for (int i2 = 0; i2 < nx2; ++i2) line2[i2] = plane[i1 * nx2 + i2];
            spectral_shift_periodic(line2, v2 * opts.dt, w.xgrid.spacing(1));
            for (int i2 = 0; i2 < nx2; ++i2) plane[i1 * nx2 + i2] = line2[i2];
        }
        for (int j = 0; j < nx1 * nx2; ++j)
            worst = std::max(worst, std::abs(plane[j] - f.data(r, j)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("periodic cubic mode approximates the translation oracle") {
    World w = make_world(32, 16);
    SimulationOptions opts;
    opts.dt = 0.02;
    opts.collision_enabled = false;
    opts.potential_enabled = false;
    opts.conserve_projection = false;
    opts.boundary = BoundaryMode::kPeriodic;
    opts.interpolation = InterpolationMode::kCubic;
    Simulator sim = make_sim(w, opts, false);

    InitialBump bump;
    bump.sigma_x = 3.0;
    bump.center_x = {0.0, 0.0};
    PhaseField f = sim.build_initial(sim.bump_field(bump));
    const double scale = f.data.cwiseAbs().maxCoeff();
    const Eigen::MatrixXd f0 = f.data;
    sim.step(f);

    const int nx1 = w.xgrid.cells[0], nx2 = w.xgrid.cells[1];
    const int m = w.vgrid.per_axis;
    double worst = 0.0;
    for (std::size_t r = 0; r < w.vgrid.size(); ++r) {
        const double v1 = w.vgrid.axis_coord(static_cast<int>(r) / m);
        const double v2 = w.vgrid.axis_coord(static_cast<int>(r) % m);
        std::vector<double> plane(nx1 * nx2);
        for (int j = 0; j < nx1 * nx2; ++j) plane[j] = f0(r, j);
        std::vector<double> line1(nx1), line2(nx2);
        for (int i2 = 0; i2 < nx2; ++i2) {
            for (int i1 = 0; i1 < nx1; ++i1) line1[i1] = plane[i1 * nx2 + i2];
            spectral_shift_periodic(line1, v1 * opts.dt, w.xgrid.spacing(0));
            for (int i1 = 0; i1 < nx1; ++i1) plane[i1 * nx2 + i2] = line1[i1];
        }
        for (int i1 = 0; i1 < nx1; ++i1) {
            for (int i2 = 0; i2 < nx2; ++i2) line2[i2] = plane[i1 * nx2 + i2];
            spectral_shift_periodic(line2, v2 * opts.dt, w.xgrid.spacing(1));
            for (int i2 = 0; i2 < nx2; ++i2) plane[i1 * nx2 + i2] = line2[i2];
        }
        for (int j = 0; j < nx1 * nx2; ++j)
            worst = std::max(worst, std::abs(plane[j] - f.data(r, j)));
    }
    // cubic against the exact translation: interpolation-order agreement
    CHECK(worst < 1e-2 * scale);
}

TEST_CASE("conservation drift halves under refinement (projection off)") {
    // joint space-time refinement: the raw drift mixes splitting error
    // (second order in dt) and interpolation error (shrinking with h), so
    // halving both must at least halve the drift
    auto drift_at = [&](int cells, double dt) {
        SimulationOptions opts;
        opts.dt = dt;
        opts.horizon = 1.0;
        opts.output_interval = 0.25;
        opts.collision_enabled = false;
        opts.conserve_projection = false;
        World w = make_world(cells, 16);
        Simulator sim = make_sim(w, opts, false);
        InitialBump bump;
        bump.sigma_x = 2.0;
        bump.center_x = {1.0, 0.0};
        PhaseField f = sim.build_initial(sim.bump_field(bump));
        const SimulationResult res = sim.simulate(f);
        return res.energy_drift;
    };
    const double coarse = drift_at(32, 0.02);
    const double fine = drift_at(64, 0.01);
    CHECK(coarse > 0.0);
    CHECK(fine < 0.6 * coarse);  // first order, with measurement slack
}

TEST_CASE("coercivity diagnostic guards empty windows") {
    std::vector<LedgerRow> rows;
    for (int k = 0; k <= 20; ++k) {
        LedgerRow r;
        r.t = 0.1 * k;
        r.dirichlet = 0.0;
        r.nu_norm = 0.0;  // dead solution
        rows.push_back(r);
    }
    const auto windows = coercivity_diagnostic(rows);
    REQUIRE(windows.size() == 2);
    CHECK(windows[0].empty);
    CHECK(windows[1].empty);
}

TEST_CASE("simulate produces a coherent short run") {
    World w = make_world(32, 16);
    SimulationOptions opts;
    opts.dt = 0.01;
    opts.horizon = 2.0;
    opts.output_interval = 0.1;
    Simulator sim = make_sim(w, opts);

    InitialBump bump;
    bump.sigma_x = 2.0;
    bump.center_x = {1.0, 0.0};
    PhaseField f = sim.build_initial(sim.bump_field(bump));
    const SimulationResult res = sim.simulate(f);

    CHECK(res.mass_drift < 1e-10);
    CHECK(res.energy_drift < 1e-10);
    CHECK(res.angular_drift < 1e-10);
    CHECK(res.decay.monotonicity_violations == 0);
    CHECK(res.ledger.front().l2_norm > res.ledger.back().l2_norm);
    // dirichlet ledger entries are nonnegative
    for (const LedgerRow& row : res.ledger) CHECK(row.dirichlet >= -1e-12);
}
