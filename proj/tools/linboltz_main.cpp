// Command-line front end: admissibility checks, spectral constants, the
// zero-solution criterion, phase-space simulation, and collision-operator
// audits, all driven by one config file.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "linboltz/admissibility.hpp"
#include "linboltz/collision.hpp"
#include "linboltz/config.hpp"
#include "linboltz/criterion.hpp"
#include "linboltz/potential.hpp"
#include "linboltz/quadrature.hpp"
#include "linboltz/reports.hpp"
#include "linboltz/simulation.hpp"

namespace lb = linboltz;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitFailure = 4;

struct Pipeline {
    lb::RunConfig cfg;
    lb::Potential phi;  // normalized
    lb::AngularPairSet s_phi;
    lb::GibbsRule rule;
    lb::SpectralConstants constants;
};

lb::SamplingOptions sampling_of(const lb::RunConfig& cfg) {
    lb::SamplingOptions s;
    s.seed = cfg.seed;
    s.points = cfg.points;
    return s;
}

Pipeline build_pipeline(const lb::RunConfig& cfg) {
    Pipeline p;
    p.cfg = cfg;
    lb::NormalizeOptions nopts;
    nopts.nodes_per_panel = cfg.nodes_per_panel;
    nopts.panel_width = cfg.panel_width;
    p.phi = lb::normalize(cfg.build_potential(), nopts);
    p.s_phi = lb::compute_S_phi(p.phi, sampling_of(cfg));
    lb::GibbsRuleOptions gopts;
    gopts.nodes_per_panel = cfg.nodes_per_panel;
    gopts.panel_width = cfg.panel_width;
    p.rule = lb::build_gibbs_rule(p.phi, gopts);
    p.constants = lb::spectral_constants(p.phi, p.rule,
                                         lb::hermite_rule(cfg.velocity_nodes, cfg.dimension));
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << text;
}

void write_json(const fs::path& path, const lb::ordered_json& j) {
    write_text(path, j.dump(2) + "\n");
}

lb::AdmissibilityOptions admissibility_options(const lb::RunConfig& cfg) {
    lb::AdmissibilityOptions opts;
    opts.sampling = sampling_of(cfg);
    opts.rank.dependent_threshold = cfg.rank_dependent;
    opts.rank.independent_threshold = cfg.rank_independent;
    opts.constancy_tolerance = cfg.constancy;
    return opts;
}

int run_check(const lb::RunConfig& cfg, const fs::path& out) {
    Pipeline p = build_pipeline(cfg);
    lb::AdmissibilityReport rep =
        lb::admissibility_report(p.phi, p.s_phi, p.constants, admissibility_options(cfg));
    write_json(out / "admissibility.json", lb::admissibility_json(rep));
    switch (rep.verdict) {
        case lb::TestStatus::kPass: return kExitOk;
        case lb::TestStatus::kFail: return kExitNegative;
        case lb::TestStatus::kInconclusive: return kExitInconclusive;
    }
    return kExitFailure;
}

int run_constants(const lb::RunConfig& cfg, const fs::path& out, int threads) {
    Pipeline p = build_pipeline(cfg);
    lb::DualRouteReport routes;
    const lb::DualRouteReport* routes_ptr = nullptr;
    if (cfg.dimension == 2) {
        routes = lb::dual_route_check(p.phi, p.rule, p.constants, threads);
        routes_ptr = &routes;
    }
    write_json(out / "constants.json", lb::constants_json(p.constants, routes_ptr, p.rule));
    return kExitOk;
}

int run_criterion(const lb::RunConfig& cfg, const fs::path& out) {
    Pipeline p = build_pipeline(cfg);
    lb::VerdictOptions vopts;
    vopts.criterion.sampling = sampling_of(cfg);
    vopts.criterion.rank.dependent_threshold = cfg.rank_dependent;
    vopts.criterion.rank.independent_threshold = cfg.rank_independent;
    lb::ZeroSolutionVerdict v =
        lb::zero_solution_verdict(p.phi, p.s_phi, p.constants, p.rule, vopts);
    write_json(out / "criterion.json", lb::criterion_json(v));
    if (v.status == lb::TestStatus::kInconclusive) return kExitInconclusive;
    return v.unique_zero ? kExitOk : kExitNegative;
}

lb::CollisionBuildOptions collision_options(const lb::RunConfig& cfg) {
    lb::CollisionBuildOptions opts;
    opts.hermite_nodes = cfg.hermite_nodes;
    opts.angle_nodes = cfg.angle_nodes;
    return opts;
}

lb::CollisionOperator obtain_operator(const lb::RunConfig& cfg) {
    const lb::VelocityGrid grid =
        lb::make_velocity_grid(cfg.dimension, cfg.velocity_cells, cfg.velocity_extent);
    const lb::CollisionBuildOptions copts = collision_options(cfg);
    if (!cfg.cache_file.empty()) {
        if (auto cached = lb::load_operator_cache(cfg.cache_file, grid, cfg.gamma, cfg.q0, copts))
            return *cached;
    }
    lb::CollisionOperator op = lb::build_collision_operator(grid, cfg.gamma, cfg.q0, copts);
    if (!cfg.cache_file.empty()) lb::save_operator_cache(cfg.cache_file, op, copts);
    return op;
}

int run_simulate(const lb::RunConfig& cfg, const fs::path& out, int threads) {
    Pipeline p = build_pipeline(cfg);

    if (!cfg.force) {
        lb::AdmissibilityReport rep =
            lb::admissibility_report(p.phi, p.s_phi, p.constants, admissibility_options(cfg));
        if (rep.verdict != lb::TestStatus::kPass) {
            std::cerr << "simulate: potential is not admissible (set simulation.force = true "
                         "to run anyway)\n";
            return kExitNegative;
        }
    }

    std::optional<lb::CollisionOperator> op;
    if (cfg.collision_enabled) op = obtain_operator(cfg);

    lb::SpatialGrid xgrid;
    xgrid.box = lb::truncation_box(p.phi, 1e-14, sampling_of(cfg));
    xgrid.cells.assign(cfg.dimension, cfg.spatial_cells);
    const lb::VelocityGrid vgrid =
        lb::make_velocity_grid(cfg.dimension, cfg.velocity_cells, cfg.velocity_extent);

    lb::SimulationOptions sopts;
    sopts.dt = cfg.dt;
    sopts.horizon = cfg.horizon;
    sopts.output_interval = cfg.output_interval;
    sopts.collision_enabled = cfg.collision_enabled;
    sopts.transport_enabled = cfg.transport_enabled;
    sopts.potential_enabled = cfg.potential_enabled;
    sopts.conserve_projection = cfg.conserve_projection;
    sopts.boundary = cfg.boundary == "periodic" ? lb::BoundaryMode::kPeriodic
                                                : lb::BoundaryMode::kAbsorbing;
    sopts.interpolation = cfg.interpolation == "spectral" ? lb::InterpolationMode::kSpectral
                                                          : lb::InterpolationMode::kCubic;
    sopts.fit_skip_fraction = cfg.fit_skip_fraction;
    sopts.mass_drift_bound = cfg.mass_drift;
    sopts.energy_drift_bound = cfg.energy_drift;
    sopts.angular_drift_bound = cfg.angular_drift;
    sopts.boundary_loss_bound = cfg.boundary_loss;
    sopts.threads = threads;

    lb::Simulator sim(p.phi, p.s_phi, p.constants, op, xgrid, vgrid, sopts);

    lb::PhaseField f0;
    if (cfg.initial_kind == "zero") {
        f0 = sim.zero_field();
    } else {
        lb::InitialBump bump;
        bump.amplitude = cfg.amplitude;
        bump.center_x = cfg.center_x;
        bump.center_v = cfg.center_v;
        bump.sigma_x = cfg.sigma_x;
        bump.sigma_v = cfg.sigma_v;
        bump.normalize = cfg.normalize_initial;
        f0 = sim.build_initial(sim.bump_field(bump));
    }

    lb::SimulationResult result = sim.simulate(f0);
    lb::write_ledger_csv((out / "ledger.csv").string(), result.ledger,
                         p.s_phi.members_upper());
    write_json(out / "decay.json", lb::simulation_json(result, sopts));
    return result.ok() ? kExitOk : kExitNegative;
}

int run_operator_audit(const lb::RunConfig& cfg, const fs::path& out) {
    lb::CollisionOperator op = obtain_operator(cfg);
    lb::OperatorAudit audit = lb::audit_operator(op);

    // cache round trip through a scratch file
    const fs::path cache = out / "operator.cache";
    lb::save_operator_cache(cache.string(), op, collision_options(cfg));
    auto reloaded = lb::load_operator_cache(cache.string(), op.grid, op.gamma, op.q0,
                                            collision_options(cfg));
    audit.cache_roundtrip_ok = reloaded && reloaded->K == op.K && reloaded->nu == op.nu;

    write_json(out / "operator_audit.json", lb::operator_audit_json(audit));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"confined linear kinetic equation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker thread count");
    };
    CLI::App* cmd_check = app.add_subcommand("check", "admissibility conditions");
    CLI::App* cmd_constants = app.add_subcommand("constants", "spectral constants");
    CLI::App* cmd_criterion = app.add_subcommand("criterion", "zero-solution criterion");
    CLI::App* cmd_simulate = app.add_subcommand("simulate", "time integration");
    CLI::App* cmd_audit = app.add_subcommand("operator-audit", "collision operator audit");
    for (CLI::App* sub : {cmd_check, cmd_constants, cmd_criterion, cmd_simulate, cmd_audit})
        add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        const lb::RunConfig cfg = lb::parse_config(config_path);
        const fs::path out(out_dir);
        fs::create_directories(out);
        write_text(out / "config_echo.toml", lb::config_echo(cfg));

        if (app.got_subcommand(cmd_check)) return run_check(cfg, out);
        if (app.got_subcommand(cmd_constants)) return run_constants(cfg, out, threads);
        if (app.got_subcommand(cmd_criterion)) return run_criterion(cfg, out);
        if (app.got_subcommand(cmd_simulate)) return run_simulate(cfg, out, threads);
        if (app.got_subcommand(cmd_audit)) return run_operator_audit(cfg, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
