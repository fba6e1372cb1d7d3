#include "linboltz/reports.hpp"

#include <Eigen/Dense>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace linboltz {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

ordered_json condition_json(const ConditionResult& c) {
    ordered_json j;
    j["status"] = to_string(c.status);
    j["detail"] = c.detail;
    if (c.offending_pair)
        j["offending_pair"] = {c.offending_pair->first + 1, c.offending_pair->second + 1};
    if (!c.family.empty()) j["family"] = c.family;
    if (c.min_gram_eigenvalue >= 0.0) j["min_gram_eigenvalue"] = c.min_gram_eigenvalue;
    if (c.smallest_singular >= 0.0) j["smallest_singular"] = c.smallest_singular;
    if (!c.witness.empty()) j["witness"] = c.witness;
    if (!c.branch.empty()) j["branch"] = c.branch;
    if (c.constancy_residual >= 0.0) j["constancy_residual"] = c.constancy_residual;
    if (!c.ray_final_ratios.empty()) j["ray_final_ratios"] = c.ray_final_ratios;
    return j;
}

ordered_json pairs_json(const AngularPairSet& s) {
    ordered_json arr = ordered_json::array();
    for (const auto& [i, j] : s.members_upper()) arr.push_back({i + 1, j + 1});
    return arr;
}

}  // namespace

ordered_json admissibility_json(const AdmissibilityReport& rep) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["report"] = "admissibility";
    j["verdict"] = rep.verdict == TestStatus::kPass          ? "ADMISSIBLE"
                   : rep.verdict == TestStatus::kFail        ? "NOT-ADMISSIBLE"
                                                             : "INCONCLUSIVE";
    j["S_phi"] = pairs_json(rep.s_phi);
    j["Lambda_phi"] = rep.Lambda_phi;
    j["condition_i"] = condition_json(rep.cond_i);
    j["condition_ii"] = condition_json(rep.cond_ii);
    j["condition_iii"] = condition_json(rep.cond_iii);
    j["condition_ii_prime"] = condition_json(rep.cond_ii_prime);
    return j;
}

ordered_json constants_json(const SpectralConstants& c, const DualRouteReport* dual_route,
                            const GibbsRule& rule) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["report"] = "constants";
    j["dimension"] = c.dim;
    j["A1"] = c.A1;
    j["A2"] = c.A2;
    j["lambda"] = {{"l1_1", c.lambda1_1}, {"l1_2", c.lambda1_2}, {"l2_1", c.lambda2_1},
                   {"l2_2", c.lambda2_2}, {"l3_1", c.lambda3_1}, {"l3_2", c.lambda3_2},
                   {"l4_1", c.lambda4_1}, {"l4_2", c.lambda4_2}};
    j["numerator"] = c.numerator;
    j["denominator"] = c.denominator;
    j["numerator_vec"] = c.numerator_vec;
    j["Lambda_phi"] = c.Lambda_phi;
    j["V_phi"] = c.V_phi;
    j["truncation_box_half_width"] = rule.box.half_width;
    j["boundary_density"] = rule.boundary_density;
    j["truncation_warning"] = rule.truncation_warning;
    if (dual_route) {
        j["dual_route"] = {
            {"denominator_single", dual_route->denom_single},
            {"denominator_double", dual_route->denom_double},
            {"numerator_single", dual_route->numer_single},
            {"numerator_double", dual_route->numer_double},
            {"vector_single", dual_route->vec_single},
            {"vector_double", dual_route->vec_double},
            {"denominator_rel_diff", dual_route->denom_rel_diff},
            {"numerator_rel_diff", dual_route->numer_rel_diff},
            {"vector_rel_diff", dual_route->vec_rel_diff},
            {"denominator_positive", dual_route->denominator_positive},
            {"agreement_ok", dual_route->agreement_ok},
            {"tolerance", dual_route->tolerance},
        };
    }
    return j;
}

ordered_json criterion_json(const ZeroSolutionVerdict& v) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["report"] = "criterion";
    j["verdict"] = v.unique_zero                          ? "UNIQUE-ZERO"
                   : v.status == TestStatus::kInconclusive ? "INCONCLUSIVE"
                                                           : "NON-UNIQUE";
    j["family"] = v.system.family;
    j["exact_monomial_matrix"] = v.system.exact;
    j["smallest_singular"] = v.system.smallest_singular;
    j["min_gram_eigenvalue"] = v.system.min_gram_eigenvalue;
    j["nullspace_dimension"] = static_cast<int>(v.system.nullspace.cols());
    if (v.system.nullspace.cols() > 0) {
        ordered_json basis = ordered_json::array();
        for (int c = 0; c < v.system.nullspace.cols(); ++c) {
            std::vector<double> col(v.system.nullspace.rows());
            for (int r = 0; r < v.system.nullspace.rows(); ++r)
                col[r] = v.system.nullspace(r, c);
            basis.push_back(col);
        }
        j["nullspace"] = basis;
    }
    j["angular_gibbs_moments"] = v.angular_gibbs_moments;
    j["angular_elimination_ok"] = v.angular_elimination_ok;
    if (v.witness) {
        std::vector<double> b2flat;
        for (int r = 0; r < v.witness->B2.rows(); ++r)
            for (int c = 0; c < v.witness->B2.cols(); ++c) b2flat.push_back(v.witness->B2(r, c));
        j["witness"] = {{"description", v.witness->description},
                        {"omega", v.witness->omega},
                        {"c_amplitude", v.witness->c_amplitude},
                        {"d_amplitude", v.witness->d_amplitude},
                        {"B2", b2flat}};
    }
    return j;
}

ordered_json simulation_json(const SimulationResult& r, const SimulationOptions& opts) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["report"] = "decay";
    j["sigma"] = r.decay.sigma;
    j["prefactor"] = r.decay.prefactor;
    j["fit_residual"] = r.decay.fit_residual;
    j["fit_window"] = {r.decay.window_t0, r.decay.window_t1};
    j["fit_samples"] = r.decay.samples;
    j["fit_window_shrunk"] = r.decay.window_shrunk;
    j["monotonicity_violations"] = r.decay.monotonicity_violations;
    j["mass_drift"] = r.mass_drift;
    j["energy_drift"] = r.energy_drift;
    j["angular_drift"] = r.angular_drift;
    j["boundary_loss"] = r.boundary_loss;
    j["measured_coercivity"] = r.measured_coercivity;
    ordered_json windows = ordered_json::array();
    for (const CoercivityWindow& w : r.coercivity)
        windows.push_back({{"t0", w.t0}, {"t1", w.t1}, {"ratio", w.ratio}, {"empty", w.empty}});
    j["coercivity_windows"] = windows;
    j["flags"] = r.flags;
    j["options"] = {{"dt", opts.dt},
                    {"horizon", opts.horizon},
                    {"output_interval", opts.output_interval},
                    {"conserve_projection", opts.conserve_projection},
                    {"collision_enabled", opts.collision_enabled},
                    {"transport_enabled", opts.transport_enabled},
                    {"potential_enabled", opts.potential_enabled},
                    {"boundary", opts.boundary == BoundaryMode::kAbsorbing ? "absorbing"
                                                                           : "periodic"},
                    {"interpolation", opts.interpolation == InterpolationMode::kCubic
                                          ? "cubic"
                                          : "spectral"},
                    {"threads", opts.threads}};
    return j;
}

OperatorAudit audit_operator(const CollisionOperator& op) {
    OperatorAudit a;
    a.dim = op.grid.dim;
    a.per_axis = op.grid.per_axis;
    a.extent = op.grid.extent;
    a.gamma = op.gamma;
    a.q0 = op.q0;
    const Eigen::MatrixXd L = op.L();
    const double lnorm = L.norm();
    a.symmetry_residual = lnorm > 0.0 ? (L - L.transpose()).cwiseAbs().maxCoeff() / lnorm : 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (L + L.transpose()));
    a.min_eigenvalue = es.eigenvalues()(0);
    a.spectral_radius = std::max(std::abs(es.eigenvalues()(0)),
                                 std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
    const double kernel_cut = 1e-8 * a.spectral_radius;
    a.kernel_dimension = 0;
    for (int k = 0; k < es.eigenvalues().size(); ++k)
        if (std::abs(es.eigenvalues()(k)) < kernel_cut) ++a.kernel_dimension;
    a.nu_min = op.nu.minCoeff();
    a.nu_max = op.nu.maxCoeff();
    a.correction_magnitude = op.correction_magnitude;
    a.lambda0 = coercivity_lambda0(op, projection_P(op.grid));
    return a;
}

ordered_json operator_audit_json(const OperatorAudit& a) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["report"] = "operator_audit";
    j["dimension"] = a.dim;
    j["velocity_cells"] = a.per_axis;
    j["velocity_extent"] = a.extent;
    j["gamma"] = a.gamma;
    j["q0"] = a.q0;
    j["symmetry_residual"] = a.symmetry_residual;
    j["min_eigenvalue"] = a.min_eigenvalue;
    j["spectral_radius"] = a.spectral_radius;
    j["kernel_dimension"] = a.kernel_dimension;
    j["nu_min"] = a.nu_min;
    j["nu_max"] = a.nu_max;
    j["lambda0"] = a.lambda0;
    j["correction_magnitude"] = a.correction_magnitude;
    j["cache_roundtrip_ok"] = a.cache_roundtrip_ok;
    return j;
}

void write_ledger_csv(const std::string& path, const std::vector<LedgerRow>& rows,
                      const std::vector<std::pair<int, int>>& angular_pairs) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("write_ledger_csv: cannot open " + path);
    os << "t,mass,energy";
    for (const auto& [i, j] : angular_pairs)
        os << ",angular_" << (i + 1) << (j + 1);
    os << ",l2_norm,nu_norm,boundary_loss\n";
    for (const LedgerRow& r : rows) {
        os << format_double(r.t) << ',' << format_double(r.mass) << ','
           << format_double(r.energy);
        for (double a : r.angular) os << ',' << format_double(a);
        os << ',' << format_double(r.l2_norm) << ',' << format_double(r.nu_norm) << ','
           << format_double(r.boundary_loss) << '\n';
    }
    if (!os) throw std::runtime_error("write_ledger_csv: write failed");
}

}  // namespace linboltz
