#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "linboltz/admissibility.hpp"
#include "linboltz/collision.hpp"
#include "linboltz/criterion.hpp"
#include "linboltz/quadrature.hpp"
#include "linboltz/simulation.hpp"

namespace linboltz {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

ordered_json admissibility_json(const AdmissibilityReport& rep);
ordered_json constants_json(const SpectralConstants& c, const DualRouteReport* dual_route,
                            const GibbsRule& rule);
ordered_json criterion_json(const ZeroSolutionVerdict& v);
ordered_json simulation_json(const SimulationResult& r, const SimulationOptions& opts);

struct OperatorAudit {
    int dim = 0, per_axis = 0;
    double extent = 0.0, gamma = 0.0, q0 = 0.0;
    double symmetry_residual = 0.0;       // max |L - L^T| / ||L||
    double min_eigenvalue = 0.0;
    double spectral_radius = 0.0;
    int kernel_dimension = 0;
    double nu_min = 0.0, nu_max = 0.0;
    double lambda0 = 0.0;
    double correction_magnitude = 0.0;
    bool cache_roundtrip_ok = false;
};

OperatorAudit audit_operator(const CollisionOperator& op);
ordered_json operator_audit_json(const OperatorAudit& a);

// CSV ledger: t, mass, energy, angular_<i><j>..., l2_norm, nu_norm,
// boundary_loss, with shortest round-trip number formatting.
void write_ledger_csv(const std::string& path, const std::vector<LedgerRow>& rows,
                      const std::vector<std::pair<int, int>>& angular_pairs);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace linboltz
