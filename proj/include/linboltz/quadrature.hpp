#pragma once

#include <functional>
#include <span>
#include <vector>

#include "linboltz/potential.hpp"
#include "linboltz/rules.hpp"

namespace linboltz {

// Tensor Gauss-Legendre rule over the truncation box with the Gibbs density
// exp(-phi) cached per node. Integrals fold exp(-phi) into the integrand; the
// rule itself is a plain Legendre product rule.
struct GibbsRule {
    int dim = 0;
    TruncationBox box;
    std::vector<Rule1D> axes;
    // flattened tensor data, axis-major (last axis fastest)
    std::vector<double> nodes;         // size() * dim
    std::vector<double> weights;       // Legendre product weight
    std::vector<double> gibbs_weight;  // weight * exp(-phi(node))
    double boundary_density = 0.0;     // max exp(-phi) over sampled box boundary
    bool truncation_warning = false;   // boundary_density > 1e-12

    std::size_t size() const { return weights.size(); }
    std::span<const double> node(std::size_t k) const {
        return {nodes.data() + k * dim, static_cast<std::size_t>(dim)};
    }
};

struct GibbsRuleOptions {
    int nodes_per_panel = 20;
    double panel_width = 4.0;
    double density_threshold = 1e-14;  // box cut
};

// phi should be normalized first; the rule then integrates 1 to 1 +- 1e-8.
GibbsRule build_gibbs_rule(const Potential& phi, const GibbsRuleOptions& opts = {});

// integral of g(x) exp(-phi(x)) dx over the truncation box
double gibbs_integral(const std::function<double(std::span<const double>)>& g,
                      const GibbsRule& rule);

// Constants of the macroscopic reduction. lambdaJ_I holds the constant with
// subscript J and superscript I in the second-order system; lambda4_* are
// vectors. Lambda_phi = -(l2^2 - l2^1 l3^2) / (l1^2 - l1^1 l3^2) and
// V_phi = (l4^2 - l4^1 l3^2) / (l1^2 - l1^1 l3^2).
struct SpectralConstants {
    int dim = 0;
    double A1 = 0.0;  // int |xi|^2 M
    double A2 = 0.0;  // int |xi|^4 M
    double lambda1_1 = 0.0, lambda1_2 = 0.0;
    double lambda2_1 = 0.0, lambda2_2 = 0.0;
    double lambda3_1 = 0.0, lambda3_2 = 0.0;
    std::vector<double> lambda4_1, lambda4_2;
    double denominator = 0.0;          // l1^2 - l1^1 l3^2
    double numerator = 0.0;            // l2^2 - l2^1 l3^2
    std::vector<double> numerator_vec; // l4^2 - l4^1 l3^2
    double Lambda_phi = 0.0;
    std::vector<double> V_phi;
};

// Throws if the denominator is not positive (contradicts the variance
// identity; signals quadrature failure).
SpectralConstants spectral_constants(const Potential& phi, const GibbsRule& rule,
                                     const VelocityQuadrature& vel);

// Both evaluation routes for the combinations entering Lambda_phi / V_phi:
// "single" uses products of single Gibbs integrals, "symmetrized" the double
// integral over the tensor square of the rule.
struct DualRouteReport {
    double denom_single = 0.0, denom_double = 0.0;       // l1^2 - l1^1 l3^2
    double numer_single = 0.0, numer_double = 0.0;       // l2^2 - l2^1 l3^2
    std::vector<double> vec_single, vec_double;          // l4^2 - l4^1 l3^2
    double denom_rel_diff = 0.0, numer_rel_diff = 0.0, vec_rel_diff = 0.0;
    bool denominator_positive = false;
    bool agreement_ok = false;  // all relative differences below tolerance
    double tolerance = 1e-5;
};

DualRouteReport dual_route_check(const Potential& phi, const GibbsRule& rule,
                                 const SpectralConstants& constants, int threads = 1);

}  // namespace linboltz
