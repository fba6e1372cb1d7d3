#pragma once

#include <functional>
#include <span>
#include <vector>

#include "linboltz/polynomial.hpp"

namespace linboltz {

// One-dimensional quadrature rule.
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule with p nodes on [a, b].
Rule1D gauss_legendre(int p, double a, double b);

// Composite Gauss-Legendre: [a, b] split into panels of width about
// `panel_width`, each carrying a p-node rule. A single panel is used when the
// interval is shorter than one panel. Panel layout is symmetric about the
// interval midpoint.
Rule1D composite_gauss_legendre(int p, double a, double b, double panel_width);

// Axis rule for Gibbs-measure quadrature: panel width as above, with a floor
// of 64 nodes per axis so that short boxes (sharply decaying weights) stay
// resolved.
Rule1D gibbs_axis_rule(int p, double a, double b, double panel_width);

// Tensor Gauss-Hermite rule for the normalized Gaussian
//   M(xi) = (2pi)^{-n/2} exp(-|xi|^2 / 2).
// Integrates polynomials of per-axis degree <= 2m-1 exactly; weights sum to 1.
struct VelocityQuadrature {
    int dim = 0;
    int nodes_per_axis = 0;
    Rule1D axis;  // probabilists' Gauss-Hermite in 1D

    std::size_t size() const;
    // node index -> coordinates
    std::vector<double> node(std::size_t flat) const;
    double weight(std::size_t flat) const;
};

VelocityQuadrature hermite_rule(int m, int n);

// Integral of p against the normalized Gaussian. Throws if the rule cannot
// integrate p exactly (some per-axis degree exceeds 2m-1).
double velocity_moment(const Polynomial& p, const VelocityQuadrature& rule);

// Same, for a general integrand; no exactness guarantee.
double velocity_moment(const std::function<double(std::span<const double>)>& g,
                       const VelocityQuadrature& rule);

}  // namespace linboltz
