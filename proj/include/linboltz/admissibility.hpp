#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linboltz/potential.hpp"
#include "linboltz/quadrature.hpp"
#include "linboltz/rank.hpp"

namespace linboltz {

struct AdmissibilityOptions {
    SamplingOptions sampling;
    RankOptions rank;
    // even branch of condition (iii): non-constant iff
    // (max - min) / (1 + |median|) exceeds this over the sample set
    double constancy_tolerance = 1e-6;
    // general branch: rays and geometric radii 2^k
    int rays = 32;
    int ray_k_min = 3;
    int ray_k_max = 12;
    double ray_final_threshold = 0.05;
};

struct ConditionResult {
    TestStatus status = TestStatus::kInconclusive;
    std::string detail;
    // condition (i)
    std::optional<std::pair<int, int>> offending_pair;
    // conditions (ii) / (ii)': rank evidence and a dependence witness if any
    std::vector<std::string> family;
    double min_gram_eigenvalue = -1.0;
    double smallest_singular = -1.0;
    std::vector<double> witness;
    // condition (iii)
    std::string branch;  // "even-nonconstant" | "limit-1" | "limit-2"
    double constancy_residual = -1.0;
    std::vector<double> ray_final_ratios;
};

struct AdmissibilityReport {
    ConditionResult cond_i;
    ConditionResult cond_ii;
    ConditionResult cond_iii;
    ConditionResult cond_ii_prime;
    AngularPairSet s_phi;
    double Lambda_phi = 0.0;
    // cond_i AND ((cond_ii AND cond_iii) OR cond_ii_prime)
    TestStatus verdict = TestStatus::kInconclusive;
};

ConditionResult check_condition_i(const Potential& phi, const AngularPairSet& s_phi);
ConditionResult check_condition_ii(const Potential& phi, const AngularPairSet& s_phi,
                                   const AdmissibilityOptions& opts = {});
ConditionResult check_condition_iii(const Potential& phi, const SpectralConstants& constants,
                                    const AdmissibilityOptions& opts = {});
ConditionResult check_condition_ii_prime(const Potential& phi, const AngularPairSet& s_phi,
                                         const AdmissibilityOptions& opts = {});

// phi must be normalized (constants are computed against the Gibbs measure)
AdmissibilityReport admissibility_report(const Potential& phi, const AngularPairSet& s_phi,
                                         const SpectralConstants& constants,
                                         const AdmissibilityOptions& opts = {});

}  // namespace linboltz
