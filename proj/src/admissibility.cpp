#include "linboltz/admissibility.hpp"

#include <algorithm>
#include <cmath>

#include "linboltz/criterion.hpp"
#include "linboltz/halton.hpp"

namespace linboltz {

namespace {

ConditionResult rank_condition(const Potential& phi, const std::vector<FamilyMember>& fam,
                               const AdmissibilityOptions& opts) {
    ConditionResult res;
    for (const auto& m : fam) res.family.push_back(m.label);

    bool exact = true;
    for (const auto& m : fam) exact = exact && m.poly.has_value();

    Eigen::MatrixXd M;
    if (exact) {
        std::vector<Polynomial> polys;
        for (const auto& m : fam) polys.push_back(*m.poly);
        M = monomial_matrix(polys);
    } else {
        TruncationBox box = truncation_box(phi, 1e-14, opts.sampling);
        HaltonSequence seq(phi.dim(), opts.sampling.seed);
        std::vector<std::vector<double>> pts;
        for (int k = 0; k < opts.sampling.points; ++k)
            pts.push_back(seq.next_in_box(box.half_width));
        M = collocation_matrix(fam, pts);
    }
    RankResult rr = rank_decision(M, opts.rank, res.family);
    res.min_gram_eigenvalue = rr.min_gram_eigenvalue;
    res.smallest_singular = rr.smallest_singular;
    res.status = rr.independence;  // independent = pass
    if (rr.nullity > 0) {
        res.witness.assign(rr.nullspace.col(0).data(),
                           rr.nullspace.col(0).data() + rr.nullspace.rows());
    }
    switch (res.status) {
        case TestStatus::kPass:
            res.detail = exact ? "independent (exact monomial rank)"
                               : "independent (sampled Gram rank)";
            break;
        case TestStatus::kFail:
            res.detail = "dependent; witness coefficients attached";
            break;
        case TestStatus::kInconclusive:
            res.detail = "minimum Gram eigenvalue inside the indeterminate band";
            break;
    }
    return res;
}

}  // namespace

ConditionResult check_condition_i(const Potential& phi, const AngularPairSet& s_phi) {
    ConditionResult res;
    res.status = TestStatus::kPass;
    res.detail = s_phi.members_upper().empty() ? "S_phi empty; condition holds vacuously"
                                               : "even in every conserved pair";
    for (const auto& [i, j] : s_phi.members_upper()) {
        if (!phi.is_even_in_pair(i, j)) {
            res.status = TestStatus::kFail;
            res.offending_pair = {i, j};
            res.detail = "phi is not even in conserved pair (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ")";
            break;
        }
    }
    return res;
}

ConditionResult check_condition_ii(const Potential& phi, const AngularPairSet& s_phi,
                                   const AdmissibilityOptions& opts) {
    return rank_condition(phi, family_condition_ii(phi, s_phi), opts);
}

ConditionResult check_condition_ii_prime(const Potential& phi, const AngularPairSet& s_phi,
                                         const AdmissibilityOptions& opts) {
    return rank_condition(phi, family_condition_ii_prime(phi, s_phi), opts);
}

ConditionResult check_condition_iii(const Potential& phi, const SpectralConstants& constants,
                                    const AdmissibilityOptions& opts) {
    ConditionResult res;
    const int n = phi.dim();

    if (phi.is_even()) {
        res.branch = "even-nonconstant";
        TruncationBox box = truncation_box(phi, 1e-14, opts.sampling);
        HaltonSequence seq(n, opts.sampling.seed + 3);
        std::vector<double> values;
        values.reserve(opts.sampling.points);
        for (int k = 0; k < opts.sampling.points; ++k) {
            const std::vector<double> x = seq.next_in_box(box.half_width);
            double r2 = 0.0;
            for (double v : x) r2 += v * v;
            values.push_back(constants.Lambda_phi * phi.virial(x) + 0.5 * r2);
        }
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        const double spread = sorted.back() - sorted.front();
        res.constancy_residual = spread / (1.0 + std::abs(median));
        if (res.constancy_residual > opts.constancy_tolerance) {
            res.status = TestStatus::kPass;
            res.detail = "Lambda_phi (2phi + x.grad phi) + |x|^2/2 is non-constant";
        } else {
            res.status = TestStatus::kFail;
            res.detail = "combination is constant within tolerance";
        }
        return res;
    }

    // general branch: estimate both limits along rays x = r u, r = 2^k
    HaltonSequence seq(n, opts.sampling.seed + 5);
    int passing_ray = -1;
    int which_limit = 0;
    for (int ray = 0; ray < opts.rays; ++ray) {
        std::vector<double> u = seq.next();
        double norm = 0.0;
        for (double& c : u) {
            c = 2.0 * c - 1.0;
            norm += c * c;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-12) continue;
        for (double& c : u) c /= norm;

        std::vector<double> ratio1, ratio2;
        for (int k = opts.ray_k_min; k <= opts.ray_k_max; ++k) {
            const double r = std::ldexp(1.0, k);
            std::vector<double> x(n);
            for (int i = 0; i < n; ++i) x[i] = r * u[i];
            const double vir = phi.virial(x);
            const std::vector<double> g = phi.grad(x);
            double gn = 0.0;
            for (double v : g) gn += v * v;
            gn = std::sqrt(gn);
            const double r2 = r * r;
            ratio1.push_back((vir + gn) / r2);
            if (vir > 0.0) ratio2.push_back((r2 + gn) / vir);
        }
        auto converges_to_zero = [&](const std::vector<double>& ratios) {
            if (ratios.size() < 3) return false;
            const std::size_t m = ratios.size();
            const bool decreasing = ratios[m - 1] < ratios[m - 2] && ratios[m - 2] < ratios[m - 3];
            return decreasing && std::abs(ratios[m - 1]) < opts.ray_final_threshold &&
                   ratios[m - 1] > -opts.ray_final_threshold;
        };
        if (converges_to_zero(ratio1)) {
            passing_ray = ray;
            which_limit = 1;
            res.ray_final_ratios.push_back(ratio1.back());
            break;
        }
        if (converges_to_zero(ratio2)) {
            passing_ray = ray;
            which_limit = 2;
            res.ray_final_ratios.push_back(ratio2.back());
            break;
        }
        if (!ratio1.empty()) res.ray_final_ratios.push_back(ratio1.back());
    }
    if (passing_ray >= 0) {
        res.status = TestStatus::kPass;
        res.branch = which_limit == 1 ? "limit-1" : "limit-2";
        res.detail = "limit " + std::to_string(which_limit) + " converges to zero along ray " +
                     std::to_string(passing_ray);
    } else {
        // distinguish a clear failure from an ambiguous trend: if every ray's
        // final ratios stay bounded away from zero, call it a fail
        bool all_bounded_away = !res.ray_final_ratios.empty();
        for (double v : res.ray_final_ratios)
            if (std::abs(v) < 10.0 * opts.ray_final_threshold) all_bounded_away = false;
        res.status = all_bounded_away ? TestStatus::kFail : TestStatus::kInconclusive;
        res.branch = "limit-ambiguous";
        res.detail = all_bounded_away ? "both ratio trends bounded away from zero on all rays"
                                      : "ray trends neither convergent nor bounded away";
    }
    return res;
}

AdmissibilityReport admissibility_report(const Potential& phi, const AngularPairSet& s_phi,
                                         const SpectralConstants& constants,
                                         const AdmissibilityOptions& opts) {
    AdmissibilityReport rep;
    rep.s_phi = s_phi;
    rep.Lambda_phi = constants.Lambda_phi;
    rep.cond_i = check_condition_i(phi, s_phi);
    rep.cond_ii = check_condition_ii(phi, s_phi, opts);
    rep.cond_iii = check_condition_iii(phi, constants, opts);
    rep.cond_ii_prime = check_condition_ii_prime(phi, s_phi, opts);
    rep.verdict = logical_and(
        rep.cond_i.status,
        logical_or(logical_and(rep.cond_ii.status, rep.cond_iii.status),
                   rep.cond_ii_prime.status));
    return rep;
}

}  // namespace linboltz
