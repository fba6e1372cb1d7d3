#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "linboltz/admissibility.hpp"
#include "linboltz/criterion.hpp"
#include "linboltz/halton.hpp"
#include "linboltz/quadrature.hpp"

using namespace linboltz;

namespace {

struct Setup {
    Potential phi;
    AngularPairSet s_phi;
    SpectralConstants constants;
};

Setup make(const Potential& raw) {
    Setup s;
    s.phi = normalize(raw);
    s.s_phi = compute_S_phi(s.phi);
    s.constants = spectral_constants(s.phi, build_gibbs_rule(s.phi),
                                     hermite_rule(32, s.phi.dim()));
    return s;
}

// fraction-free (Bareiss) rank of an integer matrix, an independent oracle
// for the exact monomial rank path
int bareiss_rank(std::vector<std::vector<std::int64_t>> m) {
    const int rows = static_cast<int>(m.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(m[0].size());
    int rank = 0;
    std::int64_t prev = 1;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (int r = rank + 1; r < rows; ++r) {
            for (int c = col + 1; c < cols; ++c)
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            m[r][col] = 0;
        }
        prev = m[rank][col];
        ++rank;
    }
    return rank;
}

}  // namespace

TEST_CASE("condition (i)") {
    Setup radial = make(Potential::phi1(2, 1.0, 1.0));
    CHECK(check_condition_i(radial.phi, radial.s_phi).status == TestStatus::kPass);

    Setup even = make(Potential::phi2({1.0, 1.0}, {1.0, 4.0}));
    const ConditionResult vac = check_condition_i(even.phi, even.s_phi);
    CHECK(vac.status == TestStatus::kPass);  // S_phi empty, vacuous

    // a hand-built pair set paired with a potential odd in (x1, x2) must fail
    Polynomial p(2);
    p.add_term(MultiIndex{{2, 0}}, 0.5);
    p.add_term(MultiIndex{{0, 2}}, 0.5);
    p.add_term(MultiIndex{{3, 0}}, 0.125);
    const Potential odd = Potential::polynomial(p);
    AngularPairSet injected;
    injected.dim = 2;
    injected.pairs = {{0, 1}, {1, 0}};
    const ConditionResult bad = check_condition_i(odd, injected);
    CHECK(bad.status == TestStatus::kFail);
    REQUIRE(bad.offending_pair.has_value());
    CHECK(bad.offending_pair->first == 0);
    CHECK(bad.offending_pair->second == 1);
}

TEST_CASE("condition (ii)") {
    SUBCASE("harmonic fails: d_i phi duplicates x_i") {
        Setup s = make(Potential::harmonic(2));
        const ConditionResult r = check_condition_ii(s.phi, s.s_phi);
        CHECK(r.status == TestStatus::kFail);
        CHECK_FALSE(r.witness.empty());
        // the witness annihilates the family pointwise
        const auto fam = family_condition_ii(s.phi, s.s_phi);
        const std::vector<double> x{0.7, -1.3};
        double acc = 0.0;
        for (std::size_t k = 0; k < fam.size(); ++k) acc += r.witness[k] * fam[k].fn(x);
        CHECK(std::abs(acc) < 1e-10);
    }

    SUBCASE("phi3-analog passes by exact monomial rank, integer oracle agrees") {
        Setup s = make(Potential::phi3({1.0, 1.0}, {1.0, 1.0}));
        const ConditionResult r = check_condition_ii(s.phi, s.s_phi);
        CHECK(r.status == TestStatus::kPass);

        const auto fam = family_condition_ii(s.phi, s.s_phi);
        std::vector<Polynomial> polys;
        for (const auto& mbr : fam) polys.push_back(*mbr.poly);
        Eigen::MatrixXd M = monomial_matrix(polys);
        std::vector<std::vector<std::int64_t>> mi(M.rows(),
                                                  std::vector<std::int64_t>(M.cols()));
        for (int a = 0; a < M.rows(); ++a)
            for (int b = 0; b < M.cols(); ++b) {
                const double v = M(a, b);
                REQUIRE(v == std::round(v));  // integer coefficients by construction
                mi[a][b] = static_cast<std::int64_t>(v);
            }
        CHECK(bareiss_rank(mi) == M.cols());
    }

    SUBCASE("phi1 passes via the sampled Gram matrix") {
        Setup s = make(Potential::phi1(2, 1.0, 1.0));
        const ConditionResult r = check_condition_ii(s.phi, s.s_phi);
        CHECK(r.status == TestStatus::kPass);
        CHECK(r.min_gram_eigenvalue > 1e-6);
    }
}

TEST_CASE("condition (iii)") {
    SUBCASE("harmonic even branch is constant") {
        Setup s = make(Potential::harmonic(2));
        const ConditionResult r = check_condition_iii(s.phi, s.constants);
        CHECK(r.status == TestStatus::kFail);
        CHECK(r.branch == "even-nonconstant");
        CHECK(r.constancy_residual < 1e-6);
    }
    SUBCASE("phi1 alpha=1 even branch is non-constant") {
        Setup s = make(Potential::phi1(2, 1.0, 1.0));
        const ConditionResult r = check_condition_iii(s.phi, s.constants);
        CHECK(r.status == TestStatus::kPass);
        CHECK(r.branch == "even-nonconstant");
        CHECK(r.constancy_residual > 1e-6);
    }
    SUBCASE("phi3 passes through the second limit") {
        Setup s = make(Potential::phi3({1.0, 1.0}, {1.0, 1.0}));
        const ConditionResult r = check_condition_iii(s.phi, s.constants);
        CHECK(r.status == TestStatus::kPass);
        CHECK(r.branch == "limit-2");
    }
    SUBCASE("even-branch verdict is invariant under an offset shift") {
        Setup s = make(Potential::phi1(2, 1.0, 1.0));
        const ConditionResult a = check_condition_iii(s.phi, s.constants);
        // shifting by a constant and re-normalizing returns the same potential
        const Potential shifted = normalize(s.phi.with_offset(s.phi.offset() + 3.0));
        const ConditionResult b = check_condition_iii(shifted, s.constants);
        CHECK(a.status == b.status);
    }
}

TEST_CASE("condition (ii)'") {
    SUBCASE("harmonic fails with the virial combination") {
        Setup s = make(Potential::harmonic(2));
        const ConditionResult r = check_condition_ii_prime(s.phi, s.s_phi);
        CHECK(r.status == TestStatus::kFail);
        REQUIRE_FALSE(r.witness.empty());
        const auto fam = family_condition_ii_prime(s.phi, s.s_phi);
        const std::vector<double> x{-0.9, 0.4};
        double acc = 0.0;
        for (std::size_t k = 0; k < fam.size(); ++k) acc += r.witness[k] * fam[k].fn(x);
        CHECK(std::abs(acc) < 1e-10);
    }
    SUBCASE("phi3-analog passes with trivial nullspace") {
        Setup s = make(Potential::phi3({1.0, 1.0}, {1.0, 1.0}));
        const ConditionResult r = check_condition_ii_prime(s.phi, s.s_phi);
        CHECK(r.status == TestStatus::kPass);
        CHECK(r.witness.empty());
    }
}

TEST_CASE("aggregated report") {
    SUBCASE("phi1 alpha=1 admissible") {
        Setup s = make(Potential::phi1(2, 1.0, 1.0));
        const AdmissibilityReport rep = admissibility_report(s.phi, s.s_phi, s.constants);
        CHECK(rep.verdict == TestStatus::kPass);
    }
    SUBCASE("harmonic is rejected by the checker") {
        Setup s = make(Potential::harmonic(2));
        const AdmissibilityReport rep = admissibility_report(s.phi, s.s_phi, s.constants);
        CHECK(rep.verdict == TestStatus::kFail);
    }
    SUBCASE("phi3 admissible") {
        Setup s = make(Potential::phi3({1.0, 1.0}, {1.0, 1.0}));
        const AdmissibilityReport rep = admissibility_report(s.phi, s.s_phi, s.constants);
        CHECK(rep.verdict == TestStatus::kPass);
    }
    SUBCASE("reports are deterministic for a fixed seed") {
        Setup s = make(Potential::phi1(2, 1.0, 1.0));
        AdmissibilityOptions opts;
        const AdmissibilityReport a = admissibility_report(s.phi, s.s_phi, s.constants, opts);
        const AdmissibilityReport b = admissibility_report(s.phi, s.s_phi, s.constants, opts);
        CHECK(a.cond_ii.min_gram_eigenvalue == b.cond_ii.min_gram_eigenvalue);
        CHECK(a.cond_iii.constancy_residual == b.cond_iii.constancy_residual);
    }
}

TEST_CASE("sampled Gram and exact monomial rank agree on polynomial potentials") {
    const Potential polys[] = {Potential::harmonic(2),
                               Potential::quartic_separable(2),
                               Potential::phi3({1.0, 1.0}, {1.0, 1.0})};
    for (const Potential& raw : polys) {
        Setup s = make(raw);
        const auto fam = family_condition_ii_prime(s.phi, s.s_phi);
        std::vector<Polynomial> pp;
        std::vector<std::string> labels;
        for (const auto& m : fam) {
            pp.push_back(*m.poly);
            labels.push_back(m.label);
        }
        RankOptions ro;
        const RankResult exact = rank_decision(monomial_matrix(pp), ro, labels);

        TruncationBox box = truncation_box(s.phi, 1e-14);
        HaltonSequence seq(2, 123);
        std::vector<std::vector<double>> pts;
        for (std::size_t k = 0; k < 4 * fam.size(); ++k)
            pts.push_back(seq.next_in_box(box.half_width));
        const RankResult sampled = rank_decision(collocation_matrix(fam, pts), ro, labels);
        CHECK(exact.independence == sampled.independence);
    }
}
