#include <doctest.h>

#include <cmath>

#include "linboltz/quadrature.hpp"

using namespace linboltz;

TEST_CASE("gibbs integrals on the harmonic preset") {
    const Potential h = normalize(Potential::harmonic(2));
    const GibbsRule rule = build_gibbs_rule(h);
    CHECK_FALSE(rule.truncation_warning);

    CHECK(gibbs_integral([](std::span<const double>) { return 1.0; }, rule) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(gibbs_integral([](std::span<const double> x) { return x[0]; }, rule)) <
          1e-8);
    CHECK(gibbs_integral(
              [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; }, rule) ==
          doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("chi-square variance identity A2 - A1^2 = 2n") {
    for (int n : {2, 3}) {
        const VelocityQuadrature vel = hermite_rule(16, n);
        Polynomial xi2(n);
        for (int i = 0; i < n; ++i) {
            std::vector<int> e(n, 0);
            e[i] = 2;
            xi2.add_term(MultiIndex{e}, 1.0);
        }
        const double a1 = velocity_moment(xi2, vel);
        const double a2 = velocity_moment(
            [](std::span<const double> xi) {
                double r2 = 0.0;
                for (double v : xi) r2 += v * v;
                return r2 * r2;
            },
            vel);
        CHECK(a1 == doctest::Approx(n).epsilon(1e-8));
        CHECK(a2 == doctest::Approx(n * (n + 2)).epsilon(1e-8));
        CHECK(a2 - a1 * a1 == doctest::Approx(2.0 * n).epsilon(1e-8));
    }
}

TEST_CASE("spectral constants on presets") {
    const VelocityQuadrature vel = hermite_rule(32, 2);

    SUBCASE("harmonic closed form") {
        const Potential h = normalize(Potential::harmonic(2));
        const GibbsRule rule = build_gibbs_rule(h);
        const SpectralConstants c = spectral_constants(h, rule, vel);
        CHECK(c.lambda3_1 == doctest::Approx(1.0).epsilon(1e-6));
        // numerator n/2, denominator 2n
        CHECK(c.numerator == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(c.denominator == doctest::Approx(4.0).epsilon(1e-6));
        CHECK(c.Lambda_phi == doctest::Approx(-0.25).epsilon(1e-3));
        for (double v : c.V_phi) CHECK(std::abs(v) < 1e-8);
    }

    SUBCASE("every preset has lambda3^1 = 1 and positive denominator") {
        const Potential presets[] = {
            normalize(Potential::harmonic(2)),
            normalize(Potential::phi1(2, 1.0, 1.0)),
            normalize(Potential::phi2({1.0, 1.0}, {1.0, 4.0})),
            normalize(Potential::phi3({1.0, 1.0}, {1.0, 1.0})),
            normalize(Potential::quartic_separable(2)),
        };
        for (const Potential& phi : presets) {
            const GibbsRule rule = build_gibbs_rule(phi);
            const SpectralConstants c = spectral_constants(phi, rule, vel);
            CHECK(c.lambda3_1 == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(c.denominator > 0.0);
            if (phi.is_even())
                for (double v : c.V_phi) CHECK(std::abs(v) < 1e-8);
        }
    }
}

TEST_CASE("dual_route: single and symmetrized double routes") {
    const VelocityQuadrature vel = hermite_rule(32, 2);

    SUBCASE("harmonic values") {
        const Potential h = normalize(Potential::harmonic(2));
        const GibbsRule rule = build_gibbs_rule(h);
        const SpectralConstants c = spectral_constants(h, rule, vel);
        const DualRouteReport rep = dual_route_check(h, rule, c, 2);
        CHECK(rep.numer_single == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(rep.numer_double == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(rep.numer_rel_diff < 1e-6);
        CHECK(rep.denominator_positive);
        // even potential: both vector routes vanish
        for (double v : rep.vec_single) CHECK(std::abs(v) < 1e-8);
        for (double v : rep.vec_double) CHECK(std::abs(v) < 1e-8);
    }

    SUBCASE("route agreement on a non-even preset") {
        const Potential p3 = normalize(Potential::phi3({1.0, 1.0}, {1.0, 1.0}));
        const GibbsRule rule = build_gibbs_rule(p3);
        const SpectralConstants c = spectral_constants(p3, rule, vel);
        const DualRouteReport rep = dual_route_check(p3, rule, c, 2);
        CHECK(rep.agreement_ok);
        CHECK(rep.denominator_positive);
    }
}

TEST_CASE("doubling node counts is stable") {
    const VelocityQuadrature vel = hermite_rule(32, 2);
    const Potential p1 = normalize(Potential::phi1(2, 2.0, 1.0));
    GibbsRuleOptions coarse, fine;
    fine.nodes_per_panel = 2 * coarse.nodes_per_panel;
    const SpectralConstants a =
        spectral_constants(p1, build_gibbs_rule(p1, coarse), vel);
    const SpectralConstants b = spectral_constants(p1, build_gibbs_rule(p1, fine), vel);
    CHECK(std::abs(a.lambda1_1 - b.lambda1_1) < 1e-6);
    CHECK(std::abs(a.lambda1_2 - b.lambda1_2) < 1e-6);
    CHECK(std::abs(a.lambda2_1 - b.lambda2_1) < 1e-6);
    CHECK(std::abs(a.lambda2_2 - b.lambda2_2) < 1e-6);
    CHECK(std::abs(a.lambda3_2 - b.lambda3_2) < 1e-6);
    for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(a.lambda4_1[i] - b.lambda4_1[i]) < 1e-6);
        CHECK(std::abs(a.lambda4_2[i] - b.lambda4_2[i]) < 1e-6);
    }
}
