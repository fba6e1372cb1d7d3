#include <doctest.h>

#include <cmath>

#include "linboltz/rules.hpp"

using namespace linboltz;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    Rule1D r = gauss_legendre(6, -1.0, 3.0);
    double s0 = 0.0, s7 = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
        s0 += r.weights[k];
        s7 += r.weights[k] * std::pow(r.nodes[k], 7);
    }
    CHECK(s0 == doctest::Approx(4.0).epsilon(1e-14));
    // int_{-1}^{3} x^7 dx = (3^8 - 1)/8
    CHECK(s7 == doctest::Approx((6561.0 - 1.0) / 8.0).epsilon(1e-13));
}

TEST_CASE("hermite rule small cases") {
    VelocityQuadrature q1 = hermite_rule(1, 1);
    REQUIRE(q1.axis.nodes.size() == 1);
    CHECK(q1.axis.nodes[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q1.axis.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

    // moment-matching oracle through degree 3 pins nodes {-1, +1}, weights {1/2, 1/2}
    VelocityQuadrature q2 = hermite_rule(2, 1);
    CHECK(q2.axis.nodes[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(q2.axis.nodes[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q2.axis.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(q2.axis.weights[1] == doctest::Approx(0.5).epsilon(1e-12));
    double m0 = 0, m1 = 0, m2 = 0, m3 = 0;
    for (int i = 0; i < 2; ++i) {
        const double x = q2.axis.nodes[i], w = q2.axis.weights[i];
        m0 += w; m1 += w * x; m2 += w * x * x; m3 += w * x * x * x;
    }
    CHECK(m0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m1 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m3 == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("gaussian second moment in 2d") {
    VelocityQuadrature q = hermite_rule(8, 2);
    Polynomial p(2);
    p.add_term(MultiIndex{{2, 0}}, 1.0);
    p.add_term(MultiIndex{{0, 2}}, 1.0);
    CHECK(velocity_moment(p, q) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("velocity_moment flags insufficient degree") {
    VelocityQuadrature q = hermite_rule(2, 1);
    Polynomial p(1);
    p.add_term(MultiIndex{{4}}, 1.0);
    CHECK_THROWS(velocity_moment(p, q));
}
