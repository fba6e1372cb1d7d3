#include <doctest.h>

#include <string>

#include "linboltz/config.hpp"
#include "linboltz/reports.hpp"

using namespace linboltz;

TEST_CASE("minimal config fills defaults") {
    const RunConfig cfg = parse_config_text("[potential]\npreset = \"phi1\"\n");
    CHECK(cfg.preset == "phi1");
    CHECK(cfg.dimension == 2);
    CHECK(cfg.gamma == 0.0);
    CHECK(cfg.spatial_cells == 32);
    CHECK(cfg.velocity_cells == 24);
    CHECK(cfg.dt == 0.01);
    CHECK(cfg.conserve_projection);
    (void)cfg.build_potential();
}

TEST_CASE("constraint violations name the key path") {
    try {
        parse_config_text("[time]\ndt = -1\n");
        FAIL("expected rejection");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("time.dt") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected with a suggestion") {
    try {
        parse_config_text("[potental]\npreset = \"phi1\"\n");
        FAIL("expected rejection");
    } catch (const std::exception& e) {
        const std::string msg = e.what();
        CHECK(msg.find("unknown key") != std::string::npos);
        CHECK(msg.find("potential.preset") != std::string::npos);
    }
    CHECK_THROWS(parse_config_text("[grid]\nspatial_cels = 32\n"));
}

TEST_CASE("type mismatches are rejected") {
    CHECK_THROWS(parse_config_text("[time]\ndt = \"soon\"\n"));
    CHECK_THROWS(parse_config_text("[simulation]\nforce = 1\n"));
    CHECK_THROWS(parse_config_text("[grid]\nspatial_cells = 31.5\n"));
    CHECK_THROWS(parse_config_text("[potential]\npreset = \"nope\"\n"));
}

TEST_CASE("polynomial terms") {
    const RunConfig cfg = parse_config_text(
        "[potential]\n"
        "preset = \"polynomial\"\n"
        "terms = [[4, 0, 1.0], [0, 4, 1.0]]\n");
    const Potential phi = cfg.build_potential();
    CHECK(phi.is_polynomial());
    CHECK(phi.eval(std::vector<double>{1.0, 1.0}) == doctest::Approx(2.0));
    CHECK_THROWS(parse_config_text(
        "[potential]\npreset = \"polynomial\"\nterms = [[4, 1.0]]\n"));
}

TEST_CASE("config echo round-trips") {
    const RunConfig a = parse_config_text(
        "[potential]\npreset = \"phi2\"\nalphas = [1.0, 4.0]\nbetas = [2.0, 0.5]\n"
        "[time]\ndt = 0.005\n"
        "[sampling]\nseed = 777\n");
    const std::string echo = config_echo(a);
    const RunConfig b = parse_config_text(echo);
    CHECK(b.preset == a.preset);
    CHECK(b.dt == a.dt);
    CHECK(b.seed == a.seed);
    CHECK(b.alphas == a.alphas);
    CHECK(config_echo(b) == echo);  // fixed point
}

TEST_CASE("duplicate keys are rejected") {
    CHECK_THROWS(parse_config_text("[time]\ndt = 0.1\ndt = 0.2\n"));
}

TEST_CASE("full-precision number formatting round-trips") {
    const double values[] = {0.1, 1.0 / 3.0, 2.5e-300, -7.25, 6.02214076e23};
    for (double v : values) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}
