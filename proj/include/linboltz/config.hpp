#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linboltz/potential.hpp"

namespace linboltz {

// Fully resolved run configuration. Defaults are filled during parsing;
// unknown keys and constraint violations are rejected with the key path.
struct RunConfig {
    // [potential]
    std::string preset = "harmonic";  // harmonic|phi1|phi2|phi3|quartic|polynomial
    int dimension = 2;
    double beta = 1.0;
    double alpha = 1.0;
    std::vector<double> betas;            // phi2
    std::vector<double> alphas;           // phi2
    std::vector<double> phi3_a;           // phi3 even coefficients
    std::vector<double> phi3_b;           // phi3 linear coefficients
    std::vector<std::vector<double>> terms;  // polynomial: exponents then coefficient

    // [grid]
    int spatial_cells = 32;
    int velocity_cells = 24;
    double velocity_extent = 6.0;

    // [quadrature]
    int nodes_per_panel = 20;
    double panel_width = 4.0;
    int velocity_nodes = 32;

    // [collision]
    double gamma = 0.0;
    double q0 = 1.0;
    int angle_nodes = 48;
    int hermite_nodes = 32;
    std::string cache_file;

    // [time]
    double dt = 0.01;
    double horizon = 10.0;
    double output_interval = 0.1;

    // [tolerances]
    double rank_dependent = 1e-8;
    double rank_independent = 1e-6;
    double constancy = 1e-6;
    double mass_drift = 1e-6;
    double energy_drift = 1e-5;
    double angular_drift = 1e-5;
    double boundary_loss = 1e-6;

    // [sampling]
    std::uint64_t seed = 12345;
    int points = 1000;

    // [simulation]
    bool conserve_projection = true;
    bool collision_enabled = true;
    bool transport_enabled = true;
    bool potential_enabled = true;
    bool force = false;
    std::string boundary = "absorbing";        // absorbing | periodic
    std::string interpolation = "cubic";       // cubic | spectral
    double fit_skip_fraction = 0.2;

    // [initial]
    std::string initial_kind = "bump";  // bump | zero
    double amplitude = 1.0;
    std::vector<double> center_x;
    std::vector<double> center_v;
    double sigma_x = 2.5;
    double sigma_v = 1.2;
    bool normalize_initial = true;

    Potential build_potential() const;  // unnormalized
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// serialization of the fully resolved configuration (the echo written next
// to run outputs)
std::string config_echo(const RunConfig& cfg);

}  // namespace linboltz
