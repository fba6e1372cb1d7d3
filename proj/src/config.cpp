#include "linboltz/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace linboltz {

namespace {

struct Value {
    enum class Type { kBool, kNumber, kString, kArray, kArray2 } type;
    bool b = false;
    double num = 0.0;
    std::string str;
    std::vector<double> arr;
    std::vector<std::vector<double>> arr2;
};

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw std::runtime_error("config: " + key + ": " + what);
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// strip a trailing comment that is not inside a quoted string
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

double parse_number(const std::string& tok, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) fail(key, "malformed number '" + tok + "'");
        return v;
    } catch (const std::exception&) {
        fail(key, "malformed number '" + tok + "'");
    }
}

// parse a possibly nested numeric array: [1, 2] or [[1,2],[3,4]]
Value parse_array(const std::string& text, const std::string& key) {
    Value v;
    std::string s = trim(text);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') fail(key, "malformed array");
    s = trim(s.substr(1, s.size() - 2));
    if (!s.empty() && s.front() == '[') {
        v.type = Value::Type::kArray2;
        int depth = 0;
        std::string cur;
        for (char ch : s) {
            if (ch == '[') {
                ++depth;
                if (depth == 1) {
                    cur.clear();
                    continue;
                }
            }
            if (ch == ']') {
                --depth;
                if (depth == 0) {
                    std::vector<double> row;
                    std::stringstream ss(cur);
                    std::string tok;
                    while (std::getline(ss, tok, ',')) {
                        tok = trim(tok);
                        if (!tok.empty()) row.push_back(parse_number(tok, key));
                    }
                    v.arr2.push_back(std::move(row));
                    continue;
                }
            }
            if (depth >= 1) cur += ch;
        }
        if (depth != 0) fail(key, "unbalanced brackets");
        return v;
    }
    v.type = Value::Type::kArray;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) v.arr.push_back(parse_number(tok, key));
    }
    return v;
}

Value parse_value(const std::string& text, const std::string& key) {
    const std::string s = trim(text);
    if (s.empty()) fail(key, "missing value");
    Value v;
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') fail(key, "unterminated string");
        v.type = Value::Type::kString;
        v.str = s.substr(1, s.size() - 2);
        return v;
    }
    if (s == "true" || s == "false") {
        v.type = Value::Type::kBool;
        v.b = (s == "true");
        return v;
    }
    if (s.front() == '[') return parse_array(s, key);
    v.type = Value::Type::kNumber;
    v.num = parse_number(s, key);
    return v;
}

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "potential.preset", "potential.dimension", "potential.beta", "potential.alpha",
        "potential.betas", "potential.alphas", "potential.a", "potential.b",
        "potential.terms",
        "grid.spatial_cells", "grid.velocity_cells", "grid.velocity_extent",
        "quadrature.nodes_per_panel", "quadrature.panel_width", "quadrature.velocity_nodes",
        "collision.gamma", "collision.q0", "collision.angle_nodes", "collision.hermite_nodes",
        "collision.cache_file",
        "time.dt", "time.horizon", "time.output_interval",
        "tolerances.rank_dependent", "tolerances.rank_independent", "tolerances.constancy",
        "tolerances.mass_drift", "tolerances.energy_drift", "tolerances.angular_drift",
        "tolerances.boundary_loss",
        "sampling.seed", "sampling.points",
        "simulation.conserve_projection", "simulation.collision_enabled",
        "simulation.transport_enabled", "simulation.potential_enabled", "simulation.force",
        "simulation.boundary", "simulation.interpolation", "simulation.fit_skip_fraction",
        "initial.kind", "initial.amplitude", "initial.center_x", "initial.center_v",
        "initial.sigma_x", "initial.sigma_v", "initial.normalize",
    };
    return keys;
}

class Extractor {
public:
    explicit Extractor(std::map<std::string, Value> values) : values_(std::move(values)) {
        for (const auto& [key, v] : values_) {
            if (std::find(known_keys().begin(), known_keys().end(), key) ==
                known_keys().end()) {
                std::string best;
                int best_d = 1 << 20;
                for (const std::string& k : known_keys()) {
                    const int d = edit_distance(key, k);
                    if (d < best_d) {
                        best_d = d;
                        best = k;
                    }
                }
                fail(key, "unknown key (did you mean '" + best + "'?)");
            }
        }
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    double number(const std::string& key, double def) {
        auto it = values_.find(key);
        if (it == values_.end()) return def;
        if (it->second.type != Value::Type::kNumber) fail(key, "expected a number");
        return it->second.num;
    }
    int integer(const std::string& key, int def) {
        const double v = number(key, static_cast<double>(def));
        if (v != std::floor(v)) fail(key, "expected an integer");
        return static_cast<int>(v);
    }
    bool boolean(const std::string& key, bool def) {
        auto it = values_.find(key);
        if (it == values_.end()) return def;
        if (it->second.type != Value::Type::kBool) fail(key, "expected true/false");
        return it->second.b;
    }
    std::string string(const std::string& key, const std::string& def) {
        auto it = values_.find(key);
        if (it == values_.end()) return def;
        if (it->second.type != Value::Type::kString) fail(key, "expected a string");
        return it->second.str;
    }
    std::vector<double> array(const std::string& key, std::vector<double> def) {
        auto it = values_.find(key);
        if (it == values_.end()) return def;
        if (it->second.type == Value::Type::kArray) return it->second.arr;
        if (it->second.type == Value::Type::kArray2 && it->second.arr2.empty()) return {};
        fail(key, "expected a numeric array");
    }
    std::vector<std::vector<double>> array2(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) return {};
        if (it->second.type == Value::Type::kArray2) return it->second.arr2;
        if (it->second.type == Value::Type::kArray && it->second.arr.empty()) return {};
        fail(key, "expected an array of arrays");
    }

private:
    std::map<std::string, Value> values_;
};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    std::map<std::string, Value> values;
    std::string section;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config: line " + std::to_string(lineno) +
                                         ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw std::runtime_error("config: line " + std::to_string(lineno) +
                                         ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::runtime_error("config: line " + std::to_string(lineno) + ": empty key");
        const std::string path = section.empty() ? key : section + "." + key;
        if (values.count(path)) fail(path, "duplicate key");
        values.emplace(path, parse_value(line.substr(eq + 1), path));
    }

    Extractor ex(std::move(values));
    RunConfig cfg;
    cfg.preset = ex.string("potential.preset", cfg.preset);
    cfg.dimension = ex.integer("potential.dimension", cfg.dimension);
    cfg.beta = ex.number("potential.beta", cfg.beta);
    cfg.alpha = ex.number("potential.alpha", cfg.alpha);
    cfg.betas = ex.array("potential.betas", {});
    cfg.alphas = ex.array("potential.alphas", {});
    cfg.phi3_a = ex.array("potential.a", {});
    cfg.phi3_b = ex.array("potential.b", {});
    cfg.terms = ex.array2("potential.terms");

    cfg.spatial_cells = ex.integer("grid.spatial_cells", cfg.spatial_cells);
    cfg.velocity_cells = ex.integer("grid.velocity_cells", cfg.velocity_cells);
    cfg.velocity_extent = ex.number("grid.velocity_extent", cfg.velocity_extent);

    cfg.nodes_per_panel = ex.integer("quadrature.nodes_per_panel", cfg.nodes_per_panel);
    cfg.panel_width = ex.number("quadrature.panel_width", cfg.panel_width);
    cfg.velocity_nodes = ex.integer("quadrature.velocity_nodes", cfg.velocity_nodes);

    cfg.gamma = ex.number("collision.gamma", cfg.gamma);
    cfg.q0 = ex.number("collision.q0", cfg.q0);
    cfg.angle_nodes = ex.integer("collision.angle_nodes", cfg.angle_nodes);
    cfg.hermite_nodes = ex.integer("collision.hermite_nodes", cfg.hermite_nodes);
    cfg.cache_file = ex.string("collision.cache_file", cfg.cache_file);

    cfg.dt = ex.number("time.dt", cfg.dt);
    cfg.horizon = ex.number("time.horizon", cfg.horizon);
    cfg.output_interval = ex.number("time.output_interval", cfg.output_interval);

    cfg.rank_dependent = ex.number("tolerances.rank_dependent", cfg.rank_dependent);
    cfg.rank_independent = ex.number("tolerances.rank_independent", cfg.rank_independent);
    cfg.constancy = ex.number("tolerances.constancy", cfg.constancy);
    cfg.mass_drift = ex.number("tolerances.mass_drift", cfg.mass_drift);
    cfg.energy_drift = ex.number("tolerances.energy_drift", cfg.energy_drift);
    cfg.angular_drift = ex.number("tolerances.angular_drift", cfg.angular_drift);
    cfg.boundary_loss = ex.number("tolerances.boundary_loss", cfg.boundary_loss);

    {
        const double seed = ex.number("sampling.seed", static_cast<double>(cfg.seed));
        if (seed < 0 || seed != std::floor(seed)) fail("sampling.seed", "expected a nonnegative integer");
        cfg.seed = static_cast<std::uint64_t>(seed);
    }
    cfg.points = ex.integer("sampling.points", cfg.points);

    cfg.conserve_projection = ex.boolean("simulation.conserve_projection", cfg.conserve_projection);
    cfg.collision_enabled = ex.boolean("simulation.collision_enabled", cfg.collision_enabled);
    cfg.transport_enabled = ex.boolean("simulation.transport_enabled", cfg.transport_enabled);
    cfg.potential_enabled = ex.boolean("simulation.potential_enabled", cfg.potential_enabled);
    cfg.force = ex.boolean("simulation.force", cfg.force);
    cfg.boundary = ex.string("simulation.boundary", cfg.boundary);
    cfg.interpolation = ex.string("simulation.interpolation", cfg.interpolation);
    cfg.fit_skip_fraction = ex.number("simulation.fit_skip_fraction", cfg.fit_skip_fraction);

    cfg.initial_kind = ex.string("initial.kind", cfg.initial_kind);
    cfg.amplitude = ex.number("initial.amplitude", cfg.amplitude);
    cfg.center_x = ex.array("initial.center_x", {});
    cfg.center_v = ex.array("initial.center_v", {});
    cfg.sigma_x = ex.number("initial.sigma_x", cfg.sigma_x);
    cfg.sigma_v = ex.number("initial.sigma_v", cfg.sigma_v);
    cfg.normalize_initial = ex.boolean("initial.normalize", cfg.normalize_initial);

    // constraint validation, with the key path in the message
    if (cfg.dimension < 2) fail("potential.dimension", "must be >= 2");
    if (cfg.spatial_cells < 2) fail("grid.spatial_cells", "must be >= 2");
    if (cfg.velocity_cells < 2) fail("grid.velocity_cells", "must be >= 2");
    if (cfg.velocity_extent <= 0.0) fail("grid.velocity_extent", "must be positive");
    if (cfg.nodes_per_panel < 2) fail("quadrature.nodes_per_panel", "must be >= 2");
    if (cfg.panel_width <= 0.0) fail("quadrature.panel_width", "must be positive");
    if (cfg.velocity_nodes < 1) fail("quadrature.velocity_nodes", "must be >= 1");
    if (cfg.gamma < 0.0) fail("collision.gamma", "must be >= 0");
    if (cfg.q0 <= 0.0) fail("collision.q0", "must be positive");
    if (cfg.angle_nodes < 4) fail("collision.angle_nodes", "must be >= 4");
    if (cfg.hermite_nodes < 1) fail("collision.hermite_nodes", "must be >= 1");
    if (cfg.dt <= 0.0) fail("time.dt", "must be positive");
    if (cfg.horizon <= 0.0) fail("time.horizon", "must be positive");
    if (cfg.output_interval <= 0.0) fail("time.output_interval", "must be positive");
    for (const auto& [key, v] :
         std::initializer_list<std::pair<std::string, double>>{
             {"tolerances.rank_dependent", cfg.rank_dependent},
             {"tolerances.rank_independent", cfg.rank_independent},
             {"tolerances.constancy", cfg.constancy},
             {"tolerances.mass_drift", cfg.mass_drift},
             {"tolerances.energy_drift", cfg.energy_drift},
             {"tolerances.angular_drift", cfg.angular_drift},
             {"tolerances.boundary_loss", cfg.boundary_loss}})
        if (v <= 0.0) fail(key, "must be positive");
    if (cfg.points < 10) fail("sampling.points", "must be >= 10");
    if (cfg.boundary != "absorbing" && cfg.boundary != "periodic")
        fail("simulation.boundary", "must be 'absorbing' or 'periodic'");
    if (cfg.interpolation != "cubic" && cfg.interpolation != "spectral")
        fail("simulation.interpolation", "must be 'cubic' or 'spectral'");
    if (cfg.fit_skip_fraction < 0.0 || cfg.fit_skip_fraction >= 1.0)
        fail("simulation.fit_skip_fraction", "must be in [0, 1)");
    if (cfg.initial_kind != "bump" && cfg.initial_kind != "zero")
        fail("initial.kind", "must be 'bump' or 'zero'");
    if (cfg.sigma_x <= 0.0) fail("initial.sigma_x", "must be positive");
    if (cfg.sigma_v <= 0.0) fail("initial.sigma_v", "must be positive");

    // build once to surface potential-parameter errors at parse time
    (void)cfg.build_potential();
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

Potential RunConfig::build_potential() const {
    const int n = dimension;
    if (preset == "harmonic") return Potential::harmonic(n);
    if (preset == "phi1") return Potential::phi1(n, beta, alpha);
    if (preset == "phi2") {
        std::vector<double> bs = betas.empty() ? std::vector<double>(n, 1.0) : betas;
        std::vector<double> as = alphas;
        if (as.empty()) {
            as.assign(n, 4.0);
            as[0] = 1.0;
        }
        if (static_cast<int>(bs.size()) != n || static_cast<int>(as.size()) != n)
            fail("potential.betas", "phi2 arrays must match the dimension");
        return Potential::phi2(bs, as);
    }
    if (preset == "phi3") {
        std::vector<double> as = phi3_a.empty() ? std::vector<double>(n, 1.0) : phi3_a;
        std::vector<double> bs = phi3_b.empty() ? std::vector<double>(n, 1.0) : phi3_b;
        if (static_cast<int>(as.size()) != n || static_cast<int>(bs.size()) != n)
            fail("potential.a", "phi3 arrays must match the dimension");
        return Potential::phi3(as, bs);
    }
    if (preset == "quartic") return Potential::quartic_separable(n);
    if (preset == "polynomial") {
        if (terms.empty()) fail("potential.terms", "polynomial preset needs terms");
        Polynomial p(n);
        for (const auto& row : terms) {
            if (static_cast<int>(row.size()) != n + 1)
                fail("potential.terms", "each term needs " + std::to_string(n) +
                                            " exponents and a coefficient");
            MultiIndex mi;
            for (int i = 0; i < n; ++i) {
                if (row[i] < 0 || row[i] != std::floor(row[i]))
                    fail("potential.terms", "exponents must be nonnegative integers");
                mi.exponents.push_back(static_cast<int>(row[i]));
            }
            p.add_term(mi, row[n]);
        }
        return Potential::polynomial(std::move(p));
    }
    fail("potential.preset", "unknown preset '" + preset + "'");
}

namespace {

std::string fmt(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}
std::string fmt_array(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += fmt(v[i]);
    }
    return s + "]";
}

}  // namespace

std::string config_echo(const RunConfig& c) {
    std::ostringstream os;
    os << "# resolved configuration\n";
    os << "[potential]\n";
    os << "preset = \"" << c.preset << "\"\n";
    os << "dimension = " << c.dimension << "\n";
    os << "beta = " << fmt(c.beta) << "\n";
    os << "alpha = " << fmt(c.alpha) << "\n";
    if (!c.betas.empty()) os << "betas = " << fmt_array(c.betas) << "\n";
    if (!c.alphas.empty()) os << "alphas = " << fmt_array(c.alphas) << "\n";
    if (!c.phi3_a.empty()) os << "a = " << fmt_array(c.phi3_a) << "\n";
    if (!c.phi3_b.empty()) os << "b = " << fmt_array(c.phi3_b) << "\n";
    if (!c.terms.empty()) {
        os << "terms = [";
        for (std::size_t i = 0; i < c.terms.size(); ++i) {
            if (i) os << ", ";
            os << fmt_array(c.terms[i]);
        }
        os << "]\n";
    }
    os << "\n[grid]\n";
    os << "spatial_cells = " << c.spatial_cells << "\n";
    os << "velocity_cells = " << c.velocity_cells << "\n";
    os << "velocity_extent = " << fmt(c.velocity_extent) << "\n";
    os << "\n[quadrature]\n";
    os << "nodes_per_panel = " << c.nodes_per_panel << "\n";
    os << "panel_width = " << fmt(c.panel_width) << "\n";
    os << "velocity_nodes = " << c.velocity_nodes << "\n";
    os << "\n[collision]\n";
    os << "gamma = " << fmt(c.gamma) << "\n";
    os << "q0 = " << fmt(c.q0) << "\n";
    os << "angle_nodes = " << c.angle_nodes << "\n";
    os << "hermite_nodes = " << c.hermite_nodes << "\n";
    os << "cache_file = \"" << c.cache_file << "\"\n";
    os << "\n[time]\n";
    os << "dt = " << fmt(c.dt) << "\n";
    os << "horizon = " << fmt(c.horizon) << "\n";
    os << "output_interval = " << fmt(c.output_interval) << "\n";
    os << "\n[tolerances]\n";
    os << "rank_dependent = " << fmt(c.rank_dependent) << "\n";
    os << "rank_independent = " << fmt(c.rank_independent) << "\n";
    os << "constancy = " << fmt(c.constancy) << "\n";
    os << "mass_drift = " << fmt(c.mass_drift) << "\n";
    os << "energy_drift = " << fmt(c.energy_drift) << "\n";
    os << "angular_drift = " << fmt(c.angular_drift) << "\n";
    os << "boundary_loss = " << fmt(c.boundary_loss) << "\n";
    os << "\n[sampling]\n";
    os << "seed = " << c.seed << "\n";
    os << "points = " << c.points << "\n";
    os << "\n[simulation]\n";
    os << "conserve_projection = " << (c.conserve_projection ? "true" : "false") << "\n";
    os << "collision_enabled = " << (c.collision_enabled ? "true" : "false") << "\n";
    os << "transport_enabled = " << (c.transport_enabled ? "true" : "false") << "\n";
    os << "potential_enabled = " << (c.potential_enabled ? "true" : "false") << "\n";
    os << "force = " << (c.force ? "true" : "false") << "\n";
    os << "boundary = \"" << c.boundary << "\"\n";
    os << "interpolation = \"" << c.interpolation << "\"\n";
    os << "fit_skip_fraction = " << fmt(c.fit_skip_fraction) << "\n";
    os << "\n[initial]\n";
    os << "kind = \"" << c.initial_kind << "\"\n";
    os << "amplitude = " << fmt(c.amplitude) << "\n";
    if (!c.center_x.empty()) os << "center_x = " << fmt_array(c.center_x) << "\n";
    if (!c.center_v.empty()) os << "center_v = " << fmt_array(c.center_v) << "\n";
    os << "sigma_x = " << fmt(c.sigma_x) << "\n";
    os << "sigma_v = " << fmt(c.sigma_v) << "\n";
    os << "normalize = " << (c.normalize_initial ? "true" : "false") << "\n";
    return os.str();
}

}  // namespace linboltz
