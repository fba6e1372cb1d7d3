#include "linboltz/quadrature.hpp"

#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "linboltz/halton.hpp"
#include "linboltz/numeric.hpp"

namespace linboltz {

GibbsRule build_gibbs_rule(const Potential& phi, const GibbsRuleOptions& opts) {
    const int n = phi.dim();
    GibbsRule rule;
    rule.dim = n;
    rule.box = truncation_box(phi, opts.density_threshold);
    rule.axes.resize(n);
    std::vector<std::size_t> sizes(n);
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) {
        rule.axes[i] = gibbs_axis_rule(opts.nodes_per_panel, -rule.box.half_width[i],
                                                rule.box.half_width[i], opts.panel_width);
        sizes[i] = rule.axes[i].nodes.size();
        total *= sizes[i];
    }
    rule.nodes.resize(total * n);
    rule.weights.resize(total);
    rule.gibbs_weight.resize(total);
    std::vector<double> x(n);
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t rem = f;
        double w = 1.0;
        for (int i = n - 1; i >= 0; --i) {
            const std::size_t k = rem % sizes[i];
            rem /= sizes[i];
            x[i] = rule.axes[i].nodes[k];
            w *= rule.axes[i].weights[k];
        }
        for (int i = 0; i < n; ++i) rule.nodes[f * n + i] = x[i];
        rule.weights[f] = w;
        rule.gibbs_weight[f] = w * std::exp(-phi.eval(x));
    }

    // sampled boundary density, for the truncation-mass warning
    HaltonSequence seq(n, 99);
    double bmax = 0.0;
    for (int k = 0; k < 512; ++k) {
        std::vector<double> p = seq.next_in_box(rule.box.half_width);
        const int face = k % (2 * n);
        p[face / 2] = (face % 2 == 0 ? 1.0 : -1.0) * rule.box.half_width[face / 2];
        bmax = std::max(bmax, std::exp(-phi.eval(p)));
    }
    rule.boundary_density = bmax;
    rule.truncation_warning = bmax > 1e-12;
    return rule;
}

double gibbs_integral(const std::function<double(std::span<const double>)>& g,
                      const GibbsRule& rule) {
    std::vector<double> terms(rule.size());
    for (std::size_t k = 0; k < rule.size(); ++k)
        terms[k] = rule.gibbs_weight[k] * g(rule.node(k));
    return pairwise_sum(terms);
}

SpectralConstants spectral_constants(const Potential& phi, const GibbsRule& rule,
                                     const VelocityQuadrature& vel) {
    const int n = phi.dim();
    if (vel.dim != n) throw std::invalid_argument("spectral_constants: dimension mismatch");
    SpectralConstants c;
    c.dim = n;

    // velocity moments of the normalized Gaussian
    {
        Polynomial xi2(n);
        for (int i = 0; i < n; ++i) {
            std::vector<int> e(n, 0);
            e[i] = 2;
            xi2.add_term(MultiIndex{e}, 1.0);
        }
        c.A1 = velocity_moment(xi2, vel);
        c.A2 = velocity_moment(
            [](std::span<const double> xi) {
                double r2 = 0.0;
                for (double v : xi) r2 += v * v;
                return r2 * r2;
            },
            vel);
    }

    // cached per-node quantities
    const std::size_t N = rule.size();
    std::vector<double> phiv(N), r2v(N);
    for (std::size_t k = 0; k < N; ++k) {
        const auto x = rule.node(k);
        phiv[k] = phi.eval(x);
        double r2 = 0.0;
        for (double xi : x) r2 += xi * xi;
        r2v[k] = r2;
    }
    auto gibbs = [&](const std::function<double(std::size_t)>& f) {
        std::vector<double> terms(N);
        for (std::size_t k = 0; k < N; ++k) terms[k] = rule.gibbs_weight[k] * f(k);
        return pairwise_sum(terms);
    };

    const double A1 = c.A1, A2 = c.A2;
    c.lambda1_1 = 2.0 * gibbs([&](std::size_t k) { return 0.5 * A1 + phiv[k]; });
    c.lambda1_2 = 2.0 * gibbs([&](std::size_t k) {
        return phiv[k] * phiv[k] + A1 * phiv[k] + 0.25 * A2;
    });
    c.lambda2_1 = gibbs([&](std::size_t k) { return 0.5 * r2v[k]; });
    c.lambda2_2 = gibbs([&](std::size_t k) { return 0.5 * r2v[k] * (0.5 * A1 + phiv[k]); });
    c.lambda3_1 = gibbs([](std::size_t) { return 1.0; });
    c.lambda3_2 = gibbs([&](std::size_t k) { return 0.5 * A1 + phiv[k]; });
    c.lambda4_1.resize(n);
    c.lambda4_2.resize(n);
    for (int i = 0; i < n; ++i) {
        c.lambda4_1[i] = gibbs([&](std::size_t k) { return rule.node(k)[i]; });
        c.lambda4_2[i] =
            gibbs([&](std::size_t k) { return (0.5 * A1 + phiv[k]) * rule.node(k)[i]; });
    }

    c.denominator = c.lambda1_2 - c.lambda1_1 * c.lambda3_2;
    c.numerator = c.lambda2_2 - c.lambda2_1 * c.lambda3_2;
    c.numerator_vec.resize(n);
    for (int i = 0; i < n; ++i)
        c.numerator_vec[i] = c.lambda4_2[i] - c.lambda4_1[i] * c.lambda3_2;

    if (!(c.denominator > 0.0))
        throw std::runtime_error(
            "spectral_constants: l1^2 - l1^1 l3^2 <= 0; quadrature inconsistent with the "
            "variance identity");

    c.Lambda_phi = -c.numerator / c.denominator;
    c.V_phi.resize(n);
    for (int i = 0; i < n; ++i) c.V_phi[i] = c.numerator_vec[i] / c.denominator;
    return c;
}

DualRouteReport dual_route_check(const Potential& phi, const GibbsRule& rule,
                            const SpectralConstants& constants, int threads) {
    const int n = phi.dim();
    if (n != 2)
        throw std::invalid_argument("dual_route_check: double-integral route is limited to n = 2");

    DualRouteReport rep;
    rep.denom_single = constants.denominator;
    rep.numer_single = constants.numerator;
    rep.vec_single = constants.numerator_vec;

    const std::size_t N = rule.size();
    std::vector<double> phiv(N), r2v(N), x1(N), x2(N);
    for (std::size_t k = 0; k < N; ++k) {
        const auto x = rule.node(k);
        phiv[k] = phi.eval(x);
        r2v[k] = x[0] * x[0] + x[1] * x[1];
        x1[k] = x[0];
        x2[k] = x[1];
    }
    const std::vector<double>& gw = rule.gibbs_weight;

    // row partials combined in index order: deterministic for any thread count
    const int T = std::max(1, threads);
    struct Partial {
        double var_phi = 0.0, numer = 0.0, v1 = 0.0, v2 = 0.0;
    };
    std::vector<Partial> partials(N);
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t a = lo; a < hi; ++a) {
            double s_var = 0.0, s_num = 0.0, s_v1 = 0.0, s_v2 = 0.0;
            const double pa = phiv[a], ra = r2v[a], xa1 = x1[a], xa2 = x2[a], wa = gw[a];
            for (std::size_t b = 0; b < N; ++b) {
                const double w = wa * gw[b];
                const double dphi = pa - phiv[b];
                s_var += w * dphi * dphi;
                s_num += w * dphi * (ra - r2v[b]);
                s_v1 += w * dphi * (xa1 - x1[b]);
                s_v2 += w * dphi * (xa2 - x2[b]);
            }
            partials[a] = {s_var, s_num, s_v1, s_v2};
        }
    };
    if (T == 1) {
        work(0, N);
    } else {
        std::vector<std::future<void>> futs;
        const std::size_t chunk = (N + T - 1) / T;
        for (int t = 0; t < T; ++t) {
            const std::size_t lo = t * chunk, hi = std::min(N, lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, work, lo, hi));
        }
        for (auto& f : futs) f.get();
    }
    double var_phi = 0.0, numer = 0.0, v1 = 0.0, v2 = 0.0;
    for (std::size_t a = 0; a < N; ++a) {
        var_phi += partials[a].var_phi;
        numer += partials[a].numer;
        v1 += partials[a].v1;
        v2 += partials[a].v2;
    }

    // (l1^2 - l1^1 l3^2) = 2 { Var_mu(phi) + (A2 - A1^2)/4 }, with the
    // variance written as the symmetrized double integral
    rep.denom_double =
        2.0 * (0.5 * var_phi + 0.25 * (constants.A2 - constants.A1 * constants.A1));
    rep.numer_double = 0.25 * numer;
    rep.vec_double = {0.5 * v1, 0.5 * v2};

    rep.denom_rel_diff = rel_diff(rep.denom_single, rep.denom_double);
    rep.numer_rel_diff = rel_diff(rep.numer_single, rep.numer_double);
    {
        double scale = 0.0, diff = 0.0;
        for (int i = 0; i < n; ++i) {
            scale = std::max({scale, std::abs(rep.vec_single[i]), std::abs(rep.vec_double[i])});
            diff = std::max(diff, std::abs(rep.vec_single[i] - rep.vec_double[i]));
        }
        // vector combination can be legitimately zero (even potentials)
        rep.vec_rel_diff = scale > 1e-12 ? diff / scale : diff;
    }
    rep.denominator_positive = rep.denom_single > 0.0 && rep.denom_double > 0.0;
    rep.agreement_ok = rep.denom_rel_diff < rep.tolerance &&
                       rep.numer_rel_diff < rep.tolerance && rep.vec_rel_diff < rep.tolerance;
    return rep;
}

}  // namespace linboltz
