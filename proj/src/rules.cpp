#include "linboltz/rules.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "linboltz/numeric.hpp"

namespace linboltz {

Rule1D gauss_legendre(int p, double a, double b) {
    if (p < 1) throw std::invalid_argument("gauss_legendre: need p >= 1");
    Rule1D rule;
    rule.nodes.resize(p);
    rule.weights.resize(p);
    // Newton iteration on P_p over [-1, 1], exploiting node symmetry.
    const int half = (p + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (p + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            if (p == 1) { p1 = x; }
            for (int k = 2; k <= p; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_p(x), p0 = P_{p-1}(x)
            pp = p * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.nodes[i] = -x;
        rule.nodes[p - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[p - 1 - i] = w;
    }
    if (p == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
    }
    // map [-1,1] -> [a,b]
    const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (int i = 0; i < p; ++i) {
        rule.nodes[i] = mid + hw * rule.nodes[i];
        rule.weights[i] *= hw;
    }
    return rule;
}

namespace {

Rule1D composite_impl(int p, double a, double b, int panels) {
    Rule1D rule;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * p);
    rule.weights.reserve(static_cast<std::size_t>(panels) * p);
    const double w = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        Rule1D sub = gauss_legendre(p, a + k * w, a + (k + 1) * w);
        rule.nodes.insert(rule.nodes.end(), sub.nodes.begin(), sub.nodes.end());
        rule.weights.insert(rule.weights.end(), sub.weights.begin(), sub.weights.end());
    }
    return rule;
}

void check_interval(int p, double a, double b, double panel_width) {
    if (p < 1) throw std::invalid_argument("composite rule: need p >= 1");
    if (b <= a) throw std::invalid_argument("composite rule: empty interval");
    if (panel_width <= 0.0) throw std::invalid_argument("composite rule: bad panel width");
}

}  // namespace

Rule1D composite_gauss_legendre(int p, double a, double b, double panel_width) {
    check_interval(p, a, b, panel_width);
    const int panels = std::max(1, static_cast<int>(std::lround((b - a) / panel_width)));
    return composite_impl(p, a, b, panels);
}

Rule1D gibbs_axis_rule(int p, double a, double b, double panel_width) {
    check_interval(p, a, b, panel_width);
    const int by_width = static_cast<int>(std::lround((b - a) / panel_width));
    const int by_floor = (64 + p - 1) / p;
    return composite_impl(p, a, b, std::max({1, by_width, by_floor}));
}

std::size_t VelocityQuadrature::size() const {
    std::size_t s = 1;
    for (int i = 0; i < dim; ++i) s *= axis.nodes.size();
    return s;
}

std::vector<double> VelocityQuadrature::node(std::size_t flat) const {
    std::vector<double> x(dim);
    const std::size_t m = axis.nodes.size();
    for (int i = dim - 1; i >= 0; --i) {
        x[i] = axis.nodes[flat % m];
        flat /= m;
    }
    return x;
}

double VelocityQuadrature::weight(std::size_t flat) const {
    double w = 1.0;
    const std::size_t m = axis.nodes.size();
    for (int i = dim - 1; i >= 0; --i) {
        w *= axis.weights[flat % m];
        flat /= m;
    }
    return w;
}

VelocityQuadrature hermite_rule(int m, int n) {
    if (m < 1) throw std::invalid_argument("hermite_rule: need m >= 1");
    if (n < 1) throw std::invalid_argument("hermite_rule: need n >= 1");
    VelocityQuadrature q;
    q.dim = n;
    q.nodes_per_axis = m;
    // Golub-Welsch on the probabilists' Hermite Jacobi matrix:
    // diagonal 0, off-diagonal sqrt(k).
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) {
        const double b = std::sqrt(static_cast<double>(k));
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    q.axis.nodes.resize(m);
    q.axis.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        q.axis.nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        q.axis.weights[i] = v0 * v0;  // total Gaussian mass is 1
    }
    // enforce exact symmetry of the node set about the origin
    for (int i = 0; i < m / 2; ++i) {
        const double x = 0.5 * (q.axis.nodes[m - 1 - i] - q.axis.nodes[i]);
        q.axis.nodes[i] = -x;
        q.axis.nodes[m - 1 - i] = x;
        const double w = 0.5 * (q.axis.weights[i] + q.axis.weights[m - 1 - i]);
        q.axis.weights[i] = w;
        q.axis.weights[m - 1 - i] = w;
    }
    if (m % 2 == 1) q.axis.nodes[m / 2] = 0.0;
    return q;
}

double velocity_moment(const Polynomial& p, const VelocityQuadrature& rule) {
    if (p.dim() != rule.dim)
        throw std::invalid_argument("velocity_moment: dimension mismatch");
    const int max_exact = 2 * rule.nodes_per_axis - 1;
    for (const auto& [mi, c] : p.terms())
        for (int e : mi.exponents)
            if (e > max_exact)
                throw std::invalid_argument(
                    "velocity_moment: rule degree insufficient for integrand");
    return velocity_moment(
        [&p](std::span<const double> x) { return p.eval(x); }, rule);
}

double velocity_moment(const std::function<double(std::span<const double>)>& g,
                       const VelocityQuadrature& rule) {
    const std::size_t n = rule.size();
    std::vector<double> terms(n);
    std::vector<double> x(rule.dim);
    for (std::size_t f = 0; f < n; ++f) {
        x = rule.node(f);
        terms[f] = rule.weight(f) * g(x);
    }
    return pairwise_sum(terms);
}

}  // namespace linboltz
