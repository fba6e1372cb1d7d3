#include "linboltz/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "linboltz/halton.hpp"
#include "linboltz/numeric.hpp"
#include "linboltz/rules.hpp"

namespace linboltz {

namespace {

void check_point(const Potential& phi, std::span<const double> x) {
    if (static_cast<int>(x.size()) != phi.dim())
        throw std::invalid_argument("Potential: point dimension mismatch");
}

// <t>^a and d/dt <t>^a = a t <t>^{a-2}, with <t> = sqrt(1 + t^2)
inline double bracket_pow(double t, double a) {
    return std::pow(1.0 + t * t, 0.5 * a);
}
inline double bracket_pow_deriv(double t, double a) {
    return a * t * std::pow(1.0 + t * t, 0.5 * a - 1.0);
}

}  // namespace

Potential Potential::polynomial(Polynomial p, double offset) {
    if (p.dim() < 1) throw std::invalid_argument("Potential: bad polynomial");
    Potential phi;
    phi.dim_ = p.dim();
    phi.form_ = PotentialForm::kPolynomial;
    phi.poly_ = std::move(p);
    phi.offset_ = offset;
    return phi;
}

Potential Potential::radial_power(int n, double beta, double alpha, double offset) {
    if (n < 2) throw std::invalid_argument("Potential: dimension must be >= 2");
    if (beta <= 0.0 || alpha <= 0.0)
        throw std::invalid_argument("Potential: radial power needs beta, alpha > 0");
    Potential phi;
    phi.dim_ = n;
    phi.form_ = PotentialForm::kRadialPower;
    phi.beta_ = beta;
    phi.alpha_ = alpha;
    phi.offset_ = offset;
    return phi;
}

Potential Potential::separable_power(std::vector<double> betas, std::vector<double> alphas,
                                     double offset) {
    const int n = static_cast<int>(betas.size());
    if (n < 2 || alphas.size() != betas.size())
        throw std::invalid_argument("Potential: separable power needs n >= 2 matching arrays");
    for (int i = 0; i < n; ++i)
        if (betas[i] <= 0.0 || alphas[i] <= 0.0)
            throw std::invalid_argument("Potential: separable power needs beta_i, alpha_i > 0");
    Potential phi;
    phi.dim_ = n;
    phi.form_ = PotentialForm::kSeparablePower;
    phi.betas_ = std::move(betas);
    phi.alphas_ = std::move(alphas);
    phi.offset_ = offset;
    return phi;
}

Potential Potential::harmonic(int n) {
    Polynomial p(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 2;
        p.add_term(MultiIndex{e}, 0.5);
    }
    return polynomial(std::move(p));
}

Potential Potential::phi1(int n, double beta, double alpha) {
    return radial_power(n, beta, alpha);
}

Potential Potential::phi2(std::vector<double> betas, std::vector<double> alphas) {
    return separable_power(std::move(betas), std::move(alphas));
}

Potential Potential::phi3(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(a.size());
    if (n < 2 || b.size() != a.size())
        throw std::invalid_argument("Potential: phi3 needs n >= 2 matching arrays");
    Polynomial p(n);
    for (int i = 0; i < n; ++i) {
        if (a[i] <= 0.0 || b[i] == 0.0)
            throw std::invalid_argument("Potential: phi3 needs a_i > 0, b_i != 0");
        std::vector<int> e(n, 0);
        e[i] = 2 * (i + 2);  // 2(i+1) with 1-based i
        p.add_term(MultiIndex{e}, a[i]);
        std::vector<int> e1(n, 0);
        e1[i] = 1;
        p.add_term(MultiIndex{e1}, b[i]);
    }
    return polynomial(std::move(p));
}

Potential Potential::quartic_separable(int n) {
    Polynomial p(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 4;
        p.add_term(MultiIndex{e}, 1.0);
    }
    return polynomial(std::move(p));
}

Potential Potential::with_offset(double c) const {
    Potential phi = *this;
    phi.offset_ = c;
    return phi;
}

double Potential::eval(std::span<const double> x) const {
    check_point(*this, x);
    switch (form_) {
        case PotentialForm::kPolynomial:
            return poly_.eval(x) + offset_;
        case PotentialForm::kRadialPower: {
            double r2 = 0.0;
            for (double xi : x) r2 += xi * xi;
            return beta_ * std::pow(1.0 + r2, 0.5 * alpha_) + offset_;
        }
        case PotentialForm::kSeparablePower: {
            double s = offset_;
            for (int i = 0; i < dim_; ++i) s += betas_[i] * bracket_pow(x[i], alphas_[i]);
            return s;
        }
    }
    return 0.0;
}

std::vector<double> Potential::grad(std::span<const double> x) const {
    check_point(*this, x);
    std::vector<double> g(dim_, 0.0);
    switch (form_) {
        case PotentialForm::kPolynomial:
            for (int i = 0; i < dim_; ++i) g[i] = poly_.derivative(i).eval(x);
            break;
        case PotentialForm::kRadialPower: {
            double r2 = 0.0;
            for (double xi : x) r2 += xi * xi;
            const double factor = beta_ * alpha_ * std::pow(1.0 + r2, 0.5 * alpha_ - 1.0);
            for (int i = 0; i < dim_; ++i) g[i] = factor * x[i];
            break;
        }
        case PotentialForm::kSeparablePower:
            for (int i = 0; i < dim_; ++i)
                g[i] = betas_[i] * bracket_pow_deriv(x[i], alphas_[i]);
            break;
    }
    return g;
}

double Potential::virial(std::span<const double> x) const {
    const std::vector<double> g = grad(x);
    double s = 2.0 * eval(x);
    for (int i = 0; i < dim_; ++i) s += x[i] * g[i];
    return s;
}

double Potential::angular_residual(int i, int j, std::span<const double> x) const {
    if (i == j) throw std::invalid_argument("angular_residual: need i != j");
    if (i < 0 || j < 0 || i >= dim_ || j >= dim_)
        throw std::invalid_argument("angular_residual: index out of range");
    const std::vector<double> g = grad(x);
    return x[i] * g[j] - x[j] * g[i];
}

bool Potential::is_even() const {
    switch (form_) {
        case PotentialForm::kPolynomial: return poly_.is_even();
        case PotentialForm::kRadialPower: return true;
        case PotentialForm::kSeparablePower: return true;
    }
    return false;
}

bool Potential::is_even_in_pair(int i, int j) const {
    if (i == j) throw std::invalid_argument("is_even_in_pair: need i != j");
    switch (form_) {
        case PotentialForm::kPolynomial: return poly_.is_even_in_pair(i, j);
        case PotentialForm::kRadialPower: return true;
        case PotentialForm::kSeparablePower: return true;
    }
    return false;
}

const Polynomial& Potential::poly() const {
    if (form_ != PotentialForm::kPolynomial)
        throw std::logic_error("Potential::poly: not a polynomial form");
    return poly_;
}

Polynomial Potential::partial_poly(int axis) const {
    return poly().derivative(axis);
}

Polynomial Potential::angular_residual_poly(int i, int j) const {
    if (i == j) throw std::invalid_argument("angular_residual_poly: need i != j");
    const Polynomial& p = poly();
    return p.derivative(j).times_coordinate(i) - p.derivative(i).times_coordinate(j);
}

Polynomial Potential::virial_poly() const {
    const Polynomial& p = poly();
    Polynomial v = p * 2.0;
    v += Polynomial::constant(dim_, 2.0 * offset_);
    for (int i = 0; i < dim_; ++i) v += p.derivative(i).times_coordinate(i);
    return v;
}

bool Potential::structurally_radial() const {
    if (form_ == PotentialForm::kRadialPower) return true;
    if (form_ == PotentialForm::kSeparablePower) {
        // separable potentials are rotation invariant in a pair only in the
        // harmonic case alpha_i = alpha_j = 2 with equal strengths; full
        // radiality needs that for all axes
        for (int i = 0; i < dim_; ++i)
            if (alphas_[i] != 2.0 || betas_[i] != betas_[0]) return false;
        return true;
    }
    return false;
}

std::vector<std::pair<int, int>> AngularPairSet::complement_upper() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            if (!contains(i, j)) out.emplace_back(i, j);
    return out;
}

std::vector<std::pair<int, int>> AngularPairSet::members_upper() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            if (contains(i, j)) out.emplace_back(i, j);
    return out;
}

double TruncationBox::volume() const {
    double v = 1.0;
    for (double h : half_width) v *= 2.0 * h;
    return v;
}

TruncationBox truncation_box(const Potential& phi, double density_threshold,
                             const SamplingOptions& sampling) {
    const int n = phi.dim();
    const double level = -std::log(density_threshold);

    // estimate the minimum of phi from coarse samples around the origin
    double phi_min = phi.eval(std::vector<double>(n, 0.0));
    {
        HaltonSequence seq(n, sampling.seed);
        std::vector<double> hw(n, 2.0);
        for (int k = 0; k < 512; ++k)
            phi_min = std::min(phi_min, phi.eval(seq.next_in_box(hw)));
    }
    const double target = phi_min + level;

    TruncationBox box;
    box.half_width.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double hw = 0.0;
        for (int sign = -1; sign <= 1; sign += 2) {
            std::vector<double> x(n, 0.0);
            double r = 1.0;
            int guard = 0;
            while (true) {
                x[i] = sign * r;
                if (phi.eval(x) >= target) break;
                r *= 1.5;
                if (++guard > 200)
                    throw std::runtime_error(
                        "truncation_box: potential does not grow along axis " +
                        std::to_string(i) + " (not confining)");
            }
            // bisect to the crossing
            double lo = r / 1.5, hi = r;
            if (r == 1.0) lo = 0.0;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                x[i] = sign * mid;
                (phi.eval(x) >= target ? hi : lo) = mid;
            }
            hw = std::max(hw, hi);
        }
        box.half_width[i] = hw;
    }

    // inflate until sampled boundary faces obey the threshold
    for (int round = 0; round < 60; ++round) {
        bool ok = true;
        HaltonSequence seq(n, sampling.seed + 7);
        for (int k = 0; k < sampling.points && ok; ++k) {
            std::vector<double> p = seq.next_in_box(box.half_width);
            const int face = k % (2 * n);
            p[face / 2] = (face % 2 == 0 ? 1.0 : -1.0) * box.half_width[face / 2];
            if (phi.eval(p) < target) {
                box.half_width[face / 2] *= 1.1;
                ok = false;
            }
        }
        if (ok) break;
        if (round == 59)
            throw std::runtime_error("truncation_box: boundary check failed to converge");
    }
    return box;
}

AngularPairSet compute_S_phi(const Potential& phi, const SamplingOptions& sampling) {
    const int n = phi.dim();
    AngularPairSet s;
    s.dim = n;

    // box for residual sampling; the threshold only needs a reasonable scale
    TruncationBox box = truncation_box(phi, 1e-14, sampling);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            bool member = false;
            if (phi.is_polynomial()) {
                member = phi.angular_residual_poly(i, j).empty();
            } else if (phi.form() == PotentialForm::kRadialPower) {
                member = true;  // x x grad phi vanishes identically
            } else {
                // separable: rotation invariance in the pair needs the
                // harmonic exponent on both axes with equal strengths
                member = phi.separable_alphas()[i] == 2.0 &&
                         phi.separable_alphas()[j] == 2.0 &&
                         phi.separable_betas()[i] == phi.separable_betas()[j];
            }
            // sampled residual sup, recorded for every pair
            HaltonSequence seq(n, sampling.seed + 1);
            double sup = 0.0;
            for (int k = 0; k < sampling.points; ++k) {
                const std::vector<double> x = seq.next_in_box(box.half_width);
                sup = std::max(sup, std::abs(phi.angular_residual(i, j, x)));
            }
            s.residual_norms[{i, j}] = sup;
            if (!phi.is_polynomial()) member = member && sup < sampling.membership_threshold;
            if (member) s.pairs.insert({i, j});
        }
    }
    return s;
}

Potential normalize(const Potential& phi, const NormalizeOptions& opts) {
    const int n = phi.dim();
    TruncationBox box = truncation_box(phi, opts.density_floor);

    std::vector<Rule1D> axes(n);
    for (int i = 0; i < n; ++i)
        axes[i] = gibbs_axis_rule(opts.nodes_per_panel, -box.half_width[i],
                                           box.half_width[i], opts.panel_width);

    // integral of exp(-phi) over the box, accumulated in axis-major order
    std::vector<std::size_t> sizes(n);
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) {
        sizes[i] = axes[i].nodes.size();
        total *= sizes[i];
    }
    std::vector<double> terms(total);
    std::vector<double> x(n);
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t rem = f;
        double w = 1.0;
        for (int i = n - 1; i >= 0; --i) {
            const std::size_t k = rem % sizes[i];
            rem /= sizes[i];
            x[i] = axes[i].nodes[k];
            w *= axes[i].weights[k];
        }
        terms[f] = w * std::exp(-phi.eval(x));
    }
    const double mass = pairwise_sum(terms);
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw std::runtime_error("normalize: Gibbs mass is not positive/finite");
    return phi.with_offset(phi.offset() + std::log(mass));
}

}  // namespace linboltz
