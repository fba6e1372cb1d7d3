#pragma once

#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace linboltz {

// Multi-index of exponents, one entry per spatial dimension.
struct MultiIndex {
    std::vector<int> exponents;

    int degree() const {
        return std::accumulate(exponents.begin(), exponents.end(), 0);
    }
    bool operator<(const MultiIndex& o) const { return exponents < o.exponents; }
    bool operator==(const MultiIndex& o) const { return exponents == o.exponents; }
};

// Sparse polynomial in n variables with real coefficients. Coefficients below
// `kDropTol` (relative to the largest coefficient) produced by arithmetic are
// kept; exact structural zeros are erased, so that parity and angular-residual
// certificates read off the term map directly.
class Polynomial {
public:
    static constexpr double kDropTol = 0.0;  // exact zeros only

    Polynomial() : dim_(0) {}
    explicit Polynomial(int dim) : dim_(dim) {
        if (dim < 1) throw std::invalid_argument("Polynomial: dim must be >= 1");
    }

    int dim() const { return dim_; }
    bool empty() const { return terms_.empty(); }
    const std::map<MultiIndex, double>& terms() const { return terms_; }

    void add_term(const MultiIndex& mi, double coeff) {
        if (static_cast<int>(mi.exponents.size()) != dim_)
            throw std::invalid_argument("Polynomial: multi-index dimension mismatch");
        for (int e : mi.exponents)
            if (e < 0) throw std::invalid_argument("Polynomial: negative exponent");
        if (coeff == 0.0) return;
        auto it = terms_.find(mi);
        if (it == terms_.end()) {
            terms_.emplace(mi, coeff);
        } else {
            it->second += coeff;
            if (it->second == 0.0) terms_.erase(it);
        }
    }

    static Polynomial constant(int dim, double c) {
        Polynomial p(dim);
        p.add_term(MultiIndex{std::vector<int>(dim, 0)}, c);
        return p;
    }

    // the monomial x_i
    static Polynomial coordinate(int dim, int i) {
        Polynomial p(dim);
        std::vector<int> e(dim, 0);
        e[i] = 1;
        p.add_term(MultiIndex{e}, 1.0);
        return p;
    }

    double eval(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dim_)
            throw std::invalid_argument("Polynomial::eval: dimension mismatch");
        double s = 0.0;
        for (const auto& [mi, c] : terms_) {
            double m = c;
            for (int i = 0; i < dim_; ++i) {
                const int e = mi.exponents[i];
                double p = 1.0, b = x[i];
                int k = e;
                while (k > 0) {  // exponentiation by squaring keeps (-x)^e exact
                    if (k & 1) p *= b;
                    b *= b;
                    k >>= 1;
                }
                m *= p;
            }
            s += m;
        }
        return s;
    }

    Polynomial derivative(int axis) const {
        Polynomial d(dim_);
        for (const auto& [mi, c] : terms_) {
            const int e = mi.exponents[axis];
            if (e == 0) continue;
            MultiIndex m = mi;
            m.exponents[axis] = e - 1;
            d.add_term(m, c * static_cast<double>(e));
        }
        return d;
    }

    // multiply by the monomial x_axis
    Polynomial times_coordinate(int axis) const {
        Polynomial r(dim_);
        for (const auto& [mi, c] : terms_) {
            MultiIndex m = mi;
            m.exponents[axis] += 1;
            r.add_term(m, c);
        }
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) {
        if (o.dim_ != dim_) throw std::invalid_argument("Polynomial: dim mismatch");
        for (const auto& [mi, c] : o.terms_) add_term(mi, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        if (o.dim_ != dim_) throw std::invalid_argument("Polynomial: dim mismatch");
        for (const auto& [mi, c] : o.terms_) add_term(mi, -c);
        return *this;
    }
    Polynomial operator+(const Polynomial& o) const { Polynomial r = *this; r += o; return r; }
    Polynomial operator-(const Polynomial& o) const { Polynomial r = *this; r -= o; return r; }
    Polynomial operator*(double s) const {
        Polynomial r(dim_);
        if (s == 0.0) return r;
        for (const auto& [mi, c] : terms_) r.terms_.emplace(mi, c * s);
        return r;
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [mi, c] : terms_) d = std::max(d, mi.degree());
        return d;
    }

    // φ(-x) == φ(x) exactly: every term has even total degree.
    bool is_even() const {
        for (const auto& [mi, c] : terms_)
            if (mi.degree() % 2 != 0) return false;
        return true;
    }

    // even under the simultaneous flip (x_i, x_j) -> (-x_i, -x_j)
    bool is_even_in_pair(int i, int j) const {
        for (const auto& [mi, c] : terms_)
            if ((mi.exponents[i] + mi.exponents[j]) % 2 != 0) return false;
        return true;
    }

    // largest |coefficient|, 0 for the zero polynomial
    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [mi, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

private:
    int dim_;
    std::map<MultiIndex, double> terms_;
};

}  // namespace linboltz
