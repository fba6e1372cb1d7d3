#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "linboltz/polynomial.hpp"

namespace linboltz {

enum class PotentialForm { kPolynomial, kRadialPower, kSeparablePower };

// Confining potential in one of three closed forms:
//   polynomial        sum_alpha c_alpha x^alpha
//   radial power      beta <x>^alpha,          <x> = sqrt(1 + |x|^2)
//   separable power   sum_i beta_i <x_i>^alpha_i
// plus an additive constant C used for normalization. Immutable after
// construction; all evaluation is pure.
class Potential {
public:
    Potential() = default;  // empty; assign from a factory before use

    static Potential polynomial(Polynomial p, double offset = 0.0);
    static Potential radial_power(int n, double beta, double alpha, double offset = 0.0);
    static Potential separable_power(std::vector<double> betas, std::vector<double> alphas,
                                     double offset = 0.0);

    // presets
    static Potential harmonic(int n);                           // |x|^2 / 2
    static Potential phi1(int n, double beta, double alpha);    // beta <x>^alpha
    static Potential phi2(std::vector<double> betas, std::vector<double> alphas);
    // phi3: sum_i a_i x_i^{2(i+1)} + sum_i b_i x_i
    static Potential phi3(std::vector<double> a, std::vector<double> b);
    static Potential quartic_separable(int n);                  // sum_i x_i^4

    int dim() const { return dim_; }
    PotentialForm form() const { return form_; }
    double offset() const { return offset_; }
    Potential with_offset(double c) const;

    double eval(std::span<const double> x) const;
    std::vector<double> grad(std::span<const double> x) const;
    // 2 phi(x) + x . grad phi(x)
    double virial(std::span<const double> x) const;
    // x_i d_j phi - x_j d_i phi
    double angular_residual(int i, int j, std::span<const double> x) const;

    bool is_even() const;
    bool is_even_in_pair(int i, int j) const;

    bool is_polynomial() const { return form_ == PotentialForm::kPolynomial; }
    // polynomial content including the offset term; throws for other forms
    const Polynomial& poly() const;
    Polynomial partial_poly(int axis) const;
    Polynomial angular_residual_poly(int i, int j) const;
    Polynomial virial_poly() const;

    // exact structural facts
    bool structurally_radial() const;

    // parameters, for serialization
    double radial_beta() const { return beta_; }
    double radial_alpha() const { return alpha_; }
    const std::vector<double>& separable_betas() const { return betas_; }
    const std::vector<double>& separable_alphas() const { return alphas_; }

private:

    int dim_ = 0;
    PotentialForm form_ = PotentialForm::kPolynomial;
    Polynomial poly_;                  // kPolynomial (without offset)
    double beta_ = 0.0, alpha_ = 0.0;  // kRadialPower
    std::vector<double> betas_, alphas_;
    double offset_ = 0.0;
};

// Index pairs (i,j), i != j, with x_i d_j phi - x_j d_i phi identically zero,
// together with the sampled residual sup for every pair.
struct AngularPairSet {
    int dim = 0;
    std::set<std::pair<int, int>> pairs;                 // closed under swap
    std::map<std::pair<int, int>, double> residual_norms;

    bool contains(int i, int j) const { return pairs.count({i, j}) > 0; }
    bool all_pairs() const {
        return static_cast<int>(pairs.size()) == dim * (dim - 1);
    }
    // representatives i < j of pairs NOT in the set
    std::vector<std::pair<int, int>> complement_upper() const;
    // representatives i < j of pairs in the set
    std::vector<std::pair<int, int>> members_upper() const;
};

struct SamplingOptions {
    std::uint64_t seed = 12345;
    int points = 1000;
    double membership_threshold = 1e-10;  // sampled sup below this => conserved pair
};

// Centered box with per-axis half-widths.
struct TruncationBox {
    std::vector<double> half_width;
    int dim() const { return static_cast<int>(half_width.size()); }
    double volume() const;
};

// Smallest centered box with exp(-phi) < density_threshold on the boundary,
// found by per-axis ray search and inflated until a sampled boundary check
// passes. Throws if phi fails to grow along some axis (not confining).
TruncationBox truncation_box(const Potential& phi, double density_threshold,
                             const SamplingOptions& sampling = {});

AngularPairSet compute_S_phi(const Potential& phi, const SamplingOptions& sampling = {});

struct NormalizeOptions {
    int nodes_per_panel = 20;
    double panel_width = 4.0;
    // integration box is cut where exp(-phi) falls below this
    double density_floor = 1e-20;
    double tolerance = 1e-8;
};

// Adjusts the additive constant so that the Gibbs quadrature of 1 equals 1.
Potential normalize(const Potential& phi, const NormalizeOptions& opts = {});

}  // namespace linboltz
