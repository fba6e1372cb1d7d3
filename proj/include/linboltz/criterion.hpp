#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "linboltz/potential.hpp"
#include "linboltz/quadrature.hpp"
#include "linboltz/rank.hpp"

namespace linboltz {

// Families of scalar functions whose linear independence decides the
// uniqueness question.
//
// condition (ii):  {1} u {x_i} u {d_i phi} u {x_i d_j phi - x_j d_i phi :
//                   i < j, (i,j) not in S_phi}
// condition (ii)': {1} u {x_i} u {|x|^2} u {d_i phi} u {residuals over S~_phi}
//                   u {2 phi + x . grad phi}
std::vector<FamilyMember> family_condition_ii(const Potential& phi,
                                              const AngularPairSet& s_phi);
std::vector<FamilyMember> family_condition_ii_prime(const Potential& phi,
                                                    const AngularPairSet& s_phi);

struct CriterionOptions {
    SamplingOptions sampling;
    RankOptions rank;
    int collocation_factor = 4;  // sample points per family member
};

// Finite-dimensional realization of the zero-solution criterion: a matrix
// whose null vectors are the coefficient tuples annihilating the (ii)'
// combination identically (polynomial case) or on the sample set.
struct CriterionSystem {
    std::vector<std::string> family;     // member labels, in column order
    Eigen::MatrixXd matrix;              // monomial or collocation matrix
    bool exact = false;                  // true: exact monomial coefficients
    Eigen::MatrixXd nullspace;           // columns
    double smallest_singular = 0.0;      // of the column-normalized matrix
    double min_gram_eigenvalue = 0.0;
    TestStatus independence = TestStatus::kInconclusive;
};

CriterionSystem assemble_criterion_matrix(const Potential& phi, const AngularPairSet& s_phi,
                                          const CriterionOptions& opts = {});

// ---- macroscopic moment fields ---------------------------------------------

// Uniform cell-centered grid on a centered box.
struct SpatialGrid {
    TruncationBox box;
    std::vector<int> cells;  // per axis

    int dim() const { return box.dim(); }
    double spacing(int axis) const { return 2.0 * box.half_width[axis] / cells[axis]; }
    std::size_t size() const {
        std::size_t s = 1;
        for (int c : cells) s *= c;
        return s;
    }
    double cell_volume() const {
        double v = 1.0;
        for (int i = 0; i < dim(); ++i) v *= spacing(i);
        return v;
    }
    // cell-centered coordinate along an axis
    double coord(int axis, int index) const {
        return -box.half_width[axis] + (index + 0.5) * spacing(axis);
    }
    std::vector<double> point(std::size_t flat) const;
};

// Scalar moment field on a spatial grid (a or c), plus the vector field b.
struct MomentFields {
    SpatialGrid grid;
    std::vector<double> a;               // size grid.size()
    std::vector<std::vector<double>> b;  // dim fields
    std::vector<double> c;
};

// Discrete residual norms of the macroscopic system, from two time levels a
// time 2*dt apart (centered time derivative, central space differences on
// interior cells):
//   da/dt - grad phi . b          (transport of a)
//   db/dt + grad a - 2 c grad phi (transport of b)
//   dc/dt + d_i b_i, per axis     (diagonal stress)
//   d_j b_i + d_i b_j, i != j     (shear-free constraint)
//   grad c                        (c spatially constant)
struct MacroscopicResiduals {
    double eq_a = 0.0;
    double eq_b = 0.0;
    double eq_c_diag = 0.0;
    double eq_shear = 0.0;
    double eq_grad_c = 0.0;
    double max() const {
        return std::max({eq_a, eq_b, eq_c_diag, eq_shear, eq_grad_c});
    }
};

MacroscopicResiduals macroscopic_residual(const MomentFields& prev, const MomentFields& next,
                                          double dt2, const Potential& phi);

// Conservation functionals of the moment fields against the Gibbs measure:
//   mass     int (a + A1 c) dmu
//   angular  int (x x b)_ij dmu, (i,j) in S_phi (i < j representatives)
//   energy   int (A1 a / 2 + A2 c / 2) dmu + int (a + A1 c) phi dmu
struct ConservationValues {
    double mass = 0.0;
    std::vector<double> angular;  // matching s_phi.members_upper()
    double energy = 0.0;
};

using ScalarField = std::function<double(std::span<const double>)>;
using VectorField = std::function<std::vector<double>(std::span<const double>)>;

ConservationValues conservation_functionals(const ScalarField& a, const VectorField& b,
                                            const ScalarField& c, const Potential& phi,
                                            const SpectralConstants& constants,
                                            const AngularPairSet& s_phi,
                                            const GibbsRule& rule);

// ---- verdict ----------------------------------------------------------------

struct VerdictOptions {
    CriterionOptions criterion;
    bool use_mass_constraint = true;
    bool use_angular_constraint = true;
    bool use_energy_constraint = true;
};

// A nonzero solution of the transport system surviving the active
// constraints, in the reduced parameterization
//   a = 2 c phi + (1/2) c'' |x|^2 + d,   b = B2 x,   c constant or
//   oscillatory c(t) with c = Lambda_phi c''.
struct WitnessFields {
    std::string description;
    // oscillatory mode: c(t) = cos(omega t), omega^2 = -1/Lambda_phi (only
    // when Lambda_phi < 0); steady mode: omega = 0
    double omega = 0.0;
    double c_amplitude = 0.0;
    double d_amplitude = 0.0;  // d(t) = d_amplitude * c(t)
    Eigen::MatrixXd B2;        // skew, constant
};

struct ZeroSolutionVerdict {
    bool unique_zero = false;
    TestStatus status = TestStatus::kInconclusive;
    CriterionSystem system;
    // positivity of int (x_i^2 + x_j^2) dmu for the S_phi pairs
    std::vector<double> angular_gibbs_moments;
    bool angular_elimination_ok = false;
    std::optional<WitnessFields> witness;
};

ZeroSolutionVerdict zero_solution_verdict(const Potential& phi, const AngularPairSet& s_phi,
                                          const SpectralConstants& constants,
                                          const GibbsRule& rule,
                                          const VerdictOptions& opts = {});

}  // namespace linboltz
