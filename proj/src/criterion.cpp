#include "linboltz/criterion.hpp"

#include <cmath>
#include <stdexcept>

#include "linboltz/halton.hpp"
#include "linboltz/numeric.hpp"

namespace linboltz {

namespace {

FamilyMember make_constant(int n) {
    FamilyMember m;
    m.label = "1";
    m.fn = [](std::span<const double>) { return 1.0; };
    m.poly = Polynomial::constant(n, 1.0);
    return m;
}

FamilyMember make_coordinate(int n, int i) {
    FamilyMember m;
    m.label = "x" + std::to_string(i + 1);
    m.fn = [i](std::span<const double> x) { return x[i]; };
    m.poly = Polynomial::coordinate(n, i);
    return m;
}

FamilyMember make_r2(int n) {
    FamilyMember m;
    m.label = "|x|^2";
    m.fn = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    };
    Polynomial p(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 2;
        p.add_term(MultiIndex{e}, 1.0);
    }
    m.poly = p;
    return m;
}

FamilyMember make_partial(const Potential& phi, int i) {
    FamilyMember m;
    m.label = "d" + std::to_string(i + 1) + "phi";
    m.fn = [phi, i](std::span<const double> x) { return phi.grad(x)[i]; };
    if (phi.is_polynomial()) m.poly = phi.partial_poly(i);
    return m;
}

FamilyMember make_residual(const Potential& phi, int i, int j) {
    FamilyMember m;
    m.label = "x" + std::to_string(i + 1) + "d" + std::to_string(j + 1) + "phi-x" +
              std::to_string(j + 1) + "d" + std::to_string(i + 1) + "phi";
    m.fn = [phi, i, j](std::span<const double> x) { return phi.angular_residual(i, j, x); };
    if (phi.is_polynomial()) m.poly = phi.angular_residual_poly(i, j);
    return m;
}

FamilyMember make_virial(const Potential& phi) {
    FamilyMember m;
    m.label = "2phi+x.grad_phi";
    m.fn = [phi](std::span<const double> x) { return phi.virial(x); };
    if (phi.is_polynomial()) m.poly = phi.virial_poly();
    return m;
}

bool all_polynomial(const std::vector<FamilyMember>& family) {
    for (const auto& m : family)
        if (!m.poly.has_value()) return false;
    return true;
}

}  // namespace

std::vector<FamilyMember> family_condition_ii(const Potential& phi,
                                              const AngularPairSet& s_phi) {
    const int n = phi.dim();
    std::vector<FamilyMember> fam;
    fam.push_back(make_constant(n));
    for (int i = 0; i < n; ++i) fam.push_back(make_coordinate(n, i));
    for (int i = 0; i < n; ++i) fam.push_back(make_partial(phi, i));
    for (const auto& [i, j] : s_phi.complement_upper()) fam.push_back(make_residual(phi, i, j));
    return fam;
}

std::vector<FamilyMember> family_condition_ii_prime(const Potential& phi,
                                                    const AngularPairSet& s_phi) {
    const int n = phi.dim();
    std::vector<FamilyMember> fam;
    fam.push_back(make_constant(n));
    for (int i = 0; i < n; ++i) fam.push_back(make_coordinate(n, i));
    fam.push_back(make_r2(n));
    for (int i = 0; i < n; ++i) fam.push_back(make_partial(phi, i));
    for (const auto& [i, j] : s_phi.complement_upper()) fam.push_back(make_residual(phi, i, j));
    fam.push_back(make_virial(phi));
    return fam;
}

CriterionSystem assemble_criterion_matrix(const Potential& phi, const AngularPairSet& s_phi,
                                          const CriterionOptions& opts) {
    std::vector<FamilyMember> fam = family_condition_ii_prime(phi, s_phi);
    std::vector<std::string> labels;
    for (const auto& m : fam) labels.push_back(m.label);

    CriterionSystem sys;
    sys.family = labels;
    if (all_polynomial(fam)) {
        std::vector<Polynomial> polys;
        for (const auto& m : fam) polys.push_back(*m.poly);
        sys.matrix = monomial_matrix(polys);
        sys.exact = true;
    } else {
        TruncationBox box = truncation_box(phi, 1e-14, opts.sampling);
        HaltonSequence seq(phi.dim(), opts.sampling.seed);
        std::vector<std::vector<double>> pts;
        const int count = opts.collocation_factor * static_cast<int>(fam.size());
        for (int k = 0; k < count; ++k) pts.push_back(seq.next_in_box(box.half_width));
        sys.matrix = collocation_matrix(fam, pts);
        sys.exact = false;
    }
    RankResult rr = rank_decision(sys.matrix, opts.rank, labels);
    sys.nullspace = rr.nullspace;
    sys.smallest_singular = rr.smallest_singular;
    sys.min_gram_eigenvalue = rr.min_gram_eigenvalue;
    sys.independence = rr.independence;
    return sys;
}

std::vector<double> SpatialGrid::point(std::size_t flat) const {
    const int n = dim();
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        x[i] = coord(i, static_cast<int>(flat % cells[i]));
        flat /= cells[i];
    }
    return x;
}

namespace {

struct GridStrides {
    std::vector<std::size_t> s;
    explicit GridStrides(const SpatialGrid& g) : s(g.dim()) {
        std::size_t acc = 1;
        for (int i = g.dim() - 1; i >= 0; --i) {
            s[i] = acc;
            acc *= g.cells[i];
        }
    }
};

// visit interior cells (one-cell margin per axis)
template <typename F>
void for_interior(const SpatialGrid& g, F&& f) {
    const int n = g.dim();
    std::vector<int> idx(n, 1);
    GridStrides st(g);
    while (true) {
        std::size_t flat = 0;
        for (int i = 0; i < n; ++i) flat += idx[i] * st.s[i];
        f(flat, idx);
        int axis = n - 1;
        while (axis >= 0) {
            if (++idx[axis] <= g.cells[axis] - 2) break;
            idx[axis] = 1;
            --axis;
        }
        if (axis < 0) break;
    }
}

}  // namespace

MacroscopicResiduals macroscopic_residual(const MomentFields& prev, const MomentFields& next,
                                          double dt2, const Potential& phi) {
    const SpatialGrid& g = prev.grid;
    const int n = g.dim();
    if (next.grid.cells != g.cells)
        throw std::invalid_argument("macroscopic_residual: grids differ");
    if (dt2 <= 0.0) throw std::invalid_argument("macroscopic_residual: need dt2 > 0");
    GridStrides st(g);

    // mid-time fields for spatial derivatives
    const std::size_t N = g.size();
    std::vector<double> a(N), c(N);
    std::vector<std::vector<double>> b(n, std::vector<double>(N));
    for (std::size_t k = 0; k < N; ++k) {
        a[k] = 0.5 * (prev.a[k] + next.a[k]);
        c[k] = 0.5 * (prev.c[k] + next.c[k]);
        for (int i = 0; i < n; ++i) b[i][k] = 0.5 * (prev.b[i][k] + next.b[i][k]);
    }
    auto ddx = [&](const std::vector<double>& f, std::size_t flat, int axis) {
        return (f[flat + st.s[axis]] - f[flat - st.s[axis]]) / (2.0 * g.spacing(axis));
    };

    double sa = 0.0, sb = 0.0, scd = 0.0, ssh = 0.0, sgc = 0.0;
    std::size_t cells = 0;
    for_interior(g, [&](std::size_t k, const std::vector<int>&) {
        ++cells;
        const std::vector<double> x = g.point(k);
        const std::vector<double> gphi = phi.grad(x);

        double adot = (next.a[k] - prev.a[k]) / dt2;
        double cdot = (next.c[k] - prev.c[k]) / dt2;

        // da/dt - grad phi . b
        double ra = adot;
        for (int i = 0; i < n; ++i) ra -= gphi[i] * b[i][k];
        sa += ra * ra;

        // db/dt + grad a - 2 c grad phi
        for (int i = 0; i < n; ++i) {
            const double bdot = (next.b[i][k] - prev.b[i][k]) / dt2;
            const double rb = bdot + ddx(a, k, i) - 2.0 * c[k] * gphi[i];
            sb += rb * rb;
        }

        // dc/dt + d_i b_i, one equation per axis
        for (int i = 0; i < n; ++i) {
            const double rc = cdot + ddx(b[i], k, i);
            scd += rc * rc;
        }

        // d_j b_i + d_i b_j, i < j
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double rs = ddx(b[i], k, j) + ddx(b[j], k, i);
                ssh += rs * rs;
            }

        // grad c
        for (int i = 0; i < n; ++i) {
            const double rg = ddx(c, k, i);
            sgc += rg * rg;
        }
    });

    const double inv = cells > 0 ? 1.0 / static_cast<double>(cells) : 0.0;
    MacroscopicResiduals r;
    r.eq_a = std::sqrt(sa * inv);
    r.eq_b = std::sqrt(sb * inv / n);
    r.eq_c_diag = std::sqrt(scd * inv / n);
    r.eq_shear = n > 1 ? std::sqrt(ssh * inv / (n * (n - 1) / 2)) : 0.0;
    r.eq_grad_c = std::sqrt(sgc * inv / n);
    return r;
}

ConservationValues conservation_functionals(const ScalarField& a, const VectorField& b,
                                            const ScalarField& c, const Potential& phi,
                                            const SpectralConstants& constants,
                                            const AngularPairSet& s_phi,
                                            const GibbsRule& rule) {
    ConservationValues out;
    const double A1 = constants.A1, A2 = constants.A2;
    out.mass = gibbs_integral(
        [&](std::span<const double> x) { return a(x) + A1 * c(x); }, rule);
    out.energy = gibbs_integral(
                     [&](std::span<const double> x) {
                         return 0.5 * A1 * a(x) + 0.5 * A2 * c(x);
                     },
                     rule) +
                 gibbs_integral(
                     [&](std::span<const double> x) {
                         return (a(x) + A1 * c(x)) * phi.eval(x);
                     },
                     rule);
    for (const auto& [i, j] : s_phi.members_upper()) {
        out.angular.push_back(gibbs_integral(
            [&](std::span<const double> x) {
                const std::vector<double> bv = b(x);
                return x[i] * bv[j] - x[j] * bv[i];
            },
            rule));
    }
    return out;
}

ZeroSolutionVerdict zero_solution_verdict(const Potential& phi, const AngularPairSet& s_phi,
                                          const SpectralConstants& constants,
                                          const GibbsRule& rule, const VerdictOptions& opts) {
    const int n = phi.dim();
    ZeroSolutionVerdict v;
    v.system = assemble_criterion_matrix(phi, s_phi, opts.criterion);

    // Step-6 elimination: the angular functionals kill the S_phi block of B2
    // only because int (x_i^2 + x_j^2) dmu > 0
    v.angular_elimination_ok = true;
    for (const auto& [i, j] : s_phi.members_upper()) {
        const double m = gibbs_integral(
            [&](std::span<const double> x) { return x[i] * x[i] + x[j] * x[j]; }, rule);
        v.angular_gibbs_moments.push_back(m);
        if (!(m > 0.0)) v.angular_elimination_ok = false;
    }

    // dropped constraints leave explicit nonzero solutions regardless of rank
    const bool s_phi_nonempty = !s_phi.members_upper().empty();
    if (!opts.use_angular_constraint && s_phi_nonempty) {
        WitnessFields w;
        w.description = "steady rigid rotation b = B2 x on a conserved pair; survives "
                        "without the angular-momentum constraint";
        w.B2 = Eigen::MatrixXd::Zero(n, n);
        const auto [i, j] = s_phi.members_upper().front();
        w.B2(i, j) = 1.0;
        w.B2(j, i) = -1.0;
        v.unique_zero = false;
        v.status = TestStatus::kFail;
        v.witness = w;
        return v;
    }
    if (!opts.use_mass_constraint || !opts.use_energy_constraint) {
        // steady family a = 2 c phi + d, b = 0, c constant; the active
        // constraint (if any) is one linear equation in (c, d)
        double cc = 0.0, dd = 0.0;
        if (!opts.use_mass_constraint && !opts.use_energy_constraint) {
            cc = 0.0;
            dd = 1.0;  // the steady Maxwellian direction a = 1
        } else if (!opts.use_mass_constraint) {
            cc = constants.lambda3_2;
            dd = -constants.lambda1_2;  // annihilates the energy functional
        } else {
            cc = constants.lambda3_1;
            dd = -constants.lambda1_1;  // annihilates the mass functional
        }
        WitnessFields w;
        w.description = "steady mode a = 2 c phi + d surviving the dropped constraint";
        w.omega = 0.0;
        w.c_amplitude = cc;
        w.d_amplitude = dd;
        w.B2 = Eigen::MatrixXd::Zero(n, n);
        v.unique_zero = false;
        v.status = TestStatus::kFail;
        v.witness = w;
        return v;
    }

    if (v.system.independence == TestStatus::kInconclusive) {
        v.status = TestStatus::kInconclusive;
        v.unique_zero = false;
        return v;
    }
    if (v.system.independence == TestStatus::kPass && v.angular_elimination_ok) {
        v.unique_zero = true;
        v.status = TestStatus::kPass;
        return v;
    }

    // dependent family: build the oscillatory c-mode when it exists
    v.unique_zero = false;
    v.status = TestStatus::kFail;
    if (constants.Lambda_phi < 0.0) {
        WitnessFields w;
        const double omega = std::sqrt(-1.0 / constants.Lambda_phi);
        w.description = "oscillatory c-mode c(t) = cos(omega t) with c = Lambda_phi c''";
        w.omega = omega;
        w.c_amplitude = 1.0;
        // mass functional: c l1^1 + c'' l2^1 + d l3^1 = 0 with c'' = -omega^2 c
        w.d_amplitude = -(constants.lambda1_1 - omega * omega * constants.lambda2_1) /
                        constants.lambda3_1;
        w.B2 = Eigen::MatrixXd::Zero(n, n);
        v.witness = w;
    }
    return v;
}

}  // namespace linboltz
