#include "linboltz/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "linboltz/fft.hpp"
#include "linboltz/numeric.hpp"

namespace linboltz {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void parallel_for(int threads, std::size_t count, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const int t = std::min<std::size_t>(threads, count);
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + t - 1) / t;
    for (int k = 0; k < t; ++k) {
        const std::size_t lo = k * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Cubic Lagrange shift by a constant displacement on a uniform line:
// dst[i] = src(x_i - delta); taps outside the line read zero (absorbing) or
// wrap (periodic). Weights are identical for every i.
struct ShiftStencil {
    int q = 0;
    double w[4] = {0, 0, 0, 0};
};

ShiftStencil make_shift(double delta_over_h) {
    ShiftStencil st;
    const double d = -delta_over_h;
    const double qf = std::floor(d);
    st.q = static_cast<int>(qf);
    const double t = 1.0 + (d - qf);  // in [1, 2)
    st.w[0] = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    st.w[1] = t * (t - 2.0) * (t - 3.0) / 2.0;
    st.w[2] = -t * (t - 1.0) * (t - 3.0) / 2.0;
    st.w[3] = t * (t - 1.0) * (t - 2.0) / 6.0;
    return st;
}

// Returns the line-content defect sum(before) - sum(after). On an unbounded
// line the constant-shift stencil conserves the plain sum exactly, so a
// nonzero defect measures what the zero-inflow truncation removed at the
// line ends.
double cubic_shift_line(double* buf, int n, const ShiftStencil& st, bool periodic,
                        double* scratch) {
    double before = 0.0, after = 0.0;
    for (int i = 0; i < n; ++i) before += buf[i];
    for (int i = 0; i < n; ++i) {
        const int base = i + st.q - 1;
        double acc = 0.0;
        for (int j = 0; j < 4; ++j) {
            int k = base + j;
            if (periodic) {
                k %= n;
                if (k < 0) k += n;
                acc += st.w[j] * buf[k];
            } else if (k >= 0 && k < n) {
                acc += st.w[j] * buf[k];
            }
        }
        scratch[i] = acc;
        after += acc;
    }
    std::copy(scratch, scratch + n, buf);
    return periodic ? 0.0 : before - after;
}

}  // namespace

DecayReport decay_fit(const std::vector<double>& times, const std::vector<double>& norms,
                      double t0, double t1) {
    if (times.size() != norms.size())
        throw std::invalid_argument("decay_fit: size mismatch");
    DecayReport rep;
    rep.window_t0 = t0;
    rep.window_t1 = t1;
    std::vector<double> ts, ys;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t0 || times[k] > t1) continue;
        if (!(norms[k] > 0.0)) {
            rep.window_shrunk = true;  // nonpositive tail removed
            break;
        }
        ts.push_back(times[k]);
        ys.push_back(std::log(norms[k]));
    }
    rep.samples = static_cast<int>(ts.size());
    if (rep.samples < 10)
        throw std::runtime_error("decay_fit: fewer than 10 usable samples in the window");
    if (rep.window_shrunk) rep.window_t1 = ts.back();

    double st = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        st += ts[k];
        sy += ys[k];
    }
    const double n = static_cast<double>(ts.size());
    const double mt = st / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        sxx += (ts[k] - mt) * (ts[k] - mt);
        sxy += (ts[k] - mt) * (ys[k] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mt;
    rep.sigma = -slope;
    rep.prefactor = std::exp(intercept);
    double ss = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double r = ys[k] - (intercept + slope * ts[k]);
        ss += r * r;
    }
    rep.fit_residual = std::sqrt(ss / n);
    return rep;
}

std::vector<CoercivityWindow> coercivity_diagnostic(const std::vector<LedgerRow>& rows) {
    std::vector<CoercivityWindow> out;
    if (rows.size() < 2) return out;
    const double t_end = rows.back().t;
    for (double t0 = rows.front().t; t0 + 1.0 <= t_end + 1e-12; t0 += 1.0) {
        const double t1 = t0 + 1.0;
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
            const double a = rows[k].t, b = rows[k + 1].t;
            if (b <= t0 || a >= t1) continue;
            const double h = b - a;
            num += 0.5 * h * (rows[k].dirichlet + rows[k + 1].dirichlet);
            den += 0.5 * h *
                   (rows[k].nu_norm * rows[k].nu_norm + rows[k + 1].nu_norm * rows[k + 1].nu_norm);
        }
        CoercivityWindow w;
        w.t0 = t0;
        w.t1 = t1;
        if (den < 1e-14) {
            w.empty = true;
        } else {
            w.ratio = num / den;
        }
        out.push_back(w);
    }
    return out;
}

Simulator::Simulator(Potential phi_normalized, AngularPairSet s_phi,
                     SpectralConstants constants, std::optional<CollisionOperator> op,
                     SpatialGrid xgrid, VelocityGrid vgrid, SimulationOptions opts)
    : phi_(std::move(phi_normalized)),
      s_phi_(std::move(s_phi)),
      constants_(std::move(constants)),
      op_(std::move(op)),
      xgrid_(std::move(xgrid)),
      vgrid_(vgrid),
      opts_(opts) {
    if (xgrid_.dim() != vgrid_.dim || xgrid_.dim() != phi_.dim())
        throw std::invalid_argument("Simulator: dimension mismatch");
    if (xgrid_.dim() != 2)
        throw std::invalid_argument("Simulator: time integration is implemented for n = 2");
    if (opts_.dt <= 0.0) throw std::invalid_argument("Simulator: dt must be positive");
    if (opts_.interpolation == InterpolationMode::kSpectral) {
        if (opts_.boundary != BoundaryMode::kPeriodic)
            throw std::invalid_argument("Simulator: spectral shifts need the periodic mode");
        for (int c : xgrid_.cells)
            if (!is_pow2(c))
                throw std::invalid_argument("Simulator: spectral mode needs power-of-two cells");
        if (opts_.potential_enabled && !is_pow2(vgrid_.per_axis))
            throw std::invalid_argument(
                "Simulator: spectral mode needs a power-of-two velocity grid");
    }

    wx_ = xgrid_.cell_volume();
    wv_ = vgrid_.cell_weight();
    const std::size_t nx = xgrid_.size();
    const std::size_t nv = vgrid_.size();

    // potential samples at cell centers
    phi_cells_.resize(nx);
    grad_phi_.resize(nx);
    double grad_max = 0.0;
    for (std::size_t j = 0; j < nx; ++j) {
        const std::vector<double> x = xgrid_.point(j);
        phi_cells_[j] = phi_.eval(x);
        grad_phi_[j] = phi_.grad(x);
        for (double g : grad_phi_[j]) grad_max = std::max(grad_max, std::abs(g));
    }

    // advection-foot displacement per half step, in cells
    const double min_hx = std::min(xgrid_.spacing(0), xgrid_.spacing(1));
    const double cfl = std::max(vgrid_.extent * 0.5 * opts_.dt / min_hx,
                                grad_max * 0.5 * opts_.dt / vgrid_.spacing());
    if (cfl > opts_.cfl_limit)
        throw std::invalid_argument(
            "Simulator: dt exceeds the configured CFL bound (displacement " +
            std::to_string(cfl) + " cells per substep)");

    // collision pieces
    if (op_) {
        if (op_->grid.size() != nv)
            throw std::invalid_argument("Simulator: operator grid does not match");
        nu_ = op_->nu;
        collision_L_ = op_->L();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(collision_L_);
        Eigen::VectorXd decay = (-opts_.dt * es.eigenvalues().array()).exp();
        exp_collision_ = es.eigenvectors() * decay.asDiagonal() * es.eigenvectors().transpose();
        exp_collision_ = 0.5 * (exp_collision_ + exp_collision_.transpose()).eval();
    } else {
        nu_ = Eigen::VectorXd::Ones(nv);
    }

    // conservation duals: sqrt(M_loc), (x x xi)_ij sqrt(M_loc) for conserved
    // pairs, (|xi|^2/2 + phi) sqrt(M_loc)
    const auto pairs = s_phi_.members_upper();
    duals_.clear();
    const int n = vgrid_.dim;
    Eigen::MatrixXd mass(nv, nx), energy(nv, nx);
    std::vector<Eigen::MatrixXd> ang(pairs.size(), Eigen::MatrixXd(nv, nx));
    for (std::size_t j = 0; j < nx; ++j) {
        const std::vector<double> x = xgrid_.point(j);
        const double ex = std::exp(-0.5 * phi_cells_[j]);
        for (std::size_t r = 0; r < nv; ++r) {
            const std::vector<double> xi = vgrid_.node(r);
            double xi2 = 0.0;
            for (double v : xi) xi2 += v * v;
            const double sm =
                std::pow(2.0 * std::numbers::pi, -0.25 * n) * std::exp(-0.25 * xi2) * ex;
            mass(r, j) = sm;
            energy(r, j) = (0.5 * xi2 + phi_cells_[j]) * sm;
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                const auto [i, jj] = pairs[p];
                ang[p](r, j) = (x[i] * xi[jj] - x[jj] * xi[i]) * sm;
            }
        }
    }
    duals_.push_back(std::move(mass));
    for (auto& a : ang) duals_.push_back(std::move(a));
    duals_.push_back(std::move(energy));

    const int k = static_cast<int>(duals_.size());
    Eigen::MatrixXd gram(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
            const double v = wx_ * wv_ * duals_[a].cwiseProduct(duals_[b]).sum();
            gram(a, b) = v;
            gram(b, a) = v;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ges(gram);
    if (ges.eigenvalues()(0) < 1e-12 * ges.eigenvalues()(k - 1))
        throw std::runtime_error(
            "Simulator: conservation-dual Gram matrix is singular (degenerate potential or "
            "grid)");
    dual_gram_.compute(gram);
}

PhaseField Simulator::zero_field() const {
    PhaseField f;
    f.time = 0.0;
    f.data = Eigen::MatrixXd::Zero(vgrid_.size(), xgrid_.size());
    return f;
}

PhaseField Simulator::bump_field(const InitialBump& bump) const {
    PhaseField f = zero_field();
    const int n = vgrid_.dim;
    std::vector<double> cx = bump.center_x, cv = bump.center_v;
    if (cx.empty()) {
        cx.assign(n, 0.0);
        cx[0] = 0.1 * xgrid_.box.half_width[0];
    }
    if (cv.empty()) {
        cv.assign(n, 0.0);
        cv[0] = 0.5;
    }
    for (std::size_t j = 0; j < xgrid_.size(); ++j) {
        const std::vector<double> x = xgrid_.point(j);
        double dx2 = 0.0;
        for (int i = 0; i < n; ++i) dx2 += (x[i] - cx[i]) * (x[i] - cx[i]);
        const double gx = std::exp(-0.5 * dx2 / (bump.sigma_x * bump.sigma_x));
        for (std::size_t r = 0; r < vgrid_.size(); ++r) {
            const std::vector<double> xi = vgrid_.node(r);
            double dv2 = 0.0;
            for (int i = 0; i < n; ++i) dv2 += (xi[i] - cv[i]) * (xi[i] - cv[i]);
            f.data(r, j) = bump.amplitude * gx *
                           std::exp(-0.5 * dv2 / (bump.sigma_v * bump.sigma_v));
        }
    }
    if (bump.normalize) {
        const double nrm = l2_norm(f);
        if (nrm > 0.0) f.data /= nrm;
    }
    return f;
}

PhaseField Simulator::build_initial(const PhaseField& raw) const {
    PhaseField f = raw;
    conserve_project(f);
    return f;
}

void Simulator::conserve_project(PhaseField& f) const {
    const int k = static_cast<int>(duals_.size());
    Eigen::VectorXd r(k);
    for (int a = 0; a < k; ++a) r(a) = wx_ * wv_ * duals_[a].cwiseProduct(f.data).sum();
    const Eigen::VectorXd c = dual_gram_.solve(r);
    for (int a = 0; a < k; ++a) f.data.noalias() -= c(a) * duals_[a];
}

double Simulator::advect_x(PhaseField& f, double half_dt) const {
    const bool periodic = opts_.boundary == BoundaryMode::kPeriodic;
    const int nx1 = xgrid_.cells[0], nx2 = xgrid_.cells[1];
    const double h1 = xgrid_.spacing(0), h2 = xgrid_.spacing(1);
    const std::size_t nv = vgrid_.size();
    const int m = vgrid_.per_axis;
    const Eigen::MatrixXd& wmass = duals_.front();

    std::vector<double> losses(nv, 0.0);
    parallel_for(opts_.threads, nv, [&](std::size_t r) {
        std::vector<double> plane(static_cast<std::size_t>(nx1) * nx2);
        std::vector<double> line(std::max(nx1, nx2)), scratch(std::max(nx1, nx2));
        const int r1 = static_cast<int>(r) / m;
        const int r2 = static_cast<int>(r) % m;
        const double v1 = vgrid_.axis_coord(r1);
        const double v2 = vgrid_.axis_coord(r2);
        double loss = 0.0;

        for (int j = 0; j < nx1 * nx2; ++j) plane[j] = f.data(r, j);

        if (opts_.interpolation == InterpolationMode::kSpectral) {
            std::vector<double> buf1(nx1);
            for (int i2 = 0; i2 < nx2; ++i2) {
                for (int i1 = 0; i1 < nx1; ++i1) buf1[i1] = plane[i1 * nx2 + i2];
                spectral_shift_periodic(buf1, v1 * half_dt, h1);
                for (int i1 = 0; i1 < nx1; ++i1) plane[i1 * nx2 + i2] = buf1[i1];
            }
            std::vector<double> buf2(nx2);
            for (int i1 = 0; i1 < nx1; ++i1) {
                for (int i2 = 0; i2 < nx2; ++i2) buf2[i2] = plane[i1 * nx2 + i2];
                spectral_shift_periodic(buf2, v2 * half_dt, h2);
                for (int i2 = 0; i2 < nx2; ++i2) plane[i1 * nx2 + i2] = buf2[i2];
            }
        } else {
            const ShiftStencil s1 = make_shift(v1 * half_dt / h1);
            for (int i2 = 0; i2 < nx2; ++i2) {
                for (int i1 = 0; i1 < nx1; ++i1) line[i1] = plane[i1 * nx2 + i2];
                const double d = cubic_shift_line(line.data(), nx1, s1, periodic, scratch.data());
                loss += std::abs(d) * std::max(std::abs(wmass(r, i2)),
                                               std::abs(wmass(r, (nx1 - 1) * nx2 + i2)));
                for (int i1 = 0; i1 < nx1; ++i1) plane[i1 * nx2 + i2] = line[i1];
            }
            const ShiftStencil s2 = make_shift(v2 * half_dt / h2);
            for (int i1 = 0; i1 < nx1; ++i1) {
                double* row = plane.data() + static_cast<std::size_t>(i1) * nx2;
                const double d = cubic_shift_line(row, nx2, s2, periodic, scratch.data());
                loss += std::abs(d) * std::max(std::abs(wmass(r, i1 * nx2)),
                                               std::abs(wmass(r, i1 * nx2 + nx2 - 1)));
            }
        }
        for (int j = 0; j < nx1 * nx2; ++j) f.data(r, j) = plane[j];
        losses[r] = loss;
    });
    return wx_ * wv_ * pairwise_sum(losses);
}

double Simulator::advect_v(PhaseField& f, double half_dt) const {
    if (!opts_.potential_enabled) return 0.0;
    const bool periodic = opts_.boundary == BoundaryMode::kPeriodic;
    const int m = vgrid_.per_axis;
    const double h = vgrid_.spacing();
    const std::size_t nx = xgrid_.size();
    const Eigen::MatrixXd& wmass = duals_.front();

    std::vector<double> losses(nx, 0.0);
    parallel_for(opts_.threads, nx, [&](std::size_t j) {
        std::vector<double> line(m), scratch(m);
        double* col = f.data.col(j).data();
        // displacement -grad phi * half_dt
        const double a1 = -grad_phi_[j][0] * half_dt;
        const double a2 = -grad_phi_[j][1] * half_dt;
        double loss = 0.0;

        if (opts_.interpolation == InterpolationMode::kSpectral) {
            std::vector<double> buf(m);
            for (int r2 = 0; r2 < m; ++r2) {
                for (int r1 = 0; r1 < m; ++r1) buf[r1] = col[r1 * m + r2];
                spectral_shift_periodic(buf, a1, h);
                for (int r1 = 0; r1 < m; ++r1) col[r1 * m + r2] = buf[r1];
            }
            for (int r1 = 0; r1 < m; ++r1) {
                for (int r2 = 0; r2 < m; ++r2) buf[r2] = col[r1 * m + r2];
                spectral_shift_periodic(buf, a2, h);
                for (int r2 = 0; r2 < m; ++r2) col[r1 * m + r2] = buf[r2];
            }
        } else {
            const ShiftStencil s1 = make_shift(a1 / h);
            for (int r2 = 0; r2 < m; ++r2) {
                for (int r1 = 0; r1 < m; ++r1) line[r1] = col[r1 * m + r2];
                const double d = cubic_shift_line(line.data(), m, s1, periodic, scratch.data());
                loss += std::abs(d) * std::max(std::abs(wmass(r2, j)),
                                               std::abs(wmass((m - 1) * m + r2, j)));
                for (int r1 = 0; r1 < m; ++r1) col[r1 * m + r2] = line[r1];
            }
            const ShiftStencil s2 = make_shift(a2 / h);
            for (int r1 = 0; r1 < m; ++r1) {
                const double d = cubic_shift_line(col + static_cast<std::size_t>(r1) * m, m, s2,
                                                  periodic, scratch.data());
                loss += std::abs(d) * std::max(std::abs(wmass(r1 * m, j)),
                                               std::abs(wmass(r1 * m + m - 1, j)));
            }
        }
        losses[j] = loss;
    });
    return wx_ * wv_ * pairwise_sum(losses);
}

void Simulator::collide(PhaseField& f) const {
    if (!op_ || !opts_.collision_enabled) return;
    const std::size_t nx = xgrid_.size();
    Eigen::MatrixXd out(f.data.rows(), f.data.cols());
    // fixed partition: identical column blocks for every thread count keeps
    // the result bit-identical under --threads
    const int blocks = static_cast<int>(std::min<std::size_t>(nx, 16));
    const std::size_t chunk = (nx + blocks - 1) / blocks;
    parallel_for(opts_.threads, blocks, [&](std::size_t bk) {
        const std::size_t lo = bk * chunk, hi = std::min(nx, lo + chunk);
        if (lo >= hi) return;
        out.middleCols(lo, hi - lo).noalias() =
            exp_collision_ * f.data.middleCols(lo, hi - lo);
    });
    f.data.swap(out);
}

Simulator::StepInfo Simulator::step(PhaseField& f) const {
    StepInfo info;
    const double half = 0.5 * opts_.dt;
    if (opts_.transport_enabled) {
        info.boundary_loss += advect_x(f, half);
        info.boundary_loss += advect_v(f, half);
    }
    collide(f);
    if (opts_.transport_enabled) {
        info.boundary_loss += advect_v(f, half);
        info.boundary_loss += advect_x(f, half);
    }
    if (opts_.conserve_projection) conserve_project(f);
    f.time += opts_.dt;
    if (!f.data.allFinite()) throw std::runtime_error("Simulator: non-finite field");
    return info;
}

double Simulator::l2_norm(const PhaseField& f) const {
    return std::sqrt(wx_ * wv_) * f.data.norm();
}

LedgerRow Simulator::measure(const PhaseField& f, double cumulative_boundary_loss) const {
    LedgerRow row;
    row.t = f.time;
    row.mass = wx_ * wv_ * duals_.front().cwiseProduct(f.data).sum();
    row.energy = wx_ * wv_ * duals_.back().cwiseProduct(f.data).sum();
    for (std::size_t p = 1; p + 1 < duals_.size(); ++p)
        row.angular.push_back(wx_ * wv_ * duals_[p].cwiseProduct(f.data).sum());
    row.l2_norm = l2_norm(f);
    row.nu_norm = std::sqrt(wx_ * wv_ *
                            (nu_.asDiagonal() * f.data).cwiseProduct(f.data).sum());
    row.boundary_loss = cumulative_boundary_loss;
    if (op_ && opts_.collision_enabled) {
        row.dirichlet = wx_ * wv_ * (collision_L_ * f.data).cwiseProduct(f.data).sum();
    }
    return row;
}

SimulationResult Simulator::simulate(PhaseField f) const {
    SimulationResult result;
    const long steps = std::lround(opts_.horizon / opts_.dt);
    const long output_every =
        std::max<long>(1, std::lround(opts_.output_interval / opts_.dt));

    double boundary_loss = 0.0;
    result.ledger.push_back(measure(f, boundary_loss));
    double prev_norm = result.ledger.front().l2_norm;
    int violations = 0;

    for (long k = 1; k <= steps; ++k) {
        const StepInfo info = step(f);
        boundary_loss += info.boundary_loss;
        const double nrm = l2_norm(f);
        if (nrm > prev_norm * (1.0 + opts_.step_growth_budget) + 1e-300) ++violations;
        prev_norm = nrm;
        if (k % output_every == 0 || k == steps)
            result.ledger.push_back(measure(f, boundary_loss));
    }

    // conservation drifts relative to the initial field's norm scale
    const LedgerRow& first = result.ledger.front();
    const double scale = std::max(first.l2_norm, 1e-30);
    for (const LedgerRow& row : result.ledger) {
        result.mass_drift = std::max(result.mass_drift, std::abs(row.mass - first.mass) / scale);
        result.energy_drift =
            std::max(result.energy_drift, std::abs(row.energy - first.energy) / scale);
        for (std::size_t p = 0; p < row.angular.size(); ++p)
            result.angular_drift = std::max(
                result.angular_drift, std::abs(row.angular[p] - first.angular[p]) / scale);
    }
    result.boundary_loss = boundary_loss;
    if (result.mass_drift > opts_.mass_drift_bound ||
        result.energy_drift > opts_.energy_drift_bound ||
        result.angular_drift > opts_.angular_drift_bound)
        result.flags.push_back("FAILED-CONSERVATION");
    if (result.boundary_loss > opts_.boundary_loss_bound)
        result.flags.push_back("FAILED-TRUNCATION");

    std::vector<double> ts, ns;
    for (const LedgerRow& row : result.ledger) {
        ts.push_back(row.t);
        ns.push_back(row.l2_norm);
    }
    const double t0 = opts_.fit_skip_fraction * opts_.horizon;
    if (first.l2_norm > 0.0) {
        try {
            result.decay = decay_fit(ts, ns, t0, opts_.horizon);
        } catch (const std::exception&) {
            // short diagnostic runs may not carry enough samples for a fit
            result.decay.window_t0 = t0;
            result.decay.window_t1 = opts_.horizon;
        }
    } else {
        result.decay.window_t0 = t0;
        result.decay.window_t1 = opts_.horizon;
    }
    result.decay.monotonicity_violations = violations;

    result.coercivity = coercivity_diagnostic(result.ledger);
    double min_ratio = 0.0;
    bool any = false;
    for (const CoercivityWindow& w : result.coercivity) {
        if (w.empty) continue;
        min_ratio = any ? std::min(min_ratio, w.ratio) : w.ratio;
        any = true;
    }
    result.measured_coercivity = any ? min_ratio : 0.0;
    return result;
}

}  // namespace linboltz
