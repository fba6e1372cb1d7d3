#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "linboltz/collision.hpp"
#include "linboltz/criterion.hpp"
#include "linboltz/potential.hpp"
#include "linboltz/quadrature.hpp"

namespace linboltz {

// Perturbation field f(x, xi) on the tensor product of a spatial grid and a
// velocity grid. Layout: column j holds the full velocity distribution of
// spatial cell j (velocity index fastest).
struct PhaseField {
    double time = 0.0;
    Eigen::MatrixXd data;  // Nv x Nx
};

enum class BoundaryMode { kAbsorbing, kPeriodic };
enum class InterpolationMode { kCubic, kSpectral };

struct SimulationOptions {
    double dt = 0.01;
    double horizon = 10.0;
    double output_interval = 0.1;
    bool collision_enabled = true;
    bool transport_enabled = true;   // xi . grad_x
    bool potential_enabled = true;   // -grad phi . grad_xi
    bool conserve_projection = true; // per-step conservative projection
    BoundaryMode boundary = BoundaryMode::kAbsorbing;
    InterpolationMode interpolation = InterpolationMode::kCubic;
    double fit_skip_fraction = 0.2;  // transient discarded before the decay fit
    double mass_drift_bound = 1e-6;
    double energy_drift_bound = 1e-5;
    double angular_drift_bound = 1e-5;
    double boundary_loss_bound = 1e-6;
    double step_growth_budget = 1e-8;  // allowed relative norm uptick per step
    double cfl_limit = 2.0;            // max advection displacement, cells per substep
    int threads = 1;
};

struct InitialBump {
    double amplitude = 1.0;
    std::vector<double> center_x;   // defaults to a small offset from origin
    std::vector<double> center_v;
    double sigma_x = 2.5;
    double sigma_v = 1.2;
    bool normalize = true;          // scale so ||f0|| = 1
};

struct LedgerRow {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    std::vector<double> angular;    // one per conserved pair (i < j)
    double l2_norm = 0.0;
    double nu_norm = 0.0;
    double boundary_loss = 0.0;     // cumulative
    double dirichlet = 0.0;         // <L f, f>
};

struct DecayReport {
    double sigma = 0.0;
    double prefactor = 0.0;
    double fit_residual = 0.0;      // RMS residual of the log-linear fit
    double window_t0 = 0.0;
    double window_t1 = 0.0;
    int samples = 0;
    bool window_shrunk = false;
    int monotonicity_violations = 0;
};

struct CoercivityWindow {
    double t0 = 0.0, t1 = 0.0;
    double ratio = 0.0;
    bool empty = false;  // solution numerically dead on the window
};

struct SimulationResult {
    std::vector<LedgerRow> ledger;
    DecayReport decay;
    std::vector<CoercivityWindow> coercivity;
    double measured_coercivity = 0.0;   // min ratio over non-empty windows
    double mass_drift = 0.0;            // max |value - initial| over the run
    double energy_drift = 0.0;
    double angular_drift = 0.0;
    double boundary_loss = 0.0;
    std::vector<std::string> flags;     // FAILED-CONSERVATION, FAILED-TRUNCATION
    bool ok() const { return flags.empty(); }
};

// Least-squares exponential-rate fit of log(norm) over [t0, t1]. Nonpositive
// samples shrink the window and are reported. Needs >= 10 usable samples.
DecayReport decay_fit(const std::vector<double>& times, const std::vector<double>& norms,
                      double t0, double t1);

// Ratio int <Lf,f> ds / int ||f||_nu^2 ds over unit-time windows of a ledger.
std::vector<CoercivityWindow> coercivity_diagnostic(const std::vector<LedgerRow>& rows);

class Simulator {
public:
    Simulator(Potential phi_normalized, AngularPairSet s_phi, SpectralConstants constants,
              std::optional<CollisionOperator> op, SpatialGrid xgrid, VelocityGrid vgrid,
              SimulationOptions opts);

    const SpatialGrid& xgrid() const { return xgrid_; }
    const VelocityGrid& vgrid() const { return vgrid_; }
    const SimulationOptions& options() const { return opts_; }

    PhaseField zero_field() const;
    PhaseField bump_field(const InitialBump& bump) const;
    // subtract the conservation-dual combination so all ledger functionals
    // vanish; throws if the dual Gram matrix is singular
    PhaseField build_initial(const PhaseField& raw) const;

    struct StepInfo {
        double boundary_loss = 0.0;  // |shell mass change| over the substeps
    };

    // one Strang step: x half, xi half, collision, xi half, x half, then the
    // conservative projection when enabled
    StepInfo step(PhaseField& f) const;

    LedgerRow measure(const PhaseField& f, double cumulative_boundary_loss) const;
    double l2_norm(const PhaseField& f) const;

    SimulationResult simulate(PhaseField f) const;

    // conservation duals as fields (for tests)
    const std::vector<Eigen::MatrixXd>& duals() const { return duals_; }

private:
    double advect_x(PhaseField& f, double half_dt) const;  // returns loss increment
    double advect_v(PhaseField& f, double half_dt) const;
    void collide(PhaseField& f) const;
    void conserve_project(PhaseField& f) const;

    Potential phi_;
    AngularPairSet s_phi_;
    SpectralConstants constants_;
    std::optional<CollisionOperator> op_;
    SpatialGrid xgrid_;
    VelocityGrid vgrid_;
    SimulationOptions opts_;

    double wx_ = 0.0, wv_ = 0.0;  // cell volumes
    Eigen::MatrixXd exp_collision_;            // e^{-dt L}
    Eigen::VectorXd nu_;                       // per velocity node
    std::vector<Eigen::MatrixXd> duals_;       // mass, angular..., energy
    Eigen::LDLT<Eigen::MatrixXd> dual_gram_;
    std::vector<std::vector<double>> grad_phi_; // per spatial cell
    std::vector<double> phi_cells_;
    Eigen::MatrixXd collision_L_;              // for the Dirichlet ledger
};

}  // namespace linboltz
