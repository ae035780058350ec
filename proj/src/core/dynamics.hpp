// The governing system: density transport by the buoyancy-driven Darcy
// velocity plus diffusion and chemotactic aggregation,
//
//   d_t rho + u.grad(rho) - Lap(rho) + div(rho grad (-Lap_N)^-1 (rho - rho_M)) = 0,
//   u = perp_grad(psi),  Lap psi = g d_x1 rho,
//
// advanced with an integrating-factor scheme: diffusion is integrated exactly
// in the Neumann basis, the nonlinear fluxes (kept in divergence form, so the
// discrete mass is conserved to roundoff) by Heun's second-order rule.

#pragma once

#include <functional>

#include "core/grid.hpp"
#include "core/spectral.hpp"

namespace ksipm {

struct SimParams {
    double g = 1.0;        // Rayleigh number
    double t_end = 1.0;
    double cfl = 1.0;      // in (0,1]
    double dt_max = 1e-3;
    double dt_min = 1e-9;
    double blowup_linf = 1e6;   // threshold on ||rho - rho_M||_inf
    double blowup_l2sq = 1e7;   // threshold on ||rho - rho_M||_L2^2
    bool dealias = true;
    double output_every = 1e-2;
    Grid grid{128, 128};

    // Test hooks: individual terms of the flux can be switched off to compare
    // against closed-form oracles. All enabled in production runs.
    bool enable_advection = true;
    bool enable_ks = true;
    bool enable_diffusion = true;

    void validate() const;
};

enum class StepFlag { ok, blowup_linf, blowup_l2, dt_floor, nonfinite };
const char* to_string(StepFlag f);

struct SimState {
    double t = 0.0;
    RealField rho;
    double rho_M = 0.0;  // conserved mean, cached from the initial data
    long step_count = 0;
};

struct StepOutcome {
    SimState state;
    double dt_used = 0.0;
    StepFlag flag = StepFlag::ok;
};

class Simulation {
  public:
    Simulation(const SimParams& params, const RealField& rho0);

    const SimParams& params() const { return params_; }
    const SimState& state() const { return state_; }
    SpectralWorkspace& workspace() { return ws_; }

    // Install a state loaded from a snapshot (t, rho, rho_M as stored).
    void restore(double t, const RealField& rho, double rho_M, long step_count = 0);

    RealField chemical_field(const RealField& rho) const;
    std::pair<RealField, RealField> velocity(const RealField& rho) const;
    RealField rhs_nonlinear(const RealField& rho);

    double select_dt();               // min(dt_max, cfl h / Vmax, cfl h^2/4)
    StepOutcome step();               // one IMEX step; does not advance past t_end
    StepOutcome step_to(double t_target);

    StepFlag scan_state() const;      // threshold checks on the current state

  private:
    SimParams params_;
    mutable SpectralWorkspace ws_;
    SimState state_;

    // Spectrum of the current state (kept in the dealias band) plus step
    // scratch, preallocated once; the stepper itself does not allocate.
    NeumannSpectrum rho_hat_;
    NeumannSpectrum v1_hat_, f1_hat_, nhat1_, nhat2_, pred_hat_, next_hat_;
    DirichletSpectrum rho_d_, v2_hat_, f2_hat_;
    RealField v1_, v2_, w1_, w2_, f1_, f2_, pred_nodal_;
    std::vector<double> decay_;
    double decay_dt_ = -1.0;

    RealField project_to_band(const RealField& rho) const;
    void refresh_spectrum();

    // Nonlinear flux divergence -div(rho (u + grad c)) of the field whose
    // masked spectrum is rho_hat and nodal values rho_nodal.  With
    // want_vmax, the advective and chemotactic parts are inverted separately
    // and max |u| + |grad c| is reported.
    void stage_flux(const NeumannSpectrum& rho_hat, const RealField& rho_nodal,
                    NeumannSpectrum& out, bool want_vmax, double* vmax);

    void build_decay(double dt);
};

struct RunResult {
    SimState final;
    StepFlag reason = StepFlag::ok;
    double max_l2sq = 0.0;
    double min_rho_over_max = 0.0;  // most negative min(rho)/max(rho) seen
    long steps = 0;
};

// Advance to t_end or a non-ok flag, invoking sink at t=0, every output_every,
// and at the final state.
RunResult run(Simulation& sim, const std::function<void(const SimState&, double dt)>& sink);

}  // namespace ksipm
