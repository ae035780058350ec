#include "core/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace ksipm {

void SimParams::validate() const {
    if (!(dt_min < dt_max)) throw std::invalid_argument("SimParams: dt_min must be < dt_max");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("SimParams: cfl must be in (0,1]");
    if (!(blowup_linf > 0.0 && blowup_l2sq > 0.0))
        throw std::invalid_argument("SimParams: blowup thresholds must be positive");
    if (!(t_end >= 0.0)) throw std::invalid_argument("SimParams: t_end must be >= 0");
    if (!(output_every > 0.0)) throw std::invalid_argument("SimParams: output_every must be > 0");
}

const char* to_string(StepFlag f) {
    switch (f) {
        case StepFlag::ok: return "ok";
        case StepFlag::blowup_linf: return "blowup_linf";
        case StepFlag::blowup_l2: return "blowup_l2";
        case StepFlag::dt_floor: return "dt_floor";
        case StepFlag::nonfinite: return "nonfinite";
    }
    return "?";
}

Simulation::Simulation(const SimParams& params, const RealField& rho0)
    : params_(params), ws_(params.grid) {
    params_.validate();
    if (!rho0.finite()) throw std::invalid_argument("Simulation: non-finite initial data");
    if (!(rho0.grid() == params.grid)) throw std::invalid_argument("Simulation: grid mismatch");
    state_.rho = project_to_band(rho0);
    state_.rho_M = ws_.mean(state_.rho);
    state_.t = 0.0;
}

void Simulation::restore(double t, const RealField& rho, double rho_M, long step_count) {
    if (!(rho.grid() == params_.grid)) throw std::invalid_argument("restore: grid mismatch");
    state_.t = t;
    state_.rho = project_to_band(rho);
    state_.rho_M = rho_M;
    state_.step_count = step_count;
}

RealField Simulation::project_to_band(const RealField& rho) const {
    // A dealiased run lives on the masked band; enter it at t = 0 so the
    // initial record sees the state the dynamics actually evolve.  States
    // already in the band (snapshots of dealiased runs) pass through
    // untouched, keeping restarts bit-exact.
    if (!params_.dealias) return rho;
    NeumannSpectrum s = ws_.forward_neumann(rho);
    double inside = 0.0, outside = 0.0;
    const int kc1 = ws_.dealias_k1_max(), kc2 = ws_.dealias_k2_max();
    const int n1h = params_.grid.n1 / 2 + 1;
    for (int k2 = 0; k2 < params_.grid.n2; ++k2) {
        const cplx* row = s.block().row(k2);
        for (int k1 = 0; k1 < n1h; ++k1) {
            const double a = std::abs(row[k1]);
            if (k1 > kc1 || k2 > kc2)
                outside = std::max(outside, a);
            else
                inside = std::max(inside, a);
        }
    }
    if (outside <= 1e-13 * std::max(inside, 1e-300)) return rho;
    ws_.dealias(s);
    return ws_.inverse_neumann(s);
}

RealField Simulation::chemical_field(const RealField& rho) const {
    RealField fluct = rho;
    const double m = ws_.mean(rho);
    for (std::size_t k = 0; k < fluct.size(); ++k) fluct.data()[k] -= m;
    return ws_.solve_poisson_neumann(fluct);
}

std::pair<RealField, RealField> Simulation::velocity(const RealField& rho) const {
    // Taking perp-div of the Darcy law gives Lap psi = g d_x1 rho, so
    // psi = -g (-Lap_D)^-1 d_x1 rho; this sign makes the buoyancy force
    // drain the potential energy through -g ||d_x1 rho||^2_{H^-1_0}.
    RealField dx1rho = ws_.ddx1(rho);
    DirichletSpectrum psi = ws_.solve_poisson_dirichlet(ws_.forward_dirichlet(dx1rho));
    for (std::size_t k = 0; k < psi.block().size(); ++k) psi.block().data()[k] *= -params_.g;
    // u = perp_grad(psi) = (-d_x2 psi, d_x1 psi)
    const Grid& g = params_.grid;
    const int n1h = g.n1 / 2 + 1;
    NeumannSpectrum u1(g);
    for (int k2 = 1; k2 < g.n2; ++k2) {
        const cplx* src = psi.block().row(k2 - 1);
        cplx* dst = u1.block().row(k2);
        for (int k1 = 0; k1 < n1h; ++k1) dst[k1] = -static_cast<double>(k2) * src[k1];
    }
    DirichletSpectrum u2 = psi;
    SpectralWorkspace::ddx1_inplace(u2);
    return {ws_.inverse_neumann(u1), ws_.inverse_dirichlet(u2)};
}

namespace {

// Assemble nodal transport fields (u + grad c as enabled); returns the pair
// (v1, v2) and optionally the max nodal speed |u| + |grad c|.
struct Transport {
    RealField v1, v2;
    double vmax = 0.0;
};

Transport transport_fields(SpectralWorkspace& ws, const NeumannSpectrum& rho_hat,
                           const SimParams& p, bool want_vmax) {
    const Grid& g = rho_hat.grid();
    const int n1h = g.n1 / 2 + 1;

    RealField u1, u2, cx1, cx2;
    if (p.enable_advection) {
        NeumannSpectrum dx1rho = rho_hat;
        SpectralWorkspace::ddx1_inplace(dx1rho);
        RealField dx1rho_nodal = ws.inverse_neumann(dx1rho);
        // psi = -g (-Lap_D)^-1 d_x1 rho (see Simulation::velocity).  psi is
        // not masked: the sine expansion of a cosine-band field has a genuine
        // algebraic tail, which the mask would amputate.
        DirichletSpectrum psi = ws.solve_poisson_dirichlet(ws.forward_dirichlet(dx1rho_nodal));
        for (std::size_t k = 0; k < psi.block().size(); ++k) psi.block().data()[k] *= -p.g;
        NeumannSpectrum u1_hat(g);
        for (int k2 = 1; k2 < g.n2; ++k2) {
            const cplx* src = psi.block().row(k2 - 1);
            cplx* dst = u1_hat.block().row(k2);
            for (int k1 = 0; k1 < n1h; ++k1) dst[k1] = -static_cast<double>(k2) * src[k1];
        }
        DirichletSpectrum u2_hat = psi;
        SpectralWorkspace::ddx1_inplace(u2_hat);
        u1 = ws.inverse_neumann(u1_hat);
        u2 = ws.inverse_dirichlet(u2_hat);
    }
    if (p.enable_ks) {
        NeumannSpectrum c_hat = rho_hat;
        c_hat.raw(0, 0) = 0.0;  // (-Lap_N)^-1 acts on the fluctuation
        c_hat = ws.solve_poisson_neumann(c_hat);
        NeumannSpectrum cx1_hat = c_hat;
        SpectralWorkspace::ddx1_inplace(cx1_hat);
        // d_x2 cos(k2 x2) = -k2 sin(k2 x2)
        DirichletSpectrum cx2_hat(g);
        for (int k2 = 1; k2 <= g.n2; ++k2) {
            cplx* dst = cx2_hat.block().row(k2 - 1);
            if (k2 <= g.n2 - 1) {
                const cplx* src = c_hat.block().row(k2);
                for (int k1 = 0; k1 < n1h; ++k1) dst[k1] = -static_cast<double>(k2) * src[k1];
            } else {
                for (int k1 = 0; k1 < n1h; ++k1) dst[k1] = 0.0;
            }
        }
        cx1 = ws.inverse_neumann(cx1_hat);
        cx2 = ws.inverse_dirichlet(cx2_hat);
    }

    Transport tr;
    tr.v1 = RealField(g);
    tr.v2 = RealField(g);
    const bool adv = p.enable_advection, ks = p.enable_ks;
    for (std::size_t k = 0; k < tr.v1.size(); ++k) {
        const double a1 = adv ? u1.data()[k] : 0.0;
        const double a2 = adv ? u2.data()[k] : 0.0;
        const double b1 = ks ? cx1.data()[k] : 0.0;
        const double b2 = ks ? cx2.data()[k] : 0.0;
        tr.v1.data()[k] = a1 + b1;
        tr.v2.data()[k] = a2 + b2;
        if (want_vmax) {
            const double s = std::sqrt(a1 * a1 + a2 * a2) + std::sqrt(b1 * b1 + b2 * b2);
            if (s > tr.vmax) tr.vmax = s;
        }
    }
    return tr;
}

NeumannSpectrum flux_divergence(SpectralWorkspace& ws, const NeumannSpectrum& rho_hat,
                                const RealField& rho_nodal, const Transport& tr,
                                const SimParams& p) {
    const Grid& g = rho_hat.grid();
    const int n1h = g.n1 / 2 + 1;
    NeumannSpectrum out(g);
    if (!p.enable_advection && !p.enable_ks) return out;

    RealField f1 = hadamard(rho_nodal, tr.v1);
    RealField f2 = hadamard(rho_nodal, tr.v2);
    NeumannSpectrum f1_hat = ws.forward_neumann(f1);
    DirichletSpectrum f2_hat = ws.forward_dirichlet(f2);
    // rhs = -(d_x1 F1 + d_x2 F2); F2 is sine-type (vanishes on the walls), so
    // its x2 derivative lands back in the cosine basis.
    for (int k2 = 0; k2 < g.n2; ++k2) {
        cplx* dst = out.block().row(k2);
        const cplx* s1 = f1_hat.block().row(k2);
        for (int k1 = 0; k1 < n1h - 1; ++k1) dst[k1] = -cplx(0.0, static_cast<double>(k1)) * s1[k1];
        dst[n1h - 1] = 0.0;
        if (k2 >= 1) {
            const cplx* s2 = f2_hat.block().row(k2 - 1);
            for (int k1 = 0; k1 < n1h; ++k1) dst[k1] -= static_cast<double>(k2) * s2[k1];
        }
    }
    if (p.dealias) ws.dealias(out);
    return out;
}

bool spectrum_finite(const NeumannSpectrum& s) {
    const cplx* p = s.block().data();
    for (std::size_t k = 0; k < s.block().size(); ++k)
        if (!std::isfinite(p[k].real()) || !std::isfinite(p[k].imag())) return false;
    return true;
}

}  // namespace

NeumannSpectrum Simulation::nonlinear_rhs_hat(const NeumannSpectrum& rho_hat) const {
    Transport tr = transport_fields(ws_, rho_hat, params_, false);
    return flux_divergence(ws_, rho_hat, ws_.inverse_neumann(rho_hat), tr, params_);
}

RealField Simulation::rhs_nonlinear(const RealField& rho) const {
    if (!rho.finite()) throw std::invalid_argument("rhs_nonlinear: non-finite input");
    NeumannSpectrum rho_hat = ws_.forward_neumann(rho);
    if (params_.dealias) ws_.dealias(rho_hat);
    return ws_.inverse_neumann(nonlinear_rhs_hat(rho_hat));
}

double Simulation::max_transport_speed(const NeumannSpectrum& rho_hat) const {
    return transport_fields(ws_, rho_hat, params_, true).vmax;
}

double Simulation::select_dt() const {
    NeumannSpectrum rho_hat = ws_.forward_neumann(state_.rho);
    if (params_.dealias) ws_.dealias(rho_hat);
    const double h = std::min(params_.grid.h1(), params_.grid.h2());
    double dt = std::min(params_.dt_max, params_.cfl * h * h / 4.0);
    const double vmax = max_transport_speed(rho_hat);
    if (vmax > 0.0) dt = std::min(dt, params_.cfl * h / vmax);
    return dt;
}

StepOutcome Simulation::step() { return step_to(params_.t_end); }

StepOutcome Simulation::step_to(double t_target) {
    const Grid& g = params_.grid;
    const int n1h = g.n1 / 2 + 1;

    NeumannSpectrum rho_hat = ws_.forward_neumann(state_.rho);
    if (params_.dealias) ws_.dealias(rho_hat);

    Transport tr = transport_fields(ws_, rho_hat, params_, true);
    const double h = std::min(g.h1(), g.h2());
    double dt = std::min(params_.dt_max, params_.cfl * h * h / 4.0);
    if (tr.vmax > 0.0) dt = std::min(dt, params_.cfl * h / tr.vmax);
    if (dt < params_.dt_min) return {state_, dt, StepFlag::dt_floor};
    dt = std::min(dt, t_target - state_.t);
    if (dt <= 0.0) return {state_, 0.0, StepFlag::ok};

    // Integrating factor for the diffusion, exact per mode.
    std::vector<double> decay(static_cast<std::size_t>(n1h) * g.n2, 1.0);
    if (params_.enable_diffusion) {
        for (int k2 = 0; k2 < g.n2; ++k2)
            for (int k1 = 0; k1 < n1h; ++k1)
                decay[static_cast<std::size_t>(k2) * n1h + k1] =
                    std::exp(-(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2) * dt);
    }

    NeumannSpectrum n1_hat = flux_divergence(ws_, rho_hat, state_.rho, tr, params_);

    // Heun under the integrating factor:
    //   pred = E (rho + dt N(rho));  new = E rho + dt/2 (E N(rho) + N(pred)).
    NeumannSpectrum pred(g);
    for (std::size_t k = 0; k < pred.block().size(); ++k)
        pred.block().data()[k] =
            decay[k] * (rho_hat.block().data()[k] + dt * n1_hat.block().data()[k]);

    RealField pred_nodal = ws_.inverse_neumann(pred);
    Transport tr2 = transport_fields(ws_, pred, params_, false);
    NeumannSpectrum n2_hat = flux_divergence(ws_, pred, pred_nodal, tr2, params_);

    NeumannSpectrum next(g);
    for (std::size_t k = 0; k < next.block().size(); ++k)
        next.block().data()[k] =
            decay[k] * (rho_hat.block().data()[k] + 0.5 * dt * n1_hat.block().data()[k]) +
            0.5 * dt * n2_hat.block().data()[k];

    // Re-project the conserved mean (corrects roundoff only).
    next.raw(0, 0) = cplx(2.0 * kPi * state_.rho_M, 0.0);

    if (!spectrum_finite(next)) return {state_, dt, StepFlag::nonfinite};

    SimState out;
    out.t = state_.t + dt;
    out.rho = ws_.inverse_neumann(next);
    out.rho_M = state_.rho_M;
    out.step_count = state_.step_count + 1;

    StepOutcome res{std::move(out), dt, StepFlag::ok};
    state_ = res.state;
    res.flag = scan_state();
    return res;
}

StepFlag Simulation::scan_state() const {
    const double* p = state_.rho.data();
    double linf = 0.0, l2 = 0.0;
    for (std::size_t k = 0; k < state_.rho.size(); ++k) {
        if (!std::isfinite(p[k])) return StepFlag::nonfinite;
        const double d = p[k] - state_.rho_M;
        linf = std::max(linf, std::abs(d));
        l2 += d * d;
    }
    l2 *= params_.grid.cell();
    if (linf > params_.blowup_linf) return StepFlag::blowup_linf;
    if (l2 > params_.blowup_l2sq) return StepFlag::blowup_l2;
    return StepFlag::ok;
}

RunResult run(Simulation& sim, const std::function<void(const SimState&, double dt)>& sink) {
    const SimParams& p = sim.params();
    RunResult res;
    res.reason = StepFlag::ok;

    auto track = [&](double dt_used) {
        const SimState& st = sim.state();
        const double* v = st.rho.data();
        double lo = v[0], hi = v[0], l2 = 0.0;
        for (std::size_t k = 0; k < st.rho.size(); ++k) {
            lo = std::min(lo, v[k]);
            hi = std::max(hi, v[k]);
            const double d = v[k] - st.rho_M;
            l2 += d * d;
        }
        l2 *= p.grid.cell();
        res.max_l2sq = std::max(res.max_l2sq, l2);
        if (hi > 0.0) res.min_rho_over_max = std::min(res.min_rho_over_max, lo / hi);
        (void)dt_used;
    };
    res.min_rho_over_max = 1.0;

    track(0.0);
    if (sink) sink(sim.state(), 0.0);

    const double t0 = sim.state().t;
    long out_idx = 1;
    while (sim.state().t < p.t_end) {
        const double next_out = std::min(t0 + out_idx * p.output_every, p.t_end);
        StepOutcome so = sim.step_to(next_out);
        if (so.flag != StepFlag::ok) {
            res.reason = so.flag;
            track(so.dt_used);
            if (sink) sink(sim.state(), so.dt_used);
            break;
        }
        track(so.dt_used);
        if (sim.state().t >= next_out - 1e-14) {
            if (sink) sink(sim.state(), so.dt_used);
            ++out_idx;
        }
        res.steps = sim.state().step_count;
    }
    res.final = sim.state();
    res.steps = sim.state().step_count;
    return res;
}

}  // namespace ksipm
