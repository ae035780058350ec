// C API implementation: thin exception-to-status shim over the core.

#include "ksipm/ksipm.h"

#include <cstring>
#include <string>

#include "core/config.hpp"
#include "core/diagnostics.hpp"
#include "core/runner.hpp"
#include "core/snapshot.hpp"

namespace {

thread_local std::string g_last_error = "";

void set_error(const char* what) { g_last_error = what ? what : "unknown error"; }

template <class F>
ksipm_status guard(ksipm_status io_or_runtime, F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return KSIPM_ERR_ARG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return io_or_runtime;
    }
}

ksipm_run_flag to_c(ksipm::StepFlag f) { return static_cast<ksipm_run_flag>(static_cast<int>(f)); }

long copy_out(const std::string& s, char* buf, size_t bufsz) {
    if (buf && bufsz > 0) {
        const size_t n = std::min(bufsz - 1, s.size());
        std::memcpy(buf, s.data(), n);
        buf[n] = '\0';
    }
    return static_cast<long>(s.size());
}

}  // namespace

struct ksipm_config {
    ksipm::RunConfig cfg;
};

struct ksipm_sim {
    ksipm::RunConfig cfg;
    ksipm::Simulation sim;
    ksipm_sim(const ksipm::RunConfig& c, const ksipm::RealField& rho0)
        : cfg(c), sim(c.sim_params(), rho0) {}
};

extern "C" {

const char* ksipm_version(void) { return "ksipm 1.0.0"; }

const char* ksipm_last_error(void) { return g_last_error.c_str(); }

ksipm_config* ksipm_config_create(void) {
    try {
        return new ksipm_config{};
    } catch (...) {
        set_error("out of memory");
        return nullptr;
    }
}

ksipm_config* ksipm_config_load(const char* path) {
    if (!path) {
        set_error("null path");
        return nullptr;
    }
    try {
        auto* c = new ksipm_config{};
        c->cfg = ksipm::load_config(path);
        return c;
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

ksipm_status ksipm_config_set(ksipm_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) {
        set_error("null argument");
        return KSIPM_ERR_ARG;
    }
    return guard(KSIPM_ERR_ARG, [&] {
        ksipm::apply_override(cfg->cfg, key, value);
        return KSIPM_OK;
    });
}

ksipm_status ksipm_config_get(const ksipm_config* cfg, const char* key, char* buf, size_t bufsz) {
    if (!cfg || !key || !buf || bufsz == 0) {
        set_error("null argument");
        return KSIPM_ERR_ARG;
    }
    return guard(KSIPM_ERR_ARG, [&] {
        copy_out(ksipm::get_key(cfg->cfg, key), buf, bufsz);
        return KSIPM_OK;
    });
}

long ksipm_config_dump(const ksipm_config* cfg, char* buf, size_t bufsz) {
    if (!cfg) {
        set_error("null config");
        return -1;
    }
    try {
        return copy_out(ksipm::dump_config(cfg->cfg), buf, bufsz);
    } catch (const std::exception& e) {
        set_error(e.what());
        return -1;
    }
}

void ksipm_config_destroy(ksipm_config* cfg) { delete cfg; }

ksipm_sim* ksipm_sim_create(const ksipm_config* cfg) {
    if (!cfg) {
        set_error("null config");
        return nullptr;
    }
    try {
        ksipm::Grid grid(cfg->cfg.n1, cfg->cfg.n2);
        ksipm::SpectralWorkspace ws(grid);
        ksipm::RealField rho0 = ksipm::make_initial_data(cfg->cfg.init, grid, ws);
        return new ksipm_sim(cfg->cfg, rho0);
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

ksipm_sim* ksipm_sim_open_snapshot(const char* path, const ksipm_config* cfg) {
    if (!path || !cfg) {
        set_error("null argument");
        return nullptr;
    }
    try {
        ksipm::Snapshot snap = ksipm::read_snapshot(path);
        ksipm::RunConfig c = cfg->cfg;
        c.n1 = snap.rho.grid().n1;
        c.n2 = snap.rho.grid().n2;
        auto* s = new ksipm_sim(c, snap.rho);
        s->sim.restore(snap.t, snap.rho, snap.rho_M);
        return s;
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

void ksipm_sim_destroy(ksipm_sim* sim) { delete sim; }

double ksipm_sim_time(const ksipm_sim* sim) { return sim ? sim->sim.state().t : 0.0; }
int ksipm_sim_grid_n1(const ksipm_sim* sim) { return sim ? sim->cfg.n1 : 0; }
int ksipm_sim_grid_n2(const ksipm_sim* sim) { return sim ? sim->cfg.n2 : 0; }
double ksipm_sim_rho_mean(const ksipm_sim* sim) { return sim ? sim->sim.state().rho_M : 0.0; }

ksipm_status ksipm_sim_step(ksipm_sim* sim, ksipm_run_flag* flag, double* dt_used) {
    if (!sim) {
        set_error("null sim");
        return KSIPM_ERR_ARG;
    }
    return guard(KSIPM_ERR_RUNTIME, [&] {
        ksipm::StepOutcome so = sim->sim.step();
        if (flag) *flag = to_c(so.flag);
        if (dt_used) *dt_used = so.dt_used;
        return KSIPM_OK;
    });
}

ksipm_status ksipm_sim_advance(ksipm_sim* sim, double t_until, ksipm_run_flag* flag) {
    if (!sim) {
        set_error("null sim");
        return KSIPM_ERR_ARG;
    }
    return guard(KSIPM_ERR_RUNTIME, [&] {
        const double target = std::min(t_until, sim->cfg.t_end);
        ksipm::StepFlag f = ksipm::StepFlag::ok;
        while (sim->sim.state().t < target) {
            ksipm::StepOutcome so = sim->sim.step_to(target);
            f = so.flag;
            if (f != ksipm::StepFlag::ok) break;
            if (so.dt_used <= 0.0) break;
        }
        if (flag) *flag = to_c(f);
        return KSIPM_OK;
    });
}

ksipm_status ksipm_sim_diagnostics(const ksipm_sim* sim, ksipm_diag_record* out) {
    if (!sim || !out) {
        set_error("null argument");
        return KSIPM_ERR_ARG;
    }
    return guard(KSIPM_ERR_RUNTIME, [&] {
        auto* self = const_cast<ksipm_sim*>(sim);
        ksipm::DiagnosticsRecord r = ksipm::compute_record(
            sim->sim.state(), 0.0, sim->cfg.g, self->sim.workspace());
        *out = {r.t,
                r.dt,
                r.mass,
                r.l2sq,
                r.l2sq_bar,
                r.l2sq_tilde,
                r.linf,
                r.min_rho,
                r.grad_l2sq,
                r.E,
                r.term_main,
                r.term_diff,
                r.term_ks,
                r.lambda_flux,
                r.nash_ratio.value_or(0.0),
                r.nash_ratio.has_value() ? 1 : 0};
        return KSIPM_OK;
    });
}

ksipm_status ksipm_sim_density(const ksipm_sim* sim, double* out, size_t len) {
    if (!sim || !out) {
        set_error("null argument");
        return KSIPM_ERR_ARG;
    }
    const ksipm::RealField& rho = sim->sim.state().rho;
    if (len != rho.size()) {
        set_error("density buffer length mismatch");
        return KSIPM_ERR_ARG;
    }
    std::memcpy(out, rho.data(), len * sizeof(double));
    return KSIPM_OK;
}

ksipm_status ksipm_sim_write_snapshot(const ksipm_sim* sim, const char* path) {
    if (!sim || !path) {
        set_error("null argument");
        return KSIPM_ERR_ARG;
    }
    return guard(KSIPM_ERR_IO, [&] {
        const ksipm::SimState& st = sim->sim.state();
        ksipm::write_snapshot(path, {st.t, sim->cfg.g, st.rho_M, st.rho});
        return KSIPM_OK;
    });
}

ksipm_status ksipm_run_to_dir(const ksipm_config* cfg, const char* out_dir,
                              ksipm_run_summary* summary) {
    if (!cfg || !out_dir) {
        set_error("null argument");
        return KSIPM_ERR_ARG;
    }
    return guard(KSIPM_ERR_IO, [&] {
        ksipm::RunSummary s = ksipm::run_to_dir(cfg->cfg, out_dir);
        if (summary)
            *summary = {to_c(s.reason), s.t_final,          s.max_l2sq, s.final_l2sq,
                        s.final_linf,   s.min_rho_over_max, s.steps};
        if (s.reason != ksipm::StepFlag::ok) {
            set_error(ksipm::to_string(s.reason));
            return KSIPM_ERR_RUNTIME;
        }
        return KSIPM_OK;
    });
}

ksipm_status ksipm_run_from_snapshot(const ksipm_config* cfg, const char* snapshot,
                                     const char* out_dir, ksipm_run_summary* summary) {
    if (!cfg || !snapshot || !out_dir) {
        set_error("null argument");
        return KSIPM_ERR_ARG;
    }
    return guard(KSIPM_ERR_IO, [&] {
        ksipm::RunSummary s = ksipm::run_from_snapshot(cfg->cfg, snapshot, out_dir);
        if (summary)
            *summary = {to_c(s.reason), s.t_final,          s.max_l2sq, s.final_l2sq,
                        s.final_linf,   s.min_rho_over_max, s.steps};
        if (s.reason != ksipm::StepFlag::ok) {
            set_error(ksipm::to_string(s.reason));
            return KSIPM_ERR_RUNTIME;
        }
        return KSIPM_OK;
    });
}

ksipm_status ksipm_sweep(const ksipm_config* cfg, const char* out_dir, const double* g_values,
                         int n_g, int jobs) {
    if (!cfg || !out_dir || !g_values || n_g <= 0) {
        set_error("null argument");
        return KSIPM_ERR_ARG;
    }
    return guard(KSIPM_ERR_IO, [&] {
        ksipm::sweep(cfg->cfg, out_dir, std::vector<double>(g_values, g_values + n_g), jobs);
        return KSIPM_OK;
    });
}

ksipm_status ksipm_classify_csv(const ksipm_config* cfg, const char* diag_csv,
                                const char* out_dir) {
    if (!cfg || !diag_csv || !out_dir) {
        set_error("null argument");
        return KSIPM_ERR_ARG;
    }
    return guard(KSIPM_ERR_IO, [&] {
        ksipm::classify_csv(diag_csv, out_dir, cfg->cfg, 0.0);
        return KSIPM_OK;
    });
}

ksipm_status ksipm_nash_ensemble(const ksipm_config* cfg, const char* out_dir) {
    if (!cfg || !out_dir) {
        set_error("null argument");
        return KSIPM_ERR_ARG;
    }
    return guard(KSIPM_ERR_IO, [&] {
        ksipm::nash_ensemble(cfg->cfg, out_dir);
        return KSIPM_OK;
    });
}

long ksipm_info(const ksipm_config* cfg, char* buf, size_t bufsz) {
    if (!cfg) {
        set_error("null config");
        return -1;
    }
    try {
        return copy_out(ksipm::info_text(cfg->cfg), buf, bufsz);
    } catch (const std::exception& e) {
        set_error(e.what());
        return -1;
    }
}

}  // extern "C"
