// ksipm command-line driver.  Subcommands: run, sweep, classify, nash-test,
// info.  Exit codes: 0 ok, 1 config error, 2 run flagged (blowup/dt floor;
// outputs are still written), 3 I/O failure.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ksipm/ksipm.h"

namespace {

struct ConfigDeleter {
    void operator()(ksipm_config* c) const { ksipm_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<ksipm_config, ConfigDeleter>;

int fail(ksipm_status st) {
    std::fprintf(stderr, "ksipm: %s\n", ksipm_last_error());
    switch (st) {
        case KSIPM_ERR_ARG: return 1;
        case KSIPM_ERR_RUNTIME: return 2;
        default: return 3;
    }
}

ConfigPtr make_config(const std::string& path, const std::vector<std::string>& overrides,
                      int* err) {
    ConfigPtr cfg(path.empty() ? ksipm_config_create() : ksipm_config_load(path.c_str()));
    if (!cfg) {
        std::fprintf(stderr, "ksipm: %s\n", ksipm_last_error());
        *err = 1;
        return nullptr;
    }
    for (const std::string& ov : overrides) {
        const std::size_t eq = ov.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "ksipm: bad --override '%s' (expected key=value)\n", ov.c_str());
            *err = 1;
            return nullptr;
        }
        const std::string key = ov.substr(0, eq), value = ov.substr(eq + 1);
        if (ksipm_config_set(cfg.get(), key.c_str(), value.c_str()) != KSIPM_OK) {
            std::fprintf(stderr, "ksipm: %s\n", ksipm_last_error());
            *err = 1;
            return nullptr;
        }
    }
    *err = 0;
    return cfg;
}

std::string config_value(const ksipm_config* cfg, const char* key) {
    char buf[256];
    if (ksipm_config_get(cfg, key, buf, sizeof buf) != KSIPM_OK) return "";
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral Keller-Segel / porous-media flow simulator"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    std::string config_path, out_dir;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "configuration file");
    app.add_option("--out", out_dir, "output directory (defaults to output.directory)");
    app.add_option("--override", overrides, "key=value config override")->take_all();

    auto* cmd_run = app.add_subcommand("run", "single simulation");
    std::string restart_path;
    cmd_run->add_option("--restart", restart_path, "resume from a snapshot file");

    auto* cmd_sweep = app.add_subcommand("sweep", "same initial data across g values");
    std::vector<double> g_values;
    int jobs = 0;
    cmd_sweep->add_option("--g", g_values, "g values")->required()->take_all();
    cmd_sweep->add_option("--jobs", jobs, "parallel member runs");

    auto* cmd_classify = app.add_subcommand("classify", "good/bad intervals of a diagnostics CSV");
    std::string diag_csv;
    cmd_classify->add_option("csv", diag_csv, "diagnostics CSV path")->required();

    auto* cmd_nash = app.add_subcommand("nash-test", "quantitative Nash inequality ensembles");
    auto* cmd_info = app.add_subcommand("info", "echo config and derived quantities");

    CLI11_PARSE(app, argc, argv);

    int err = 0;
    ConfigPtr cfg = make_config(config_path, overrides, &err);
    if (!cfg) return err;
    if (out_dir.empty()) out_dir = config_value(cfg.get(), "output.directory");

    if (cmd_run->parsed()) {
        ksipm_run_summary summary{};
        const ksipm_status st =
            restart_path.empty()
                ? ksipm_run_to_dir(cfg.get(), out_dir.c_str(), &summary)
                : ksipm_run_from_snapshot(cfg.get(), restart_path.c_str(), out_dir.c_str(),
                                          &summary);
        if (st == KSIPM_OK || st == KSIPM_ERR_RUNTIME) {
            const char* flags[] = {"ok", "blowup_linf", "blowup_l2", "dt_floor", "nonfinite"};
            std::printf("reason=%s t_final=%.17g steps=%ld l2sq=%.17g linf=%.17g\n",
                        flags[summary.flag], summary.t_final, summary.steps, summary.final_l2sq,
                        summary.final_linf);
        }
        if (st != KSIPM_OK) return fail(st);
        return 0;
    }
    if (cmd_sweep->parsed()) {
        const ksipm_status st = ksipm_sweep(cfg.get(), out_dir.c_str(), g_values.data(),
                                            static_cast<int>(g_values.size()), jobs);
        if (st != KSIPM_OK) return fail(st);
        std::printf("sweep complete: %zu runs in %s\n", g_values.size(), out_dir.c_str());
        return 0;
    }
    if (cmd_classify->parsed()) {
        const ksipm_status st = ksipm_classify_csv(cfg.get(), diag_csv.c_str(), out_dir.c_str());
        if (st != KSIPM_OK) return fail(st);
        std::printf("intervals written to %s\n", out_dir.c_str());
        return 0;
    }
    if (cmd_nash->parsed()) {
        const ksipm_status st = ksipm_nash_ensemble(cfg.get(), out_dir.c_str());
        if (st != KSIPM_OK) return fail(st);
        std::printf("nash ensembles written to %s\n", out_dir.c_str());
        return 0;
    }
    if (cmd_info->parsed()) {
        const long need = ksipm_info(cfg.get(), nullptr, 0);
        if (need < 0) return fail(KSIPM_ERR_ARG);
        std::string buf(static_cast<std::size_t>(need) + 1, '\0');
        ksipm_info(cfg.get(), buf.data(), buf.size());
        std::fputs(buf.c_str(), stdout);
        return 0;
    }
    return 1;
}
