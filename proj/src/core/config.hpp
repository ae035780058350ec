// Flat key-value run configuration ("section.key = value" lines, '#'
// comments).  Parsing and printing are mutually lossless so `info` echoes a
// canonical form that re-parses to the same config.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/dynamics.hpp"
#include "core/initial_data.hpp"
#include "core/intervals.hpp"

namespace ksipm {

struct RunConfig {
    int n1 = 128, n2 = 128;
    double g = 1.0;
    bool dealias = true;
    // oracle-comparison hooks; production runs keep all three enabled
    bool enable_advection = true;
    bool enable_ks = true;
    bool enable_diffusion = true;
    double t_end = 1.0;
    double cfl = 1.0;
    double dt_max = 1e-3;
    double dt_min = 1e-9;
    double output_every = 1e-2;
    double blowup_linf = 1e6;
    double blowup_l2sq = 1e7;
    InitSpec init;
    int classifier_n0 = 4;
    std::optional<double> classifier_c1;
    std::optional<double> classifier_C1;
    double nash_a = 0.25;
    std::vector<double> nash_strengths = {16, 64, 256, 1024};
    int nash_fields_per_n = 50;
    double nash_decay = 4.0;
    std::uint64_t nash_seed = 1;
    std::string output_directory = "out";
    double snapshot_every = 0.0;  // 0 disables periodic snapshots

    SimParams sim_params() const;
    ClassifierConfig classifier_config() const;
};

RunConfig parse_config(const std::string& text);       // throws std::runtime_error
RunConfig load_config(const std::string& path);        // throws on I/O or parse errors
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);
std::string get_key(const RunConfig& cfg, const std::string& key);  // canonical value
std::string dump_config(const RunConfig& cfg);         // canonical echo

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace ksipm
