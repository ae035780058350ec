// Run orchestration: single runs with on-disk outputs, g-sweeps, trajectory
// classification and the Nash ensemble report.

#pragma once

#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/diagnostics.hpp"
#include "core/intervals.hpp"

namespace ksipm {

struct RunSummary {
    StepFlag reason = StepFlag::ok;
    double t_final = 0.0;
    double max_l2sq = 0.0;
    double final_l2sq = 0.0;
    double final_linf = 0.0;
    double min_rho_over_max = 1.0;
    long steps = 0;
};

// Worker-thread cap from KSIPM_THREADS (0 when unset: no cap).
int thread_limit();

// Single run: writes diagnostics.csv, snapshots (snapshot_tXXXX.snap every
// output.snapshot_every when > 0, final.snap always), summary.txt.
RunSummary run_to_dir(const RunConfig& cfg, const std::string& out_dir);

// Resume from a snapshot written by run_to_dir; appends nothing, writes the
// same file set into out_dir.
RunSummary run_from_snapshot(const RunConfig& cfg, const std::string& snapshot_path,
                             const std::string& out_dir);

struct SweepRow {
    double g = 0.0;
    StepFlag flag = StepFlag::ok;
    double t_final = 0.0;
    double max_l2sq = 0.0;
};
// One subdirectory per g value plus sweep.csv; jobs <= 0 means thread_limit().
std::vector<SweepRow> sweep(const RunConfig& cfg, const std::string& out_dir,
                            const std::vector<double>& g_values, int jobs);

struct ClassifyResult {
    std::vector<Interval> intervals;
    Summary summary;
    bool have_budget = false;
    BudgetLedger budget;
};
// Reads a diagnostics CSV (columns t, l2sq; l2sq_tilde used for the interval
// report), writes intervals.csv and report.txt into out_dir.
ClassifyResult classify_csv(const std::string& diag_csv, const std::string& out_dir,
                            const RunConfig& cfg, double mass_hint);

struct NashRow {
    double N = 0.0, a = 0.0;
    std::uint64_t seed = 0;
    double lhs_hypothesis = 0.0, rhs_hypothesis = 0.0;
    double nash_ratio = 0.0, leakage_ratio = 0.0;
};
struct NashReport {
    std::vector<NashRow> cone;      // ensemble.csv
    std::vector<NashRow> baseline;  // baseline.csv (no cone; leakage 0, a recorded as 0)
    double cone_slope = 0.0;        // log-log slope of ensemble-max ratio vs N
    double baseline_slope = 0.0;
};
NashReport nash_ensemble(const RunConfig& cfg, const std::string& out_dir);

std::string info_text(const RunConfig& cfg);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ksipm
