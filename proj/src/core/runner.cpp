#include "core/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "core/nash.hpp"
#include "core/snapshot.hpp"

namespace fs = std::filesystem;

namespace ksipm {

int thread_limit() {
    // Cap on worker threads; unset means no cap.
    const char* env = std::getenv("KSIPM_THREADS");
    if (!env) return 0;
    const int v = std::atoi(env);
    return v >= 1 ? v : 1;
}

namespace {

std::string snapshot_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshot_t%.6f.snap", t);
    return buf;
}

RunSummary drive(Simulation& sim, const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::ofstream csv(fs::path(out_dir) / "diagnostics.csv", std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write diagnostics.csv in '" + out_dir + "'");
    csv << csv_header() << '\n';

    const double g = cfg.g;
    double last_t = -1.0;
    double next_snap = cfg.snapshot_every > 0.0 ? sim.state().t + cfg.snapshot_every : -1.0;

    auto sink = [&](const SimState& st, double dt) {
        if (st.t == last_t) return;  // terminal flag can coincide with an output time
        last_t = st.t;
        csv << csv_row(compute_record(st, dt, g, sim.workspace())) << '\n';
        if (next_snap >= 0.0 && st.t >= next_snap - 1e-12) {
            Snapshot snap{st.t, g, st.rho_M, st.rho};
            write_snapshot((fs::path(out_dir) / snapshot_name(st.t)).string(), snap);
            next_snap += cfg.snapshot_every;
        }
    };

    RunResult rr = run(sim, sink);
    csv.flush();
    if (!csv) throw std::runtime_error("diagnostics.csv write failed in '" + out_dir + "'");

    Snapshot final_snap{rr.final.t, g, rr.final.rho_M, rr.final.rho};
    write_snapshot((fs::path(out_dir) / "final.snap").string(), final_snap);

    RunSummary s;
    s.reason = rr.reason;
    s.t_final = rr.final.t;
    s.max_l2sq = rr.max_l2sq;
    s.min_rho_over_max = rr.min_rho_over_max;
    s.steps = rr.steps;
    DiagnosticsRecord last = compute_record(rr.final, 0.0, g, sim.workspace());
    s.final_l2sq = last.l2sq;
    s.final_linf = last.linf;

    std::ofstream sum(fs::path(out_dir) / "summary.txt", std::ios::trunc);
    sum << "reason = " << to_string(s.reason) << '\n'
        << "t_final = " << format_double(s.t_final) << '\n'
        << "steps = " << s.steps << '\n'
        << "mass = " << format_double(last.mass) << '\n'
        << "l2sq = " << format_double(s.final_l2sq) << '\n'
        << "linf = " << format_double(s.final_linf) << '\n'
        << "max_l2sq = " << format_double(s.max_l2sq) << '\n'
        << "min_rho_over_max = " << format_double(s.min_rho_over_max) << '\n';
    if (!sum) throw std::runtime_error("summary.txt write failed in '" + out_dir + "'");
    return s;
}

}  // namespace

RunSummary run_to_dir(const RunConfig& cfg, const std::string& out_dir) {
    SimParams p = cfg.sim_params();
    SpectralWorkspace ws(p.grid);
    RealField rho0 = make_initial_data(cfg.init, p.grid, ws);
    Simulation sim(p, rho0);
    return drive(sim, cfg, out_dir);
}

RunSummary run_from_snapshot(const RunConfig& cfg, const std::string& snapshot_path,
                             const std::string& out_dir) {
    Snapshot snap = read_snapshot(snapshot_path);
    RunConfig c = cfg;
    c.n1 = snap.rho.grid().n1;
    c.n2 = snap.rho.grid().n2;
    SimParams p = c.sim_params();
    Simulation sim(p, snap.rho);
    sim.restore(snap.t, snap.rho, snap.rho_M);
    return drive(sim, c, out_dir);
}

std::vector<SweepRow> sweep(const RunConfig& cfg, const std::string& out_dir,
                            const std::vector<double>& g_values, int jobs) {
    fs::create_directories(out_dir);
    if (jobs <= 0) jobs = 1;
    const int cap = thread_limit();
    if (cap > 0) jobs = std::min(jobs, cap);
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(g_values.size())));

    std::vector<SweepRow> rows(g_values.size());
    std::vector<std::string> errors;
    std::mutex err_mu;
    std::size_t next = 0;
    std::mutex next_mu;

    auto worker = [&]() {
        while (true) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(next_mu);
                if (next >= g_values.size()) return;
                i = next++;
            }
            try {
                RunConfig c = cfg;
                c.g = g_values[i];
                std::ostringstream dir;
                dir << "g_" << format_double(g_values[i]);
                RunSummary s = run_to_dir(c, (fs::path(out_dir) / dir.str()).string());
                rows[i] = {g_values[i], s.reason, s.t_final, s.max_l2sq};
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mu);
                errors.push_back(e.what());
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (!errors.empty()) throw std::runtime_error("sweep: " + errors.front());

    std::ofstream csv(fs::path(out_dir) / "sweep.csv", std::ios::trunc);
    csv << "g,flag,t_final,max_l2sq\n";
    for (const SweepRow& r : rows)
        csv << format_double(r.g) << ',' << to_string(r.flag) << ',' << format_double(r.t_final)
            << ',' << format_double(r.max_l2sq) << '\n';
    if (!csv) throw std::runtime_error("sweep.csv write failed");
    return rows;
}

ClassifyResult classify_csv(const std::string& diag_csv, const std::string& out_dir,
                            const RunConfig& cfg, double mass_hint) {
    std::ifstream is(diag_csv);
    if (!is) throw std::runtime_error("cannot open '" + diag_csv + "'");
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty diagnostics csv");
    if (line.rfind("t,", 0) != 0) throw std::runtime_error("missing diagnostics header");

    std::vector<DiagnosticsRecord> recs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        recs.push_back(parse_csv_row(line));
    }

    ClassifyResult res;
    IntervalClassifier cls(cfg.classifier_config());
    for (const DiagnosticsRecord& r : recs) cls.ingest(r.t, r.l2sq);
    cls.finish();
    res.intervals = cls.intervals();
    res.summary = summarize(res.intervals, cfg.classifier_n0, cls.anchor_exponent());

    double mass = mass_hint;
    if (mass <= 0.0 && !recs.empty()) mass = recs.front().mass;
    if (cfg.classifier_c1 && cfg.classifier_C1) {
        res.have_budget = true;
        res.budget = budget_ledger(res.intervals, cfg.g, cfg.classifier_config(), mass);
    }

    fs::create_directories(out_dir);
    std::ofstream csv(fs::path(out_dir) / "intervals.csv", std::ios::trunc);
    csv << "level,kind,t_start,t_end,l2_start,l2_end,length\n";
    for (const Interval& iv : res.intervals)
        csv << iv.level << ',' << (iv.kind == IntervalKind::good ? "good" : "bad") << ','
            << format_double(iv.t_start) << ',' << format_double(iv.t_end) << ','
            << format_double(iv.l2_start) << ',' << format_double(iv.l2_end) << ','
            << format_double(iv.length()) << '\n';
    if (!csv) throw std::runtime_error("intervals.csv write failed");

    // Trapezoid of l2sq_tilde over each interval, against the 2^{N-2} length
    // scale the dichotomy in the bad-interval analysis uses.
    auto tilde_integral = [&](const Interval& iv) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
            const double a = std::max(recs[i].t, iv.t_start);
            const double b = std::min(recs[i + 1].t, iv.t_end);
            if (b <= a) continue;
            const double span = recs[i + 1].t - recs[i].t;
            auto interp = [&](double tt) {
                const double w = (tt - recs[i].t) / span;
                return (1.0 - w) * recs[i].l2sq_tilde + w * recs[i + 1].l2sq_tilde;
            };
            acc += 0.5 * (b - a) * (interp(a) + interp(b));
        }
        return acc;
    };

    std::ofstream rep(fs::path(out_dir) / "report.txt", std::ios::trunc);
    rep << "intervals = " << res.intervals.size() << '\n';
    rep << "intertwining_ok = " << (res.summary.intertwining_ok ? "true" : "false") << '\n';
    rep << "count_checked_levels = [" << res.summary.checked_from << ", "
        << res.summary.checked_to << "]\n";
    for (const LevelCount& lc : res.summary.per_level)
        rep << "level " << lc.level << ": goods=" << lc.goods << " bads=" << lc.bads
            << " min_good_length=" << format_double(lc.min_good_length)
            << " c0_scale_2^-N=" << format_double(std::exp2(-lc.level)) << '\n';
    rep << "# per-interval fluctuation mass vs the 2^{N-2} (t_k+1 - t_k) scale\n";
    for (const Interval& iv : res.intervals) {
        const double ti = tilde_integral(iv);
        const double scale = std::exp2(iv.level - 2) * iv.length();
        rep << (iv.kind == IntervalKind::good ? "good" : "bad") << " N=" << iv.level
            << " int_tilde=" << format_double(ti) << " threshold=" << format_double(scale)
            << " satisfied=" << (ti >= scale ? "true" : "false") << '\n';
    }
    if (res.have_budget) {
        rep << "budget_cumulative_drop = " << format_double(res.budget.cumulative_drop) << '\n';
        rep << "budget_cap_pi_mass = " << format_double(res.budget.cap) << '\n';
        rep << "budget_within_cap = " << (res.budget.within_cap ? "true" : "false") << '\n';
        for (auto& [lvl, v] : res.budget.per_level)
            rep << "budget_level " << lvl << " = " << format_double(v) << '\n';
    }
    if (!rep) throw std::runtime_error("report.txt write failed");
    return res;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_slope: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

NashReport nash_ensemble(const RunConfig& cfg, const std::string& out_dir) {
    const Grid grid(cfg.n1, cfg.n2);
    SpectralWorkspace ws(grid);
    NashReport rep;

    std::vector<double> ns, cone_max, base_max;
    for (double N : cfg.nash_strengths) {
        ConeSpec cone(cfg.nash_a, N);
        double cmax = 0.0, bmax = 0.0;
        for (int f = 0; f < cfg.nash_fields_per_n; ++f) {
            const std::uint64_t seed =
                cfg.nash_seed + 1000003ull * static_cast<std::uint64_t>(f) +
                static_cast<std::uint64_t>(N) * 7919ull;
            RealField rc = generate_cone_field(cone, seed, cfg.nash_decay, grid, ws);
            MixingCheck mc = check_mixing_hypothesis(rc, N, ws);
            const double ratio = nash_ratio(rc, ws);
            LeakageCheck lk = leakage_check(rc, cone, ws);
            rep.cone.push_back({N, cfg.nash_a, seed, mc.lhs, mc.rhs, ratio, lk.bound_factor});
            cmax = std::max(cmax, ratio);

            RealField rb = generate_free_field(seed, 2.0, grid, ws);
            MixingCheck mb = check_mixing_hypothesis(rb, N, ws);
            const double bratio = nash_ratio(rb, ws);
            rep.baseline.push_back({N, 0.0, seed, mb.lhs, mb.rhs, bratio, 0.0});
            bmax = std::max(bmax, bratio);
        }
        ns.push_back(N);
        cone_max.push_back(cmax);
        base_max.push_back(bmax);
    }
    rep.cone_slope = loglog_slope(ns, cone_max);
    rep.baseline_slope = loglog_slope(ns, base_max);

    fs::create_directories(out_dir);
    auto write_rows = [&](const std::string& name, const std::vector<NashRow>& rows) {
        std::ofstream csv(fs::path(out_dir) / name, std::ios::trunc);
        csv << "N,a,seed,lhs_hypothesis,rhs_hypothesis,nash_ratio,leakage_ratio\n";
        for (const NashRow& r : rows)
            csv << format_double(r.N) << ',' << format_double(r.a) << ',' << r.seed << ','
                << format_double(r.lhs_hypothesis) << ',' << format_double(r.rhs_hypothesis)
                << ',' << format_double(r.nash_ratio) << ',' << format_double(r.leakage_ratio)
                << '\n';
        if (!csv) throw std::runtime_error("nash csv write failed");
    };
    write_rows("ensemble.csv", rep.cone);
    write_rows("baseline.csv", rep.baseline);

    std::ofstream sum(fs::path(out_dir) / "nash_summary.txt", std::ios::trunc);
    sum << "cone_slope = " << format_double(rep.cone_slope) << '\n'
        << "baseline_slope = " << format_double(rep.baseline_slope) << '\n';
    for (std::size_t i = 0; i < ns.size(); ++i)
        sum << "N=" << format_double(ns[i]) << " max_cone_ratio=" << format_double(cone_max[i])
            << " max_baseline_ratio=" << format_double(base_max[i]) << '\n';
    return rep;
}

std::string info_text(const RunConfig& cfg) {
    std::ostringstream os;
    os << dump_config(cfg);
    const Grid grid(cfg.n1, cfg.n2);
    SpectralWorkspace ws(grid);
    RealField rho0 = make_initial_data(cfg.init, grid, ws);
    const double mass = ws.integrate(rho0);
    os << "# derived\n";
    os << "mass = " << format_double(mass) << '\n';
    os << "rho_M = " << format_double(mass / (2.0 * kPi * kPi)) << '\n';
    os << "h1 = " << format_double(grid.h1()) << '\n';
    os << "h2 = " << format_double(grid.h2()) << '\n';
    const double h = std::min(grid.h1(), grid.h2());
    os << "dt_diffusion_scale = " << format_double(cfg.cfl * h * h / 4.0) << '\n';
    const std::size_t bytes = grid.size() * sizeof(double) * 24;  // field + spectra scratch
    os << "estimated_memory_bytes = " << bytes << '\n';
    return os.str();
}

}  // namespace ksipm
