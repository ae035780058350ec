// Exercises the shared-library surface: opaque handles, status codes, and the
// whole-run entry points.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "ksipm/ksipm.h"

namespace fs = std::filesystem;

namespace {
struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ksipm_capi_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Config {
    ksipm_config* c;
    Config() : c(ksipm_config_create()) {}
    ~Config() { ksipm_config_destroy(c); }
    void set(const char* k, const char* v) { REQUIRE(ksipm_config_set(c, k, v) == KSIPM_OK); }
};
}  // namespace

TEST_CASE("config handle: set, get, dump, errors") {
    Config cfg;
    REQUIRE(cfg.c != nullptr);
    cfg.set("grid.n1", "32");
    cfg.set("grid.n2", "32");

    char buf[64];
    REQUIRE(ksipm_config_get(cfg.c, "grid.n1", buf, sizeof buf) == KSIPM_OK);
    CHECK(std::string(buf) == "32");

    CHECK(ksipm_config_set(cfg.c, "grid.bogus", "1") == KSIPM_ERR_ARG);
    CHECK(std::string(ksipm_last_error()).find("bogus") != std::string::npos);
    CHECK(ksipm_config_set(nullptr, "grid.n1", "1") == KSIPM_ERR_ARG);

    const long need = ksipm_config_dump(cfg.c, nullptr, 0);
    CHECK(need > 100);
    std::string dump(static_cast<std::size_t>(need) + 1, '\0');
    CHECK(ksipm_config_dump(cfg.c, dump.data(), dump.size()) == need);
    CHECK(dump.find("grid.n1 = 32") != std::string::npos);

    CHECK(ksipm_config_load("/nonexistent.cfg") == nullptr);
    CHECK(std::strlen(ksipm_last_error()) > 0);
}

TEST_CASE("simulation handle: step, advance, diagnostics, density") {
    Config cfg;
    cfg.set("grid.n1", "32");
    cfg.set("grid.n2", "32");
    cfg.set("time.t_end", "0.02");
    cfg.set("init.kind", "eigenmode");
    cfg.set("init.k1", "0");
    cfg.set("init.k2", "1");
    cfg.set("init.amplitude", "0.1");
    cfg.set("init.floor", "1");

    ksipm_sim* sim = ksipm_sim_create(cfg.c);
    REQUIRE(sim != nullptr);
    CHECK(ksipm_sim_grid_n1(sim) == 32);
    CHECK(ksipm_sim_grid_n2(sim) == 32);
    CHECK(ksipm_sim_time(sim) == 0.0);
    CHECK(ksipm_sim_rho_mean(sim) == doctest::Approx(1.0).epsilon(1e-12));

    ksipm_run_flag flag = KSIPM_RUN_OK;
    double dt = 0.0;
    REQUIRE(ksipm_sim_step(sim, &flag, &dt) == KSIPM_OK);
    CHECK(flag == KSIPM_RUN_OK);
    CHECK(dt > 0.0);

    REQUIRE(ksipm_sim_advance(sim, 1.0, &flag) == KSIPM_OK);
    CHECK(flag == KSIPM_RUN_OK);
    CHECK(ksipm_sim_time(sim) == doctest::Approx(0.02).epsilon(1e-12));

    ksipm_diag_record rec{};
    REQUIRE(ksipm_sim_diagnostics(sim, &rec) == KSIPM_OK);
    CHECK(rec.mass == doctest::Approx(2.0 * 3.14159265358979 * 3.14159265358979).epsilon(1e-9));
    CHECK(rec.l2sq > 0.0);
    CHECK(rec.term_main <= 0.0);

    std::vector<double> rho(32 * 32);
    REQUIRE(ksipm_sim_density(sim, rho.data(), rho.size()) == KSIPM_OK);
    CHECK(ksipm_sim_density(sim, rho.data(), 7) == KSIPM_ERR_ARG);

    ksipm_sim_destroy(sim);
}

TEST_CASE("snapshot round trip through the C API") {
    TempDir tmp;
    Config cfg;
    cfg.set("grid.n1", "32");
    cfg.set("grid.n2", "32");
    cfg.set("time.t_end", "0.01");
    cfg.set("init.kind", "random");
    cfg.set("init.floor", "0.5");

    ksipm_sim* sim = ksipm_sim_create(cfg.c);
    REQUIRE(sim != nullptr);
    ksipm_run_flag flag;
    ksipm_sim_advance(sim, 0.01, &flag);
    const std::string path = (tmp.path / "c.snap").string();
    REQUIRE(ksipm_sim_write_snapshot(sim, path.c_str()) == KSIPM_OK);

    std::vector<double> a(32 * 32), b(32 * 32);
    ksipm_sim_density(sim, a.data(), a.size());
    const double t0 = ksipm_sim_time(sim);
    ksipm_sim_destroy(sim);

    ksipm_sim* back = ksipm_sim_open_snapshot(path.c_str(), cfg.c);
    REQUIRE(back != nullptr);
    CHECK(ksipm_sim_time(back) == t0);
    ksipm_sim_density(back, b.data(), b.size());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    ksipm_sim_destroy(back);

    CHECK(ksipm_sim_open_snapshot("/nonexistent.snap", cfg.c) == nullptr);
}

TEST_CASE("whole-run drivers: run, sweep, classify, nash, info") {
    TempDir tmp;
    Config cfg;
    cfg.set("grid.n1", "32");
    cfg.set("grid.n2", "32");
    cfg.set("time.t_end", "0.02");
    cfg.set("time.output_every", "0.01");
    cfg.set("init.kind", "eigenmode");
    cfg.set("init.amplitude", "0.05");
    cfg.set("nash.strengths", "16,64");
    cfg.set("nash.fields_per_n", "3");

    ksipm_run_summary sum{};
    const std::string rdir = (tmp.path / "run").string();
    REQUIRE(ksipm_run_to_dir(cfg.c, rdir.c_str(), &sum) == KSIPM_OK);
    CHECK(sum.flag == KSIPM_RUN_OK);
    CHECK(fs::exists(fs::path(rdir) / "diagnostics.csv"));

    const double gs[2] = {0.0, 1.0};
    REQUIRE(ksipm_sweep(cfg.c, (tmp.path / "sweep").string().c_str(), gs, 2, 1) == KSIPM_OK);
    CHECK(fs::exists(tmp.path / "sweep/sweep.csv"));

    REQUIRE(ksipm_classify_csv(cfg.c, (fs::path(rdir) / "diagnostics.csv").string().c_str(),
                               (tmp.path / "cls").string().c_str()) == KSIPM_OK);
    CHECK(fs::exists(tmp.path / "cls/intervals.csv"));

    REQUIRE(ksipm_nash_ensemble(cfg.c, (tmp.path / "nash").string().c_str()) == KSIPM_OK);
    CHECK(fs::exists(tmp.path / "nash/ensemble.csv"));

    const long need = ksipm_info(cfg.c, nullptr, 0);
    REQUIRE(need > 0);
    std::string info(static_cast<std::size_t>(need) + 1, '\0');
    ksipm_info(cfg.c, info.data(), info.size());
    CHECK(info.find("rho_M = ") != std::string::npos);

    // a run terminated by a blowup flag reports KSIPM_ERR_RUNTIME but still
    // writes its outputs
    Config blow;
    blow.set("grid.n1", "32");
    blow.set("grid.n2", "32");
    blow.set("time.t_end", "1");
    blow.set("thresholds.blowup_l2sq", "1e-9");
    blow.set("init.kind", "eigenmode");
    blow.set("init.amplitude", "0.2");
    ksipm_run_summary bs{};
    const std::string bdir = (tmp.path / "blow").string();
    CHECK(ksipm_run_to_dir(blow.c, bdir.c_str(), &bs) == KSIPM_ERR_RUNTIME);
    CHECK(bs.flag == KSIPM_RUN_BLOWUP_L2);
    CHECK(fs::exists(fs::path(bdir) / "diagnostics.csv"));
    CHECK(fs::exists(fs::path(bdir) / "final.snap"));
}

TEST_CASE("version and error strings") {
    CHECK(std::string(ksipm_version()).find("ksipm") != std::string::npos);
    CHECK(ksipm_last_error() != nullptr);
}
