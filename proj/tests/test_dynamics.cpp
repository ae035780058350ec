#include "core/dynamics.hpp"

#include <cmath>

#include "core/initial_data.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace ksipm;
using namespace ksipm::test;

namespace {

SimParams base_params(const Grid& g) {
    SimParams p;
    p.grid = g;
    p.g = 1.0;
    p.t_end = 1.0;
    return p;
}

RealField constant_field(const Grid& g, double v) { return RealField(g, v); }

}  // namespace

TEST_CASE("params validation") {
    SimParams p = base_params(Grid(32, 32));
    p.cfl = 1.5;
    CHECK_THROWS_AS(Simulation(p, constant_field(p.grid, 1.0)), std::invalid_argument);
    p.cfl = 0.5;
    p.dt_min = 1.0;
    p.dt_max = 0.5;
    CHECK_THROWS_AS(Simulation(p, constant_field(p.grid, 1.0)), std::invalid_argument);
}

TEST_CASE("chemical field on eigenmodes") {
    const Grid g(32, 32);
    SimParams p = base_params(g);
    Simulation sim(p, constant_field(g, 2.0));

    RealField flat = constant_field(g, 2.0);
    CHECK(max_abs(sim.chemical_field(flat)) < 1e-13);

    RealField f = from_function(g, [](double, double y) { return 2.0 + std::cos(y); });
    RealField c = sim.chemical_field(f);
    RealField expect = from_function(g, [](double, double y) { return std::cos(y); });
    CHECK(max_abs_diff(c, expect) < 1e-12);

    RealField f5 = from_function(
        g, [](double x, double y) { return 2.0 + std::cos(2.0 * x) * std::cos(y); });
    RealField c5 = sim.chemical_field(f5);
    RealField expect5 = from_function(
        g, [](double x, double y) { return std::cos(2.0 * x) * std::cos(y) / 5.0; });
    CHECK(max_abs_diff(c5, expect5) < 1e-12);
}

TEST_CASE("velocity: closed forms and incompressibility") {
    const Grid g(48, 48);
    SimParams p = base_params(g);
    Simulation sim(p, constant_field(g, 1.0));

    // x1-independent density -> no flow
    RealField stratified = from_function(g, [](double, double y) { return 1.0 + std::cos(y); });
    auto [v1, v2] = sim.velocity(stratified);
    CHECK(max_abs(v1) < 1e-12);
    CHECK(max_abs(v2) < 1e-12);

    // rho = sin(x1) sin(x2), g = 1: psi = -(-Lap_D)^-1 d_x1 rho = -cos(x1)sin(x2)/2,
    // so u = perp_grad(psi) = (cos(x1)cos(x2)/2, sin(x1)sin(x2)/2).
    RealField mode = from_function(g, [](double x, double y) { return std::sin(x) * std::sin(y); });
    auto [u1, u2] = sim.velocity(mode);
    RealField e1 = from_function(
        g, [](double x, double y) { return std::cos(x) * std::cos(y) / 2.0; });
    RealField e2 = from_function(
        g, [](double x, double y) { return std::sin(x) * std::sin(y) / 2.0; });
    CHECK(max_abs_diff(u1, e1) < 1e-12);
    CHECK(max_abs_diff(u2, e2) < 1e-12);

    // quadrature cross-check: int rho u2 = g ||d_x1 rho||^2_{H-1}, the
    // advective drain of the potential energy
    SpectralWorkspace& ws = sim.workspace();
    CHECK(quad_product(mode, u2) ==
          doctest::Approx(ws.hminus1_norm_sq_dx1(mode)).epsilon(1e-11));

    // g = 0 switches the coupling off
    SimParams p0 = base_params(g);
    p0.g = 0.0;
    Simulation sim0(p0, constant_field(g, 1.0));
    auto [z1, z2] = sim0.velocity(mode);
    CHECK(max_abs(z1) == 0.0);
    CHECK(max_abs(z2) == 0.0);

    // discrete divergence of u vanishes
    RealField smooth = smooth_random_field(g, 3, 3.0, 5);
    for (std::size_t k = 0; k < smooth.size(); ++k) smooth.data()[k] += 2.0;
    auto [w1, w2] = sim.velocity(smooth);
    RealField div = ws.ddx1(w1);
    div += ws.ddx2_sin_to_cos(w2);
    CHECK(max_abs(div) < 1e-11 * std::max(1.0, max_abs(smooth)));
}

TEST_CASE("nonlinear rhs: equilibrium, zero integral, linearization") {
    const Grid g(48, 48);
    SimParams p = base_params(g);
    Simulation sim(p, constant_field(g, 3.0));

    CHECK(max_abs(sim.rhs_nonlinear(constant_field(g, 3.0))) < 1e-12);

    // conservative form: the rhs integrates to zero
    RealField r = smooth_random_field(g, 8, 3.0, 6);
    for (std::size_t k = 0; k < r.size(); ++k) r.data()[k] += 2.0;
    RealField rhs = sim.rhs_nonlinear(r);
    SpectralWorkspace& ws = sim.workspace();
    CHECK(std::abs(ws.integrate(rhs)) < 1e-10 * std::sqrt(ws.l2_sq(r)));

    // g = 0, rho = rho_M + eps cos(x1): the KS term linearizes to
    // rho_M eps cos(x1); the error is O(eps^2).
    SimParams p0 = base_params(g);
    p0.g = 0.0;
    const double rho_M = 2.0;
    Simulation sim0(p0, constant_field(g, rho_M));
    auto linerr = [&](double eps) {
        RealField f =
            from_function(g, [&](double x, double) { return rho_M + eps * std::cos(x); });
        RealField out = sim0.rhs_nonlinear(f);
        RealField lin =
            from_function(g, [&](double x, double) { return rho_M * eps * std::cos(x); });
        return max_abs_diff(out, lin);
    };
    const double e3 = linerr(1e-3), e4 = linerr(1e-4);
    CHECK(e3 < 5e-6);
    CHECK(e3 / e4 == doctest::Approx(100.0).epsilon(0.15));
}

TEST_CASE("pure heat eigenmode decays exactly") {
    const Grid g(32, 32);
    SimParams p = base_params(g);
    p.g = 0.0;
    p.enable_advection = false;
    p.enable_ks = false;
    p.t_end = 1.0;
    p.dt_max = 1e-3;
    p.cfl = 1.0;

    RealField rho0 = from_function(g, [](double, double y) { return 2.0 + std::cos(y); });
    Simulation sim(p, rho0);
    RunResult rr = run(sim, nullptr);
    REQUIRE(rr.reason == StepFlag::ok);
    CHECK(rr.final.t == doctest::Approx(1.0).epsilon(1e-12));

    // analytic solution on the nodes: 2 + e^{-t} cos(x2)
    RealField expect = from_function(
        g, [](double, double y) { return 2.0 + std::exp(-1.0) * std::cos(y); });
    CHECK(max_abs_diff(rr.final.rho, expect) / std::exp(-1.0) < 1e-6);
    // mode amplitude through the transform: coeff(0,1) = pi * amplitude
    SpectralWorkspace& ws = sim.workspace();
    const double amp = ws.forward_neumann(rr.final.rho).coeff(0, 1).real() / kPi;
    CHECK(amp == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("equilibrium is a fixed point to machine precision") {
    const Grid g(32, 32);
    SimParams p = base_params(g);
    p.t_end = 0.05;
    RealField rho0 = constant_field(g, 1.5);
    Simulation sim(p, rho0);
    RunResult rr = run(sim, nullptr);
    REQUIRE(rr.reason == StepFlag::ok);
    CHECK(max_abs_diff(rr.final.rho, rho0) < 1e-12);
}

TEST_CASE("mass is conserved and the mean re-projected") {
    const Grid g(64, 64);
    SimParams p = base_params(g);
    p.t_end = 0.5;
    SpectralWorkspace ws(g);
    InitSpec init;
    init.kind = "gaussian_bump";
    init.mass = 4.0 * kPi;
    init.sigma = 0.5;
    RealField rho0 = make_initial_data(init, g, ws);
    Simulation sim(p, rho0);
    const double m0 = sim.state().rho_M;
    RunResult rr = run(sim, nullptr);
    REQUIRE(rr.reason == StepFlag::ok);
    CHECK(std::abs(sim.workspace().mean(rr.final.rho) - m0) / m0 < 1e-12);
}

TEST_CASE("g=0 keeps x1-independent data x1-independent") {
    const Grid g(32, 32);
    SimParams p = base_params(g);
    p.g = 0.0;
    p.t_end = 0.2;
    RealField rho0 = from_function(g, [](double, double y) { return 1.0 + 0.5 * std::cos(y); });
    Simulation sim(p, rho0);
    RunResult rr = run(sim, nullptr);
    REQUIRE(rr.reason == StepFlag::ok);
    RealField fluct = sim.workspace().x1_fluctuation(rr.final.rho);
    CHECK(max_abs(fluct) < 1e-10);
}

TEST_CASE("x1-reflection symmetry is preserved") {
    const Grid g(64, 64);
    SimParams p = base_params(g);
    p.t_end = 0.25;
    SpectralWorkspace ws(g);
    InitSpec init;
    init.kind = "gaussian_bump";
    init.mass = 4.0 * kPi;
    init.sigma = 0.5;
    init.center_x1 = 0.0;
    init.center_x2 = kPi / 2.0;
    RealField rho0 = make_initial_data(init, g, ws);
    Simulation sim(p, rho0);
    RunResult rr = run(sim, nullptr);
    REQUIRE(rr.reason == StepFlag::ok);
    // node i reflects to node (n1 - i) mod n1
    double asym = 0.0;
    for (int j = 0; j < g.n2; ++j)
        for (int i = 1; i < g.n1; ++i)
            asym = std::max(asym,
                            std::abs(rr.final.rho.at(i, j) - rr.final.rho.at(g.n1 - i, j)));
    CHECK(asym < 1e-9);
}

TEST_CASE("self-convergence is second order in dt") {
    const Grid g(48, 48);
    SpectralWorkspace ws(g);
    InitSpec init;
    init.kind = "gaussian_bump";
    init.mass = 4.0 * kPi;
    init.sigma = 0.6;
    init.center_x2 = kPi / 2.0 + 0.3;
    RealField rho0 = make_initial_data(init, g, ws);

    auto terminal = [&](double dt) {
        SimParams p = base_params(g);
        p.t_end = 0.1;
        p.dt_max = dt;
        p.cfl = 1.0;  // dt_max binds: h^2/4 at 48x48 is ~1.07e-3
        Simulation sim(p, rho0);
        RunResult rr = run(sim, nullptr);
        REQUIRE(rr.reason == StepFlag::ok);
        return rr.final.rho;
    };

    RealField ref = terminal(6.25e-5);
    const double e1 = max_abs_diff(terminal(5e-4), ref);
    const double e2 = max_abs_diff(terminal(2.5e-4), ref);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("run with t_end = 0 emits exactly the initial state") {
    const Grid g(32, 32);
    SimParams p = base_params(g);
    p.t_end = 0.0;
    Simulation sim(p, constant_field(g, 1.0));
    int count = 0;
    RunResult rr = run(sim, [&](const SimState&, double) { ++count; });
    CHECK(count == 1);
    CHECK(rr.reason == StepFlag::ok);
    CHECK(rr.final.t == 0.0);
}

TEST_CASE("blowup thresholds raise flags") {
    const Grid g(32, 32);
    SimParams p = base_params(g);
    p.t_end = 1.0;
    p.blowup_l2sq = 1e-6;  // absurdly low: first step trips it
    SpectralWorkspace ws(g);
    InitSpec init;
    init.kind = "gaussian_bump";
    init.mass = 4.0 * kPi;
    init.sigma = 0.5;
    RealField rho0 = make_initial_data(init, g, ws);
    Simulation sim(p, rho0);
    RunResult rr = run(sim, nullptr);
    CHECK(rr.reason == StepFlag::blowup_l2);
}
