#include "core/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ksipm {

double potential_energy(const RealField& rho, SpectralWorkspace& ws) {
    return ws.pairing_pi_minus_x2(ws.forward_neumann(rho));
}

DETerms dE_terms(const RealField& rho, double rho_M, double g, SpectralWorkspace& ws) {
    DETerms out;
    out.term_main = -g * ws.hminus1_norm_sq_dx1(rho);

    // Diffusion term int d_x2 rho dx (the boundary flux
    // int_T rho(x1,pi) - rho(x1,0) dx1) by the grid's nodal quadrature of the
    // spectral derivative; it is then adjoint to the integrating-factor
    // diffusion in the energy pairing.
    NeumannSpectrum rho_hat = ws.forward_neumann(rho);
    double diff = 0.0;
    for (int k2 = 1; k2 < rho.grid().n2; k2 += 2)
        diff -= ws.sine_mode_integral(k2) * k2 * rho_hat.coeff(0, k2).real();
    out.term_diff = 2.0 * diff;

    // Keller-Segel contribution: -int rho d_x2 c with -Lap_N c = rho - rho_M,
    // by nodal quadrature.
    NeumannSpectrum c_hat = rho_hat;
    c_hat.raw(0, 0) -= cplx(2.0 * kPi * rho_M, 0.0);
    c_hat = ws.solve_poisson_neumann(c_hat);
    const Grid& grid = rho.grid();
    const int n1h = grid.n1 / 2 + 1;
    DirichletSpectrum cx2_hat(grid);
    for (int k2 = 1; k2 <= grid.n2 - 1; ++k2) {
        cplx* dst = cx2_hat.block().row(k2 - 1);
        const cplx* src = c_hat.block().row(k2);
        // d_x2 cos(k2 x2) = -k2 sin(k2 x2)
        for (int k1 = 0; k1 < n1h; ++k1) dst[k1] = -static_cast<double>(k2) * src[k1];
    }
    RealField cx2 = ws.inverse_dirichlet(cx2_hat);
    double acc = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k) acc += rho.data()[k] * cx2.data()[k];
    out.term_ks = -acc * grid.cell();
    return out;
}

DiagnosticsRecord compute_record(const SimState& state, double dt, double g,
                                 SpectralWorkspace& ws) {
    DiagnosticsRecord r;
    r.t = state.t;
    r.dt = dt;
    const RealField& rho = state.rho;
    const double rho_M = state.rho_M;

    r.mass = ws.integrate(rho);
    double l2 = 0.0, li = 0.0, lo = rho.data()[0];
    for (std::size_t k = 0; k < rho.size(); ++k) {
        const double d = rho.data()[k] - rho_M;
        l2 += d * d;
        li = std::max(li, std::abs(d));
        lo = std::min(lo, rho.data()[k]);
    }
    r.l2sq = l2 * rho.grid().cell();
    r.linf = li;
    r.min_rho = lo;

    RealField bar = ws.x1_average(rho);
    double l2b = 0.0;
    for (std::size_t k = 0; k < bar.size(); ++k) {
        const double d = bar.data()[k] - rho_M;
        l2b += d * d;
    }
    r.l2sq_bar = l2b * rho.grid().cell();
    RealField tilde = rho;
    tilde -= bar;
    Norms nt = ws.norms(tilde);
    r.l2sq_tilde = nt.l2 * nt.l2;

    r.grad_l2sq = ws.norms(rho).grad_l2_sq;
    r.E = potential_energy(rho, ws);
    DETerms terms = dE_terms(rho, rho_M, g, ws);
    r.term_main = terms.term_main;
    r.term_diff = terms.term_diff;
    r.term_ks = terms.term_ks;
    r.lambda_flux = std::abs(terms.term_diff);

    const double denom = nt.l1 * std::sqrt(nt.grad_l2_sq);
    if (r.l2sq_tilde > 0.0 && denom > 0.0) r.nash_ratio = r.l2sq_tilde / denom;
    return r;
}

std::vector<double> energy_identity_residuals(std::span<const DiagnosticsRecord> w) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        const DiagnosticsRecord &a = w[i], &b = w[i + 1];
        const double h = b.t - a.t;
        const double fa = a.term_main + a.term_diff + a.term_ks;
        const double fb = b.term_main + b.term_diff + b.term_ks;
        const double res = std::abs(b.E - a.E - 0.5 * h * (fa + fb));
        out.push_back(res / std::max({std::abs(a.E), std::abs(b.E), 1.0}));
    }
    return out;
}

NaiveEnergyReport naive_energy_residual(std::span<const DiagnosticsRecord> w, double rho_M,
                                        double C) {
    NaiveEnergyReport rep;
    if (w.size() < 2) return rep;
    double grad_int = 0.0, l2sq2_int = 0.0, l2sq_int = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        const double h = w[i + 1].t - w[i].t;
        grad_int += 0.5 * h * (w[i].grad_l2sq + w[i + 1].grad_l2sq);
        l2sq2_int += 0.5 * h * (w[i].l2sq * w[i].l2sq + w[i + 1].l2sq * w[i + 1].l2sq);
        l2sq_int += 0.5 * h * (w[i].l2sq + w[i + 1].l2sq);
    }
    rep.lhs = (w.back().l2sq - w.front().l2sq) + grad_int;
    rep.rhs = C * l2sq2_int + 2.0 * rho_M * l2sq_int;
    rep.margin = rep.rhs - rep.lhs;
    return rep;
}

std::string csv_header() {
    return "t,dt,mass,l2sq,l2sq_bar,l2sq_tilde,linf,min_rho,grad_l2sq,E,"
           "term_main,term_diff,term_ks,lambda_flux,nash_ratio";
}

namespace {
void append_num(std::string& s, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    s += buf;
}
}  // namespace

std::string csv_row(const DiagnosticsRecord& r) {
    std::string s;
    s.reserve(360);
    const double cols[] = {r.t,    r.dt,       r.mass,      r.l2sq,      r.l2sq_bar,
                           r.l2sq_tilde, r.linf, r.min_rho, r.grad_l2sq, r.E,
                           r.term_main,  r.term_diff, r.term_ks, r.lambda_flux};
    for (double v : cols) {
        append_num(s, v);
        s += ',';
    }
    if (r.nash_ratio) append_num(s, *r.nash_ratio);
    return s;
}

DiagnosticsRecord parse_csv_row(const std::string& line) {
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        f.push_back(line.substr(start, pos == std::string::npos ? pos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (f.size() != 15) throw std::runtime_error("diagnostics csv: expected 15 fields");
    auto num = [&](int i) {
        std::size_t used = 0;
        const double v = std::stod(f[i], &used);
        if (used != f[i].size()) throw std::runtime_error("diagnostics csv: bad number");
        return v;
    };
    DiagnosticsRecord r;
    r.t = num(0);
    r.dt = num(1);
    r.mass = num(2);
    r.l2sq = num(3);
    r.l2sq_bar = num(4);
    r.l2sq_tilde = num(5);
    r.linf = num(6);
    r.min_rho = num(7);
    r.grad_l2sq = num(8);
    r.E = num(9);
    r.term_main = num(10);
    r.term_diff = num(11);
    r.term_ks = num(12);
    r.lambda_flux = num(13);
    if (!f[14].empty()) r.nash_ratio = num(14);
    return r;
}

}  // namespace ksipm
