#include "core/nash.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "core/initial_data.hpp"

namespace ksipm {

namespace {
void require_fluctuation(const RealField& f, SpectralWorkspace& ws, const char* op) {
    // The x1-mean must vanish: compare the k1 = 0 mass with the field size.
    RealField bar = ws.x1_average(f);
    const double mbar = std::sqrt(ws.l2_sq(bar));
    const double mall = std::sqrt(ws.l2_sq(f));
    if (mbar > 1e-10 * std::max(mall, 1e-300))
        throw std::invalid_argument(std::string(op) + ": input has nonzero x1-mean");
}
}  // namespace

RealField project_cone_dirichlet(const RealField& rho_tilde, const ConeSpec& cone,
                                 SpectralWorkspace& ws) {
    require_fluctuation(rho_tilde, ws, "project_cone_dirichlet");
    DirichletSpectrum s = ws.forward_dirichlet(rho_tilde);
    const Grid& g = rho_tilde.grid();
    const int n1h = g.n1 / 2 + 1;
    for (int k2 = 1; k2 <= g.n2; ++k2) {
        cplx* row = s.block().row(k2 - 1);
        for (int k1 = 0; k1 < n1h; ++k1)
            if (!cone.in_c1(k1, k2)) row[k1] = 0.0;
    }
    return ws.inverse_dirichlet(s);
}

RealField project_cone_neumann(const RealField& rho_tilde, const ConeSpec& cone,
                               SpectralWorkspace& ws) {
    require_fluctuation(rho_tilde, ws, "project_cone_neumann");
    NeumannSpectrum s = ws.forward_neumann(rho_tilde);
    const Grid& g = rho_tilde.grid();
    const int n1h = g.n1 / 2 + 1;
    for (int k2 = 0; k2 < g.n2; ++k2) {
        cplx* row = s.block().row(k2);
        for (int k1 = 0; k1 < n1h; ++k1)
            if (!cone.in_c2(k1, k2)) row[k1] = 0.0;
    }
    return ws.inverse_neumann(s);
}

MixingCheck check_mixing_hypothesis(const RealField& rho_tilde, double N, SpectralWorkspace& ws) {
    MixingCheck c;
    c.lhs = ws.hminus1_norm_sq_dx1(rho_tilde);
    c.rhs = ws.l2_sq(rho_tilde) / N;
    c.holds = c.lhs <= c.rhs;
    return c;
}

double nash_ratio(const RealField& rho_tilde, SpectralWorkspace& ws) {
    Norms n = ws.norms(rho_tilde);
    const double denom = n.l1 * std::sqrt(n.grad_l2_sq);
    if (n.l2 == 0.0 || denom == 0.0) throw std::invalid_argument("nash_ratio: zero field");
    return n.l2 * n.l2 / denom;
}

LeakageCheck leakage_check(const RealField& rho_tilde, const ConeSpec& cone,
                           SpectralWorkspace& ws) {
    LeakageCheck out;
    const double total = ws.l2_sq(rho_tilde);
    if (total == 0.0) return out;
    // (I - P1^N) applied in the Neumann basis to the (already C1-supported)
    // input; Parseval gives the mass outside C2.
    NeumannSpectrum s = ws.forward_neumann(rho_tilde);
    const Grid& g = rho_tilde.grid();
    const int n1h = g.n1 / 2 + 1;
    for (int k2 = 0; k2 < g.n2; ++k2) {
        cplx* row = s.block().row(k2);
        for (int k1 = 0; k1 < n1h; ++k1)
            if (cone.in_c2(k1, k2)) row[k1] = 0.0;
    }
    out.lhs = SpectralWorkspace::parseval_l2_sq(s);
    out.bound_factor = out.lhs / total;
    return out;
}

RealField generate_cone_field(const ConeSpec& cone, std::uint64_t seed, double spectrum_decay,
                              const Grid& grid, SpectralWorkspace& ws) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    const double rootN = std::sqrt(cone.N);

    // Carrier near k2 ~ 2 sqrt(N) at |k1| = 1, bandwidth ~ sqrt(N)/2; the
    // hard support constraint k2 >= sqrt(N-1)|k1| keeps the hypothesis exact.
    const double carrier = (1.8 + 0.4 * u01(rng())) * rootN;
    const double bandwidth = std::max(1.0, (0.4 + 0.2 * u01(rng())) * rootN);
    const double x2_center = 0.25 * kPi + 0.5 * kPi * u01(rng());
    const double phase0 = 2.0 * kPi * u01(rng());

    DirichletSpectrum s(grid);
    const int n1h = grid.n1 / 2 + 1;
    const double kmin = std::sqrt(std::max(cone.N - 1.0, 0.0));
    std::size_t populated = 0;
    for (int k1 = 1; k1 <= 2; ++k1) {
        if (k1 >= n1h - 1) break;
        for (int k2 = 1; k2 <= grid.n2; ++k2) {
            if (k2 < kmin * k1) continue;  // stay inside the hypothesis cone
            const double dk = (k2 - carrier * k1) / (bandwidth * k1);
            const double envelope = std::pow(1.0 + dk * dk, -spectrum_decay / 2.0);
            if (envelope < 1e-14) continue;
            // Modulation in x2 localizes the packet around x2_center.
            const double ph = phase0 + k2 * x2_center + 0.05 * kPi * u01(rng());
            s.raw(k1, k2) = envelope * cplx(std::cos(ph), std::sin(ph));
            ++populated;
        }
    }
    if (populated == 0)
        throw std::invalid_argument("generate_cone_field: empty cone at this resolution");
    return ws.inverse_dirichlet(s);
}

RealField generate_free_field(std::uint64_t seed, double spectrum_decay, const Grid& grid,
                              SpectralWorkspace& ws) {
    std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dull);
    DirichletSpectrum s(grid);
    const int n1h = grid.n1 / 2 + 1;
    const int k1max = std::min(n1h - 2, grid.n1 / 3);
    const int k2max = std::min(grid.n2, (2 * grid.n2 - 1) / 3);
    for (int k2 = 1; k2 <= k2max; ++k2) {
        for (int k1 = 1; k1 <= k1max; ++k1) {
            const double amp =
                std::pow(static_cast<double>(k1 * k1 + k2 * k2), -spectrum_decay / 2.0);
            const double ph = 2.0 * kPi * u01(rng());
            s.raw(k1, k2) = amp * cplx(std::cos(ph), std::sin(ph));
        }
    }
    return ws.inverse_dirichlet(s);
}

TimeAveragedNash time_averaged_nash(const std::vector<double>& times,
                                    const std::vector<RealField>& fields, double N,
                                    SpectralWorkspace& ws) {
    if (times.size() != fields.size() || times.size() < 2)
        throw std::invalid_argument("time_averaged_nash: need >= 2 snapshots");
    const std::size_t n = times.size();
    std::vector<double> l2sq(n), l1grad(n), hm1(n);
    std::size_t holds_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Norms nm = ws.norms(fields[i]);
        l2sq[i] = nm.l2 * nm.l2;
        l1grad[i] = nm.l1 * std::sqrt(nm.grad_l2_sq);
        hm1[i] = ws.hminus1_norm_sq_dx1(fields[i]);
        if (hm1[i] <= l2sq[i] / N) ++holds_count;
    }
    double int_l2sq = 0.0, int_l1grad = 0.0, int_hm1 = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = times[i + 1] - times[i];
        if (!(h > 0.0)) throw std::invalid_argument("time_averaged_nash: non-increasing times");
        int_l2sq += 0.5 * h * (l2sq[i] + l2sq[i + 1]);
        int_l1grad += 0.5 * h * (l1grad[i] + l1grad[i + 1]);
        int_hm1 += 0.5 * h * (hm1[i] + hm1[i + 1]);
    }
    TimeAveragedNash out;
    out.hypothesis_holds = int_hm1 <= int_l2sq / N;
    out.holds_fraction = static_cast<double>(holds_count) / static_cast<double>(n);
    out.aggregate_ratio = (int_l1grad > 0.0) ? int_l2sq / int_l1grad : 0.0;
    return out;
}

}  // namespace ksipm
