// Cone projections on the Fourier side and the empirical side of the
// quantitative Nash inequality: under the mixing hypothesis
// ||d_x1 rho||^2_{H^-1_0} <= N^-1 ||rho_tilde||^2, the Nash quotient
// ||rho_tilde||^2 / (||rho_tilde||_L1 ||grad rho_tilde||_L2) is depressed by
// a factor N^{-1/4}.

#pragma once

#include <cstdint>
#include <vector>

#include "core/grid.hpp"
#include "core/spectral.hpp"

namespace ksipm {

struct ConeSpec {
    double a = 0.25;  // aperture, in (0, 1/2]
    double N = 16.0;  // mixing strength
    ConeSpec() = default;
    ConeSpec(double a_, double N_) : a(a_), N(N_) {
        if (!(a > 0.0 && a <= 0.5)) throw std::invalid_argument("ConeSpec: need 0 < a <= 1/2");
        if (!(N >= 1.0)) throw std::invalid_argument("ConeSpec: need N >= 1");
    }
    // C1 = {k2 >= a sqrt(N) |k1|}; C2 relaxes the aperture to a^2.
    bool in_c1(int k1, int k2) const { return k2 >= a * std::sqrt(N) * std::abs(k1); }
    bool in_c2(int k1, int k2) const { return k2 >= a * a * std::sqrt(N) * std::abs(k1); }
};

// Zero all coefficients outside C1 (Dirichlet basis) / C2 (Neumann basis).
// Inputs must have zero x1-mean (be fluctuations).
RealField project_cone_dirichlet(const RealField& rho_tilde, const ConeSpec& cone,
                                 SpectralWorkspace& ws);
RealField project_cone_neumann(const RealField& rho_tilde, const ConeSpec& cone,
                               SpectralWorkspace& ws);

struct MixingCheck {
    bool holds = false;
    double lhs = 0.0;  // ||d_x1 rho||^2_{H^-1_0}
    double rhs = 0.0;  // N^-1 ||rho_tilde||^2
};
MixingCheck check_mixing_hypothesis(const RealField& rho_tilde, double N, SpectralWorkspace& ws);

// ||rho_tilde||^2_{L2} / (||rho_tilde||_L1 ||grad rho_tilde||_L2); scale
// invariant; throws on the zero field.
double nash_ratio(const RealField& rho_tilde, SpectralWorkspace& ws);

struct LeakageCheck {
    double lhs = 0.0;           // ||(I - P1^N) P1^D rho||^2_{L2}
    double bound_factor = 0.0;  // lhs / ||rho||^2_{L2}
};
LeakageCheck leakage_check(const RealField& rho_tilde, const ConeSpec& cone,
                           SpectralWorkspace& ws);

// Random wave-packet field supported in the hypothesis cone
// {k2 >= sqrt(N-1) |k1|} (a subset of C1), so the mixing hypothesis holds at
// strength N mode by mode.  The packets sit near k2 ~ 2 sqrt(N) with an
// O(sqrt(N)) bandwidth; spectrum_decay sets the envelope tail exponent.
// Deterministic per seed.  Throws if the cone holds no modes on the grid.
RealField generate_cone_field(const ConeSpec& cone, std::uint64_t seed, double spectrum_decay,
                              const Grid& grid, SpectralWorkspace& ws);

// Unconstrained smooth random fluctuation (the no-cone Nash baseline).
RealField generate_free_field(std::uint64_t seed, double spectrum_decay, const Grid& grid,
                              SpectralWorkspace& ws);

struct TimeAveragedNash {
    bool hypothesis_holds = false;
    double holds_fraction = 0.0;   // fraction of snapshots satisfying it pointwise
    double aggregate_ratio = 0.0;  // int ||.||^2 dt / int ||.||_L1 ||grad||_L2 dt
};
TimeAveragedNash time_averaged_nash(const std::vector<double>& times,
                                    const std::vector<RealField>& fields, double N,
                                    SpectralWorkspace& ws);

}  // namespace ksipm
