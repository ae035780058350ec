// Scalar diagnostics tracked along a run: mass, the L2 splits of the
// fluctuation, potential energy E = int rho (pi - x2) dx and the three terms
// of its exact rate
//
//   E'(t) = -g ||d_x1 rho||^2_{H^-1_0}  +  int_T (rho|_{x2=pi} - rho|_{x2=0}) dx1
//           -  int rho d_x2 (-Lap_N)^-1 (rho - rho_M) dx,
//
// plus residual checks that the identity closes at second order in dt.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/dynamics.hpp"
#include "core/grid.hpp"
#include "core/spectral.hpp"

namespace ksipm {

struct DiagnosticsRecord {
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;
    double l2sq = 0.0;        // ||rho - rho_M||_L2^2
    double l2sq_bar = 0.0;    // ||rho_bar - rho_M||_L2^2
    double l2sq_tilde = 0.0;  // ||rho_tilde||_L2^2
    double linf = 0.0;        // ||rho - rho_M||_inf
    double min_rho = 0.0;
    double grad_l2sq = 0.0;
    double E = 0.0;
    double term_main = 0.0;  // -g ||d_x1 rho||^2_{H^-1_0}
    double term_diff = 0.0;  // boundary diffusion flux
    double term_ks = 0.0;    // Keller-Segel contribution to E'
    double lambda_flux = 0.0;  // |term_diff|
    std::optional<double> nash_ratio;
};

// Potential energy: the exact integral of the field's cosine interpolant
// against (pi - x2), evaluated as a weighted nodal quadrature.  Agrees with
// the plain midpoint rule to O(h^2) and makes the discrete energy identity
// close exactly.
double potential_energy(const RealField& rho, SpectralWorkspace& ws);

struct DETerms {
    double term_main = 0.0, term_diff = 0.0, term_ks = 0.0;
};
DETerms dE_terms(const RealField& rho, double rho_M, double g, SpectralWorkspace& ws);

DiagnosticsRecord compute_record(const SimState& state, double dt, double g,
                                 SpectralWorkspace& ws);

// |E(t_{n+1}) - E(t_n) - trapezoid of (term_main + term_diff + term_ks)|
// normalized by max(|E|, 1), per record interval; empty input -> empty.
std::vector<double> energy_identity_residuals(std::span<const DiagnosticsRecord> window);

struct NaiveEnergyReport {
    double lhs = 0.0;     // delta l2sq + int ||grad rho||^2 dt
    double rhs = 0.0;     // C int l2sq^2 dt + 2 rho_M int l2sq dt
    double margin = 0.0;  // rhs - lhs
};
NaiveEnergyReport naive_energy_residual(std::span<const DiagnosticsRecord> window, double rho_M,
                                        double C);

// CSV sink with the fixed column order; nash_ratio serialized as an empty
// field when absent.
std::string csv_header();
std::string csv_row(const DiagnosticsRecord& r);
DiagnosticsRecord parse_csv_row(const std::string& line);  // throws on malformed rows

}  // namespace ksipm
