// Built-in initial data library: smooth bumps, eigenmode perturbations and
// filtered random fields, all nonnegative and deterministic per seed.

#pragma once

#include <cstdint>
#include <string>

#include "core/grid.hpp"
#include "core/spectral.hpp"

namespace ksipm {

struct InitSpec {
    std::string kind = "gaussian_bump";  // gaussian_bump|multi_bump|eigenmode|random|from_snapshot
    // gaussian_bump / multi_bump
    double mass = 4.0 * kPi;
    double center_x1 = 0.0;
    double center_x2 = kPi / 2.0;
    double sigma = 0.5;
    int bumps = 3;
    // eigenmode
    int k1 = 0, k2 = 1;
    double amplitude = 0.1;
    double floor = 1.0;
    // random
    std::uint64_t seed = 1;
    double decay = 4.0;
    // from_snapshot
    std::string path;
};

// Deterministic uniform in [0,1) from a raw 64-bit draw; avoids the
// implementation-defined std distributions so outputs are portable.
double u01(std::uint64_t raw);

RealField make_initial_data(const InitSpec& spec, const Grid& grid, SpectralWorkspace& ws);

}  // namespace ksipm
