// Binary density snapshots for checkpoint/restart.
//
// Layout (little-endian): magic "KSIPM1", version byte, n1 u32, n2 u32,
// then t, g, rho_M as f64, then n1*n2 f64 nodal values, x2-major.

#pragma once

#include <string>

#include "core/grid.hpp"

namespace ksipm {

struct Snapshot {
    double t = 0.0;
    double g = 0.0;
    double rho_M = 0.0;
    RealField rho;
};

inline constexpr char kSnapshotMagic[6] = {'K', 'S', 'I', 'P', 'M', '1'};
inline constexpr unsigned char kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);  // throws std::runtime_error on I/O or format error

}  // namespace ksipm
