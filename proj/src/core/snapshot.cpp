#include "core/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace ksipm {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

namespace {
void put_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }

std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
double get_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
}  // namespace

void write_snapshot(const std::string& path, const Snapshot& s) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("snapshot: cannot open '" + path + "' for writing");
    os.write(kSnapshotMagic, sizeof(kSnapshotMagic));
    os.put(static_cast<char>(kSnapshotVersion));
    put_u32(os, static_cast<std::uint32_t>(s.rho.grid().n1));
    put_u32(os, static_cast<std::uint32_t>(s.rho.grid().n2));
    put_f64(os, s.t);
    put_f64(os, s.g);
    put_f64(os, s.rho_M);
    os.write(reinterpret_cast<const char*>(s.rho.data()),
             static_cast<std::streamsize>(s.rho.size() * sizeof(double)));
    if (!os) throw std::runtime_error("snapshot: write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("snapshot: cannot open '" + path + "'");
    char magic[6];
    is.read(magic, 6);
    if (!is || std::memcmp(magic, kSnapshotMagic, 6) != 0)
        throw std::runtime_error("snapshot: bad magic in '" + path + "'");
    const int version = is.get();
    if (version != kSnapshotVersion)
        throw std::runtime_error("snapshot: unsupported version in '" + path + "'");
    const std::uint32_t n1 = get_u32(is);
    const std::uint32_t n2 = get_u32(is);
    Snapshot s;
    s.t = get_f64(is);
    s.g = get_f64(is);
    s.rho_M = get_f64(is);
    if (!is) throw std::runtime_error("snapshot: truncated header in '" + path + "'");
    if (n1 < 8 || n2 < 8 || n1 % 2 != 0 || n1 > (1u << 20) || n2 > (1u << 20))
        throw std::runtime_error("snapshot: implausible grid in '" + path + "'");
    s.rho = RealField(Grid(static_cast<int>(n1), static_cast<int>(n2)));
    is.read(reinterpret_cast<char*>(s.rho.data()),
            static_cast<std::streamsize>(s.rho.size() * sizeof(double)));
    if (is.gcount() != static_cast<std::streamsize>(s.rho.size() * sizeof(double)))
        throw std::runtime_error("snapshot: truncated payload in '" + path + "'");
    is.peek();
    if (!is.eof()) throw std::runtime_error("snapshot: trailing bytes in '" + path + "'");
    return s;
}

}  // namespace ksipm
