#include "core/initial_data.hpp"

#include <random>

#include "core/snapshot.hpp"

namespace ksipm {

double u01(std::uint64_t raw) { return static_cast<double>(raw >> 11) * 0x1.0p-53; }

namespace {

void add_periodic_gaussian(RealField& f, double c1, double c2, double sigma, double weight) {
    const Grid& g = f.grid();
    const double s2 = 2.0 * sigma * sigma;
    // Periodize in x1 only; the strip is not periodic in x2.
    for (int j = 0; j < g.n2; ++j) {
        const double dy = g.x2(j) - c2;
        const double ey = dy * dy;
        for (int i = 0; i < g.n1; ++i) {
            double acc = 0.0;
            for (int m = -2; m <= 2; ++m) {
                const double dx = g.x1(i) - c1 + 2.0 * kPi * m;
                acc += std::exp(-(dx * dx + ey) / s2);
            }
            f.at(i, j) += weight * acc;
        }
    }
}

void rescale_to_mass(RealField& f, double mass, const SpectralWorkspace& ws) {
    const double m0 = ws.integrate(f);
    if (m0 <= 0.0) throw std::invalid_argument("make_initial_data: field has nonpositive mass");
    f *= mass / m0;
}

RealField gaussian_bump(const InitSpec& s, const Grid& g, SpectralWorkspace& ws) {
    if (s.mass <= 0.0) throw std::invalid_argument("make_initial_data: negative mass");
    if (s.sigma < 2.0 * std::max(g.h1(), g.h2()))
        throw std::invalid_argument("make_initial_data: sigma under-resolved on this grid");
    RealField f(g);
    add_periodic_gaussian(f, s.center_x1, s.center_x2, s.sigma, 1.0);
    rescale_to_mass(f, s.mass, ws);
    return f;
}

RealField multi_bump(const InitSpec& s, const Grid& g, SpectralWorkspace& ws) {
    if (s.mass <= 0.0) throw std::invalid_argument("make_initial_data: negative mass");
    if (s.sigma < 2.0 * std::max(g.h1(), g.h2()))
        throw std::invalid_argument("make_initial_data: sigma under-resolved on this grid");
    if (s.bumps < 1) throw std::invalid_argument("make_initial_data: bumps must be >= 1");
    RealField f(g);
    std::mt19937_64 rng(s.seed);
    for (int b = 0; b < s.bumps; ++b) {
        const double c1 = -kPi + 2.0 * kPi * u01(rng());
        // keep centers away from the walls by a couple of widths
        const double margin = std::min(2.0 * s.sigma, kPi / 4.0);
        const double c2 = margin + (kPi - 2.0 * margin) * u01(rng());
        const double w = 0.5 + u01(rng());
        add_periodic_gaussian(f, c1, c2, s.sigma, w);
    }
    rescale_to_mass(f, s.mass, ws);
    return f;
}

RealField eigenmode(const InitSpec& s, const Grid& g) {
    if (s.floor < std::abs(s.amplitude))
        throw std::invalid_argument("make_initial_data: eigenmode floor below amplitude");
    RealField f(g);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i)
            f.at(i, j) = s.floor + s.amplitude * std::cos(s.k1 * g.x1(i)) * std::cos(s.k2 * g.x2(j));
    return f;
}

RealField random_field(const InitSpec& s, const Grid& g, SpectralWorkspace& ws) {
    // Filtered noise: random phases with |k|^-decay magnitudes, shifted
    // nonnegative above the floor.
    std::mt19937_64 rng(s.seed);
    NeumannSpectrum spec(g);
    const int n1h = g.n1 / 2 + 1;
    const int k1max = std::min(n1h - 2, g.n1 / 3);
    const int k2max = std::min(g.n2 - 1, (2 * g.n2 - 1) / 3);
    for (int k2 = 0; k2 <= k2max; ++k2) {
        for (int k1 = 0; k1 <= k1max; ++k1) {
            if (k1 == 0 && k2 == 0) continue;
            const double amp = std::pow(static_cast<double>(k1 * k1 + k2 * k2), -s.decay / 2.0);
            const double phase = 2.0 * kPi * u01(rng());
            cplx c = amp * cplx(std::cos(phase), std::sin(phase));
            if (k1 == 0) c = cplx(c.real(), 0.0);  // k1 = 0 column is real for real fields
            spec.raw(k1, k2) = c;
        }
    }
    RealField f = ws.inverse_neumann(spec);
    double lo = f.data()[0], hi = f.data()[0];
    for (std::size_t k = 0; k < f.size(); ++k) {
        lo = std::min(lo, f.data()[k]);
        hi = std::max(hi, f.data()[k]);
    }
    const double span = std::max(hi - lo, 1e-300);
    for (std::size_t k = 0; k < f.size(); ++k)
        f.data()[k] = s.floor + s.amplitude * (f.data()[k] - lo) / span;
    if (s.mass > 0.0) rescale_to_mass(f, s.mass, ws);
    return f;
}

}  // namespace

RealField make_initial_data(const InitSpec& spec, const Grid& grid, SpectralWorkspace& ws) {
    if (spec.kind == "gaussian_bump") return gaussian_bump(spec, grid, ws);
    if (spec.kind == "multi_bump") return multi_bump(spec, grid, ws);
    if (spec.kind == "eigenmode") return eigenmode(spec, grid);
    if (spec.kind == "random") return random_field(spec, grid, ws);
    if (spec.kind == "from_snapshot") {
        Snapshot snap = read_snapshot(spec.path);
        if (!(snap.rho.grid() == grid))
            throw std::invalid_argument("make_initial_data: snapshot grid mismatch");
        return snap.rho;
    }
    throw std::invalid_argument("make_initial_data: unknown init kind '" + spec.kind + "'");
}

}  // namespace ksipm
