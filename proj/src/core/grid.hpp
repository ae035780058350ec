// Collocation grid and nodal scalar field on Omega = T x [0,pi].
//
// x1 is periodic with n1 equispaced nodes starting at -pi; x2 uses n2
// half-integer nodes pi*(j+1/2)/n2, which are strictly interior so the
// type-II cosine and sine transforms are both exact orthogonal changes
// of basis on the same points.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ksipm {

inline constexpr double kPi = 3.14159265358979323846;

struct Grid {
    int n1 = 0;  // modes/points in x1, even
    int n2 = 0;  // points in x2

    Grid() = default;
    Grid(int n1_, int n2_) : n1(n1_), n2(n2_) {
        if (n1 < 8 || n2 < 8) throw std::invalid_argument("Grid: n1, n2 must be >= 8");
        if (n1 % 2 != 0) throw std::invalid_argument("Grid: n1 must be even");
    }

    double x1(int i) const { return -kPi + 2.0 * kPi * i / n1; }
    double x2(int j) const { return kPi * (j + 0.5) / n2; }
    double h1() const { return 2.0 * kPi / n1; }
    double h2() const { return kPi / n2; }
    double cell() const { return h1() * h2(); }
    std::size_t size() const { return static_cast<std::size_t>(n1) * n2; }

    bool operator==(const Grid& o) const { return n1 == o.n1 && n2 == o.n2; }
};

// Nodal values, x2-major: row j holds all x1 at node x2_j.
class RealField {
  public:
    RealField() = default;
    explicit RealField(const Grid& g, double fill = 0.0) : grid_(g), v_(g.size(), fill) {}

    const Grid& grid() const { return grid_; }
    double& at(int i, int j) { return v_[static_cast<std::size_t>(j) * grid_.n1 + i]; }
    double at(int i, int j) const { return v_[static_cast<std::size_t>(j) * grid_.n1 + i]; }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::size_t size() const { return v_.size(); }

    bool finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    RealField& operator+=(const RealField& o) {
        for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
        return *this;
    }
    RealField& operator-=(const RealField& o) {
        for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
        return *this;
    }
    RealField& operator*=(double a) {
        for (double& x : v_) x *= a;
        return *this;
    }

  private:
    Grid grid_;
    std::vector<double> v_;
};

inline RealField operator+(RealField a, const RealField& b) { return a += b; }
inline RealField operator-(RealField a, const RealField& b) { return a -= b; }
inline RealField operator*(double s, RealField a) { return a *= s; }

// Pointwise product on the nodes (the pseudo-spectral product).
inline RealField hadamard(const RealField& a, const RealField& b) {
    RealField r = a;
    const double* pb = b.data();
    double* pr = r.data();
    for (std::size_t k = 0; k < r.size(); ++k) pr[k] *= pb[k];
    return r;
}

}  // namespace ksipm
