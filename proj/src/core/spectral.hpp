// Eigenfunction transforms on T x [0,pi] and the spectral operator set built
// on them: derivatives, Poisson solves for the Neumann and Dirichlet
// Laplacians, norms, the x1-average decomposition and the H^-1 mix-norm.
//
// Conventions (matching the continuum transforms they discretize):
//   Neumann:    f = (1/pi) sum_{k2>=0} sum_{k1} [1/(1+delta(k2))] fN e^{i k1 x1} cos(k2 x2)
//   Dirichlet:  f = (1/pi) sum_{k2>=1} sum_{k1} fD e^{i k1 x1} sin(k2 x2)
// Coefficients are stored for k1 = 0..n1/2 (Hermitian half; the field is
// real), k2 = 0..n2-1 (cos) or 1..n2 (sin).  On the half-integer x2 grid both
// discrete transforms are exact changes of basis; Parseval holds with weight
// 1/(1+delta(k2)) on the k2 = 0 cosine row and 1/2 on the k2 = n2 sine row.

#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "core/grid.hpp"

namespace ksipm {

using cplx = std::complex<double>;

namespace detail {
// k2-rows by k1-half-columns complex coefficient block shared by both spectra.
class CoeffBlock {
  public:
    CoeffBlock() = default;
    CoeffBlock(const Grid& g, int k2_count)
        : grid_(g), n1h_(g.n1 / 2 + 1), k2n_(k2_count), c_(static_cast<std::size_t>(n1h_) * k2_count) {}

    const Grid& grid() const { return grid_; }
    int n1h() const { return n1h_; }
    int k2_count() const { return k2n_; }
    cplx* row(int r) { return c_.data() + static_cast<std::size_t>(r) * n1h_; }
    const cplx* row(int r) const { return c_.data() + static_cast<std::size_t>(r) * n1h_; }
    cplx* data() { return c_.data(); }
    const cplx* data() const { return c_.data(); }
    std::size_t size() const { return c_.size(); }

  private:
    Grid grid_;
    int n1h_ = 0, k2n_ = 0;
    std::vector<cplx> c_;
};
}  // namespace detail

class NeumannSpectrum {
  public:
    NeumannSpectrum() = default;
    explicit NeumannSpectrum(const Grid& g) : b_(g, g.n2) {}

    const Grid& grid() const { return b_.grid(); }
    // k1 in [-n1/2, n1/2-1] (negative k1 resolved by Hermitian symmetry), k2 in [0, n2-1].
    cplx coeff(int k1, int k2) const {
        if (k1 >= 0) return b_.row(k2)[k1];
        if (k1 == -b_.grid().n1 / 2) return b_.row(k2)[b_.grid().n1 / 2];
        return std::conj(b_.row(k2)[-k1]);
    }
    cplx& raw(int k1, int k2) { return b_.row(k2)[k1]; }
    cplx raw(int k1, int k2) const { return b_.row(k2)[k1]; }
    detail::CoeffBlock& block() { return b_; }
    const detail::CoeffBlock& block() const { return b_; }

  private:
    detail::CoeffBlock b_;
};

class DirichletSpectrum {
  public:
    DirichletSpectrum() = default;
    explicit DirichletSpectrum(const Grid& g) : b_(g, g.n2) {}

    const Grid& grid() const { return b_.grid(); }
    // k1 as above, k2 in [1, n2] stored at row k2-1.
    cplx coeff(int k1, int k2) const {
        if (k1 >= 0) return b_.row(k2 - 1)[k1];
        if (k1 == -b_.grid().n1 / 2) return b_.row(k2 - 1)[b_.grid().n1 / 2];
        return std::conj(b_.row(k2 - 1)[-k1]);
    }
    cplx& raw(int k1, int k2) { return b_.row(k2 - 1)[k1]; }
    cplx raw(int k1, int k2) const { return b_.row(k2 - 1)[k1]; }
    detail::CoeffBlock& block() { return b_; }
    const detail::CoeffBlock& block() const { return b_; }

  private:
    detail::CoeffBlock b_;
};

struct Norms {
    double l1 = 0, l2 = 0, linf = 0, grad_l2_sq = 0;
};

// Owns the FFTW plans and scratch for one grid.  All operations are pure
// functions of their arguments; a workspace is not safe to share between
// threads, use one per simulation/worker.  When KSIPM_THREADS >= 2 the
// transform passes are split in two halves executed on a persistent worker;
// the halves write disjoint ranges, so results are bit-identical to serial.
class SpectralWorkspace {
  public:
    explicit SpectralWorkspace(const Grid& g);
    ~SpectralWorkspace();
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    const Grid& grid() const { return grid_; }

    NeumannSpectrum forward_neumann(const RealField& f);
    RealField inverse_neumann(const NeumannSpectrum& s);
    DirichletSpectrum forward_dirichlet(const RealField& f);
    RealField inverse_dirichlet(const DirichletSpectrum& s);

    // In-place variants for preallocated outputs.  `pruned` restricts the x2
    // pass to the k1 columns kept by the dealias mask: valid when the input
    // spectrum vanishes outside the mask (inverse) or when the output is
    // masked anyway (forward, which then also applies the k2 mask).
    void forward_neumann_into(const RealField& f, NeumannSpectrum& out, bool masked = false);
    void inverse_neumann_into(const NeumannSpectrum& s, RealField& out, bool pruned = false);
    void forward_dirichlet_into(const RealField& f, DirichletSpectrum& out, bool masked = false);
    void inverse_dirichlet_into(const DirichletSpectrum& s, RealField& out, bool pruned = false);

    // -Delta_N c = f with zero mean; requires mean(f) ~ 0 (relative 1e-10).
    RealField solve_poisson_neumann(const RealField& f);
    NeumannSpectrum solve_poisson_neumann(const NeumannSpectrum& f);
    // -Delta_D psi = f; psi vanishes on x2 in {0,pi} by construction.
    RealField solve_poisson_dirichlet(const RealField& f);
    DirichletSpectrum solve_poisson_dirichlet(const DirichletSpectrum& f);

    RealField ddx1(const RealField& f);
    RealField ddx2_cos_to_sin(const RealField& f);
    RealField ddx2_sin_to_cos(const RealField& f);
    std::pair<RealField, RealField> grad(const RealField& f);
    // perp_grad(psi) = (-d_x2 psi, d_x1 psi) for a Dirichlet-type psi.
    std::pair<RealField, RealField> perp_grad(const RealField& psi);

    RealField x1_average(const RealField& f) const;
    RealField x1_fluctuation(const RealField& f) const;

    // ||d_x1 rho||^2 in the dual norm H^-1_0: sum k1^2/(k1^2+k2^2) |rhoD|^2.
    double hminus1_norm_sq_dx1(const RealField& rho);

    Norms norms(const RealField& f);
    double integrate(const RealField& f) const;   // midpoint rule, exact for the cos basis
    double mean(const RealField& f) const;
    double l2_sq(const RealField& f) const;       // nodal quadrature of f^2
    static double parseval_l2_sq(const NeumannSpectrum& s);
    static double parseval_l2_sq(const DirichletSpectrum& s);

    // Nodal quadrature of sin(k2 x2): (pi/n2) sum_j sin(k2 x2_j).  Nonzero
    // only for odd k2, where it equals (pi/n2)/sin(k2 pi/(2 n2)) = 2/k2 + O(h^2).
    double sine_mode_integral(int k2) const;

    // Potential-energy pairing of rho with (pi - x2): the weights are chosen
    // so the pairing is adjoint to the scheme's operators under the grid's
    // nodal quadrature (pairing of -Lap rho equals the nodal integral of
    // d_x2 rho, and pairing of a sine-route flux divergence equals the nodal
    // integral of the flux), which closes the discrete energy identity.
    double pairing_pi_minus_x2(const NeumannSpectrum& s) const;

    // Spectral boundary traces of the x1-integral: int_T f(x1, x2=pi or 0) dx1.
    double boundary_integral_top(const NeumannSpectrum& s) const;
    double boundary_integral_bottom(const NeumannSpectrum& s) const;

    // 2/3-rule mask: zero |k1| > n1/3 and k2 > (2 n2 - 1)/3.
    void dealias(NeumannSpectrum& s) const;
    void dealias(DirichletSpectrum& s) const;
    int dealias_k1_max() const { return grid_.n1 / 3; }
    int dealias_k2_max() const { return (2 * grid_.n2 - 1) / 3; }

    // spectrum-level derivative in x1 (i*k1, Nyquist column zeroed)
    template <class Spec>
    static void ddx1_inplace(Spec& s);

  private:
    struct Impl;
    Grid grid_;
    std::unique_ptr<Impl> impl_;

    void check_finite(const RealField& f, const char* op) const;
};

}  // namespace ksipm
