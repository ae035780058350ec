#include "core/spectral.hpp"

#include <fftw3.h>

#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <mutex>
#include <thread>

namespace ksipm {

namespace {
// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int env_threads() {
    const char* env = std::getenv("KSIPM_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v >= 2 ? 2 : 1;  // transform passes split at most two ways
}

// Persistent helper thread: hands one closure over, waits for completion.
class Worker {
  public:
    Worker() : thread_([this] { loop(); }) {}
    ~Worker() {
        {
            std::lock_guard<std::mutex> lock(mu_);
            stop_ = true;
            has_task_ = true;
        }
        cv_.notify_all();
        thread_.join();
    }
    void submit(std::function<void()> fn) {
        std::lock_guard<std::mutex> lock(mu_);
        task_ = std::move(fn);
        has_task_ = true;
        done_ = false;
        cv_.notify_all();
    }
    void wait() {
        std::unique_lock<std::mutex> lock(mu_);
        cv_.wait(lock, [this] { return done_; });
    }

  private:
    void loop() {
        while (true) {
            std::function<void()> fn;
            {
                std::unique_lock<std::mutex> lock(mu_);
                cv_.wait(lock, [this] { return has_task_; });
                if (stop_) return;
                fn = std::move(task_);
                has_task_ = false;
            }
            fn();
            {
                std::lock_guard<std::mutex> lock(mu_);
                done_ = true;
            }
            cv_.notify_all();
        }
    }
    std::mutex mu_;
    std::condition_variable cv_;
    std::function<void()> task_;
    bool has_task_ = false, done_ = true, stop_ = false;
    std::thread thread_;
};

}  // namespace

struct SpectralWorkspace::Impl {
    int n1, n2, n1h;
    int kc1;      // dealias cutoff in k1
    int threads;  // 1 or 2
    double* rbuf;        // n1 x n2 real nodal scratch
    fftw_complex* cbuf;  // n1h x n2 complex scratch (row j holds k1 = 0..n1h-1)
    std::unique_ptr<Worker> worker;

    // x1 passes split over j-row chunks [0, jmid) and [jmid, n2)
    int jmid;
    fftw_plan r2c[2] = {nullptr, nullptr};
    fftw_plan c2r[2] = {nullptr, nullptr};

    // x2 passes over interleaved re/im lines l = 0..2 n1h-1; full set and the
    // dealias-pruned set l < 2 (kc1+1), each split in two chunks
    struct R2rSet {
        fftw_plan chunk[2] = {nullptr, nullptr};
        int lines = 0, lmid = 0;
    };
    R2rSet dct2_full, dct3_full, dst2_full, dst3_full;
    R2rSet dct2_prun, dct3_prun, dst2_prun, dst3_prun;

    Impl(int n1_, int n2_, int kc1_)
        : n1(n1_), n2(n2_), n1h(n1_ / 2 + 1), kc1(kc1_), threads(env_threads()) {
        rbuf = fftw_alloc_real(static_cast<std::size_t>(n1) * n2);
        cbuf = fftw_alloc_complex(static_cast<std::size_t>(n1h) * n2);
        if (threads >= 2) worker = std::make_unique<Worker>();

        std::lock_guard<std::mutex> lock(planner_mutex());
        jmid = (threads >= 2) ? n2 / 2 : n2;
        for (int c = 0; c < 2; ++c) {
            const int j0 = (c == 0) ? 0 : jmid;
            const int rows = (c == 0) ? jmid : n2 - jmid;
            if (rows <= 0) continue;
            r2c[c] = fftw_plan_many_dft_r2c(1, &n1, rows, rbuf + static_cast<std::size_t>(j0) * n1,
                                            nullptr, 1, n1,
                                            cbuf + static_cast<std::size_t>(j0) * n1h, nullptr, 1,
                                            n1h, FFTW_ESTIMATE);
            c2r[c] = fftw_plan_many_dft_c2r(1, &n1, rows,
                                            cbuf + static_cast<std::size_t>(j0) * n1h, nullptr, 1,
                                            n1h, rbuf + static_cast<std::size_t>(j0) * n1, nullptr,
                                            1, n1, FFTW_ESTIMATE);
        }

        auto make_set = [&](R2rSet& set, fftw_r2r_kind kind, int lines) {
            set.lines = lines;
            // chunk boundary on a cache line so the two threads never share one
            set.lmid = (threads >= 2) ? (lines / 2) & ~7 : lines;
            double* cd = reinterpret_cast<double*>(cbuf);
            const int H = 2 * n1h;
            for (int c = 0; c < 2; ++c) {
                const int l0 = (c == 0) ? 0 : set.lmid;
                const int cnt = (c == 0) ? set.lmid : lines - set.lmid;
                if (cnt <= 0) continue;
                set.chunk[c] = fftw_plan_many_r2r(1, &n2, cnt, cd + l0, nullptr, H, 1, cd + l0,
                                                  nullptr, H, 1, &kind, FFTW_ESTIMATE);
            }
        };
        const int full = 2 * n1h;
        const int prun = 2 * (kc1 + 1);
        make_set(dct2_full, FFTW_REDFT10, full);
        make_set(dct3_full, FFTW_REDFT01, full);
        make_set(dst2_full, FFTW_RODFT10, full);
        make_set(dst3_full, FFTW_RODFT01, full);
        make_set(dct2_prun, FFTW_REDFT10, prun);
        make_set(dct3_prun, FFTW_REDFT01, prun);
        make_set(dst2_prun, FFTW_RODFT10, prun);
        make_set(dst3_prun, FFTW_RODFT01, prun);
    }

    ~Impl() {
        worker.reset();
        std::lock_guard<std::mutex> lock(planner_mutex());
        auto kill = [](fftw_plan p) {
            if (p) fftw_destroy_plan(p);
        };
        kill(r2c[0]);
        kill(r2c[1]);
        kill(c2r[0]);
        kill(c2r[1]);
        for (R2rSet* s : {&dct2_full, &dct3_full, &dst2_full, &dst3_full, &dct2_prun, &dct3_prun,
                          &dst2_prun, &dst3_prun}) {
            kill(s->chunk[0]);
            kill(s->chunk[1]);
        }
        fftw_free(rbuf);
        fftw_free(cbuf);
    }

    void run_pair(fftw_plan a, fftw_plan b) {
        if (b && threads >= 2) {
            worker->submit([b] { fftw_execute(b); });
            if (a) fftw_execute(a);
            worker->wait();
        } else {
            if (a) fftw_execute(a);
            if (b) fftw_execute(b);
        }
    }

    void run_set(R2rSet& set) { run_pair(set.chunk[0], set.chunk[1]); }

    void rows_forward(const RealField& f) {
        std::memcpy(rbuf, f.data(), sizeof(double) * n1 * n2);
        run_pair(r2c[0], r2c[1]);
        apply_phase();
    }

    // (-1)^k1 accounts for the x1 grid starting at -pi, so coefficients match
    // the e^{-i k1 x1} convention exactly.
    void apply_phase() {
        for (int j = 0; j < n2; ++j) {
            fftw_complex* row = cbuf + static_cast<std::size_t>(j) * n1h;
            for (int k1 = 1; k1 < n1h; k1 += 2) {
                row[k1][0] = -row[k1][0];
                row[k1][1] = -row[k1][1];
            }
        }
    }

    void rows_inverse(RealField& out) {
        apply_phase();
        run_pair(c2r[0], c2r[1]);
        std::memcpy(out.data(), rbuf, sizeof(double) * n1 * n2);
    }
};

SpectralWorkspace::SpectralWorkspace(const Grid& g)
    : grid_(g), impl_(std::make_unique<Impl>(g.n1, g.n2, g.n1 / 3)) {}

SpectralWorkspace::~SpectralWorkspace() = default;

void SpectralWorkspace::check_finite(const RealField& f, const char* op) const {
    if (!f.finite()) throw std::invalid_argument(std::string(op) + ": non-finite input");
}

void SpectralWorkspace::forward_neumann_into(const RealField& f, NeumannSpectrum& out,
                                             bool masked) {
    check_finite(f, "forward_neumann");
    auto& im = *impl_;
    im.rows_forward(f);
    im.run_set(masked ? im.dct2_prun : im.dct2_full);  // REDFT10: 2 sum_j F cos(k2 x2_j)
    const double scale = kPi / (static_cast<double>(im.n1) * im.n2);
    const cplx* src = reinterpret_cast<const cplx*>(im.cbuf);
    cplx* dst = out.block().data();
    if (!masked) {
        for (std::size_t k = 0; k < out.block().size(); ++k) dst[k] = scale * src[k];
        return;
    }
    const int kc2 = dealias_k2_max();
    for (int k2 = 0; k2 < grid_.n2; ++k2) {
        cplx* row = dst + static_cast<std::size_t>(k2) * im.n1h;
        const cplx* srow = src + static_cast<std::size_t>(k2) * im.n1h;
        if (k2 > kc2) {
            std::memset(row, 0, sizeof(cplx) * im.n1h);
            continue;
        }
        for (int k1 = 0; k1 <= im.kc1; ++k1) row[k1] = scale * srow[k1];
        std::memset(row + im.kc1 + 1, 0, sizeof(cplx) * (im.n1h - im.kc1 - 1));
    }
}

NeumannSpectrum SpectralWorkspace::forward_neumann(const RealField& f) {
    NeumannSpectrum s(grid_);
    forward_neumann_into(f, s, false);
    return s;
}

void SpectralWorkspace::inverse_neumann_into(const NeumannSpectrum& s, RealField& out,
                                             bool pruned) {
    auto& im = *impl_;
    cplx* work = reinterpret_cast<cplx*>(im.cbuf);
    const cplx* src = s.block().data();
    const double inv = 1.0 / (2.0 * kPi);
    if (pruned) {
        for (int k2 = 0; k2 < grid_.n2; ++k2) {
            cplx* wrow = work + static_cast<std::size_t>(k2) * im.n1h;
            const cplx* srow = src + static_cast<std::size_t>(k2) * im.n1h;
            for (int k1 = 0; k1 <= im.kc1; ++k1) wrow[k1] = inv * srow[k1];
            std::memset(wrow + im.kc1 + 1, 0, sizeof(cplx) * (im.n1h - im.kc1 - 1));
        }
        im.run_set(im.dct3_prun);
    } else {
        for (std::size_t k = 0; k < s.block().size(); ++k) work[k] = inv * src[k];
        im.run_set(im.dct3_full);
    }
    im.rows_inverse(out);
}

RealField SpectralWorkspace::inverse_neumann(const NeumannSpectrum& s) {
    RealField out(grid_);
    inverse_neumann_into(s, out, false);
    return out;
}

void SpectralWorkspace::forward_dirichlet_into(const RealField& f, DirichletSpectrum& out,
                                               bool masked) {
    check_finite(f, "forward_dirichlet");
    auto& im = *impl_;
    im.rows_forward(f);
    im.run_set(masked ? im.dst2_prun : im.dst2_full);  // RODFT10
    const double scale = kPi / (static_cast<double>(im.n1) * im.n2);
    const cplx* src = reinterpret_cast<const cplx*>(im.cbuf);
    cplx* dst = out.block().data();
    if (!masked) {
        for (std::size_t k = 0; k < out.block().size(); ++k) dst[k] = scale * src[k];
        return;
    }
    const int kc2 = dealias_k2_max();
    for (int k2 = 1; k2 <= grid_.n2; ++k2) {
        cplx* row = dst + static_cast<std::size_t>(k2 - 1) * im.n1h;
        const cplx* srow = src + static_cast<std::size_t>(k2 - 1) * im.n1h;
        if (k2 > kc2) {
            std::memset(row, 0, sizeof(cplx) * im.n1h);
            continue;
        }
        for (int k1 = 0; k1 <= im.kc1; ++k1) row[k1] = scale * srow[k1];
        std::memset(row + im.kc1 + 1, 0, sizeof(cplx) * (im.n1h - im.kc1 - 1));
    }
}

DirichletSpectrum SpectralWorkspace::forward_dirichlet(const RealField& f) {
    DirichletSpectrum s(grid_);
    forward_dirichlet_into(f, s, false);
    return s;
}

void SpectralWorkspace::inverse_dirichlet_into(const DirichletSpectrum& s, RealField& out,
                                               bool pruned) {
    auto& im = *impl_;
    cplx* work = reinterpret_cast<cplx*>(im.cbuf);
    const cplx* src = s.block().data();
    // The k2 = n2 row enters the synthesis with weight 1/2, the sine
    // counterpart of the delta(k2) factor; RODFT01 carries exactly that.
    const double inv = 1.0 / (2.0 * kPi);
    if (pruned) {
        for (int r = 0; r < grid_.n2; ++r) {
            cplx* wrow = work + static_cast<std::size_t>(r) * im.n1h;
            const cplx* srow = src + static_cast<std::size_t>(r) * im.n1h;
            for (int k1 = 0; k1 <= im.kc1; ++k1) wrow[k1] = inv * srow[k1];
            std::memset(wrow + im.kc1 + 1, 0, sizeof(cplx) * (im.n1h - im.kc1 - 1));
        }
        im.run_set(im.dst3_prun);
    } else {
        for (std::size_t k = 0; k < s.block().size(); ++k) work[k] = inv * src[k];
        im.run_set(im.dst3_full);
    }
    im.rows_inverse(out);
}

RealField SpectralWorkspace::inverse_dirichlet(const DirichletSpectrum& s) {
    RealField out(grid_);
    inverse_dirichlet_into(s, out, false);
    return out;
}

NeumannSpectrum SpectralWorkspace::solve_poisson_neumann(const NeumannSpectrum& f) {
    // Solvability: the k = (0,0) mode must vanish relative to the field size.
    const double l2 = std::sqrt(parseval_l2_sq(f));
    const double mean_part = std::abs(f.coeff(0, 0)) / std::sqrt(2.0);  // L2 mass of the constant mode
    if (mean_part > 1e-10 * std::max(l2, 1e-300) && l2 > 0.0)
        throw std::invalid_argument("solve_poisson_neumann: nonzero-mean input");
    NeumannSpectrum c(grid_);
    const int n1h = grid_.n1 / 2 + 1;
    for (int k2 = 0; k2 < grid_.n2; ++k2) {
        const cplx* src = f.block().row(k2);
        cplx* dst = c.block().row(k2);
        for (int k1 = 0; k1 < n1h; ++k1) {
            const double lam = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            dst[k1] = (lam == 0.0) ? cplx(0.0) : src[k1] / lam;
        }
    }
    return c;
}

RealField SpectralWorkspace::solve_poisson_neumann(const RealField& f) {
    check_finite(f, "solve_poisson_neumann");
    NeumannSpectrum c = solve_poisson_neumann(forward_neumann(f));
    return inverse_neumann(c);
}

DirichletSpectrum SpectralWorkspace::solve_poisson_dirichlet(const DirichletSpectrum& f) {
    DirichletSpectrum psi(grid_);
    const int n1h = grid_.n1 / 2 + 1;
    for (int k2 = 1; k2 <= grid_.n2; ++k2) {
        const cplx* src = f.block().row(k2 - 1);
        cplx* dst = psi.block().row(k2 - 1);
        for (int k1 = 0; k1 < n1h; ++k1) {
            const double lam = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            dst[k1] = src[k1] / lam;
        }
    }
    return psi;
}

RealField SpectralWorkspace::solve_poisson_dirichlet(const RealField& f) {
    check_finite(f, "solve_poisson_dirichlet");
    DirichletSpectrum psi = solve_poisson_dirichlet(forward_dirichlet(f));
    return inverse_dirichlet(psi);
}

template <class Spec>
void SpectralWorkspace::ddx1_inplace(Spec& s) {
    const Grid& g = s.grid();
    const int n1h = g.n1 / 2 + 1;
    const int rows = s.block().k2_count();
    for (int r = 0; r < rows; ++r) {
        cplx* row = s.block().row(r);
        for (int k1 = 0; k1 < n1h - 1; ++k1) row[k1] *= cplx(0.0, static_cast<double>(k1));
        row[n1h - 1] = 0.0;  // Nyquist derivative is sign-ambiguous; drop it
    }
}
template void SpectralWorkspace::ddx1_inplace<NeumannSpectrum>(NeumannSpectrum&);
template void SpectralWorkspace::ddx1_inplace<DirichletSpectrum>(DirichletSpectrum&);

RealField SpectralWorkspace::ddx1(const RealField& f) {
    check_finite(f, "ddx1");
    NeumannSpectrum s = forward_neumann(f);
    ddx1_inplace(s);
    return inverse_neumann(s);
}

RealField SpectralWorkspace::ddx2_cos_to_sin(const RealField& f) {
    check_finite(f, "ddx2_cos_to_sin");
    NeumannSpectrum s = forward_neumann(f);
    DirichletSpectrum d(grid_);
    const int n1h = grid_.n1 / 2 + 1;
    for (int k2 = 1; k2 <= grid_.n2; ++k2) {
        cplx* dst = d.block().row(k2 - 1);
        if (k2 <= grid_.n2 - 1) {
            const cplx* src = s.block().row(k2);
            for (int k1 = 0; k1 < n1h; ++k1) dst[k1] = -static_cast<double>(k2) * src[k1];
        } else {
            for (int k1 = 0; k1 < n1h; ++k1) dst[k1] = 0.0;
        }
    }
    return inverse_dirichlet(d);
}

RealField SpectralWorkspace::ddx2_sin_to_cos(const RealField& f) {
    check_finite(f, "ddx2_sin_to_cos");
    DirichletSpectrum s = forward_dirichlet(f);
    NeumannSpectrum n(grid_);
    const int n1h = grid_.n1 / 2 + 1;
    for (int k2 = 0; k2 < grid_.n2; ++k2) {
        cplx* dst = n.block().row(k2);
        if (k2 >= 1) {
            const cplx* src = s.block().row(k2 - 1);
            for (int k1 = 0; k1 < n1h; ++k1) dst[k1] = static_cast<double>(k2) * src[k1];
        } else {
            for (int k1 = 0; k1 < n1h; ++k1) dst[k1] = 0.0;
        }
    }
    return inverse_neumann(n);
}

std::pair<RealField, RealField> SpectralWorkspace::grad(const RealField& f) {
    return {ddx1(f), ddx2_cos_to_sin(f)};
}

std::pair<RealField, RealField> SpectralWorkspace::perp_grad(const RealField& psi) {
    RealField mdx2 = ddx2_sin_to_cos(psi);
    mdx2 *= -1.0;
    DirichletSpectrum s = forward_dirichlet(psi);
    ddx1_inplace(s);
    return {std::move(mdx2), inverse_dirichlet(s)};
}

RealField SpectralWorkspace::x1_average(const RealField& f) const {
    RealField out(grid_);
    const int n1 = grid_.n1, n2 = grid_.n2;
    for (int j = 0; j < n2; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n1; ++i) acc += f.at(i, j);
        acc /= n1;
        for (int i = 0; i < n1; ++i) out.at(i, j) = acc;
    }
    return out;
}

RealField SpectralWorkspace::x1_fluctuation(const RealField& f) const {
    RealField out = f;
    out -= x1_average(f);
    return out;
}

double SpectralWorkspace::hminus1_norm_sq_dx1(const RealField& rho) {
    DirichletSpectrum s = forward_dirichlet(rho);
    const int n1h = grid_.n1 / 2 + 1;
    double acc = 0.0;
    for (int k2 = 1; k2 <= grid_.n2; ++k2) {
        const cplx* row = s.block().row(k2 - 1);
        const double w2 = (k2 == grid_.n2) ? 0.5 : 1.0;
        // k1 = 0 contributes nothing; Nyquist excluded to match ddx1.
        for (int k1 = 1; k1 < n1h - 1; ++k1) {
            const double kk = static_cast<double>(k1) * k1;
            acc += 2.0 * w2 * kk / (kk + static_cast<double>(k2) * k2) * std::norm(row[k1]);
        }
    }
    return acc;
}

double SpectralWorkspace::integrate(const RealField& f) const {
    double acc = 0.0;
    const double* p = f.data();
    for (std::size_t k = 0; k < f.size(); ++k) acc += p[k];
    return acc * grid_.cell();
}

double SpectralWorkspace::mean(const RealField& f) const { return integrate(f) / (2.0 * kPi * kPi); }

double SpectralWorkspace::l2_sq(const RealField& f) const {
    double acc = 0.0;
    const double* p = f.data();
    for (std::size_t k = 0; k < f.size(); ++k) acc += p[k] * p[k];
    return acc * grid_.cell();
}

double SpectralWorkspace::parseval_l2_sq(const NeumannSpectrum& s) {
    const Grid& g = s.grid();
    const int n1h = g.n1 / 2 + 1;
    double acc = 0.0;
    for (int k2 = 0; k2 < g.n2; ++k2) {
        const cplx* row = s.block().row(k2);
        const double w2 = (k2 == 0) ? 0.5 : 1.0;
        acc += w2 * std::norm(row[0]);
        acc += w2 * std::norm(row[n1h - 1]);
        for (int k1 = 1; k1 < n1h - 1; ++k1) acc += 2.0 * w2 * std::norm(row[k1]);
    }
    return acc;
}

double SpectralWorkspace::parseval_l2_sq(const DirichletSpectrum& s) {
    const Grid& g = s.grid();
    const int n1h = g.n1 / 2 + 1;
    double acc = 0.0;
    for (int k2 = 1; k2 <= g.n2; ++k2) {
        const cplx* row = s.block().row(k2 - 1);
        const double w2 = (k2 == g.n2) ? 0.5 : 1.0;
        acc += w2 * std::norm(row[0]);
        acc += w2 * std::norm(row[n1h - 1]);
        for (int k1 = 1; k1 < n1h - 1; ++k1) acc += 2.0 * w2 * std::norm(row[k1]);
    }
    return acc;
}

Norms SpectralWorkspace::norms(const RealField& f) {
    Norms n;
    const double* p = f.data();
    double l1 = 0, l2 = 0, li = 0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double a = std::abs(p[k]);
        l1 += a;
        l2 += p[k] * p[k];
        if (a > li) li = a;
    }
    n.l1 = l1 * grid_.cell();
    n.l2 = std::sqrt(l2 * grid_.cell());
    n.linf = li;
    NeumannSpectrum s = forward_neumann(f);
    const int n1h = grid_.n1 / 2 + 1;
    double g2 = 0.0;
    for (int k2 = 0; k2 < grid_.n2; ++k2) {
        const cplx* row = s.block().row(k2);
        const double w2 = (k2 == 0) ? 0.5 : 1.0;
        const double kk2 = static_cast<double>(k2) * k2;
        g2 += w2 * kk2 * std::norm(row[0]);
        g2 += w2 * (static_cast<double>(grid_.n1 / 2) * (grid_.n1 / 2) + kk2) * std::norm(row[n1h - 1]);
        for (int k1 = 1; k1 < n1h - 1; ++k1)
            g2 += 2.0 * w2 * (static_cast<double>(k1) * k1 + kk2) * std::norm(row[k1]);
    }
    n.grad_l2_sq = g2;
    return n;
}

double SpectralWorkspace::sine_mode_integral(int k2) const {
    if (k2 % 2 == 0) return 0.0;
    return (kPi / grid_.n2) / std::sin(0.5 * k2 * kPi / grid_.n2);
}

double SpectralWorkspace::pairing_pi_minus_x2(const NeumannSpectrum& s) const {
    // Continuum weights are pi^2/2 (k2 = 0) and (1-(-1)^k2)/k2^2; the discrete
    // weights replace 2/k2 by the nodal quadrature of sin(k2 x2), an O(h^2)
    // perturbation that makes the pairing quadrature-adjoint (see header).
    double acc = 0.5 * s.coeff(0, 0).real() * (kPi * kPi / 2.0);
    for (int k2 = 1; k2 < grid_.n2; k2 += 2)
        acc += s.coeff(0, k2).real() * sine_mode_integral(k2) / k2;
    return 2.0 * acc;
}

double SpectralWorkspace::boundary_integral_top(const NeumannSpectrum& s) const {
    // int_T f(x1, pi) dx1 = 2 sum_k2 w(k2) fN(0,k2) cos(k2 pi)
    double acc = 0.5 * s.coeff(0, 0).real();
    for (int k2 = 1; k2 < grid_.n2; ++k2)
        acc += s.coeff(0, k2).real() * ((k2 % 2 == 0) ? 1.0 : -1.0);
    return 2.0 * acc;
}

double SpectralWorkspace::boundary_integral_bottom(const NeumannSpectrum& s) const {
    double acc = 0.5 * s.coeff(0, 0).real();
    for (int k2 = 1; k2 < grid_.n2; ++k2) acc += s.coeff(0, k2).real();
    return 2.0 * acc;
}

void SpectralWorkspace::dealias(NeumannSpectrum& s) const {
    const int kc1 = dealias_k1_max(), kc2 = dealias_k2_max();
    const int n1h = grid_.n1 / 2 + 1;
    for (int k2 = 0; k2 < grid_.n2; ++k2) {
        cplx* row = s.block().row(k2);
        if (k2 > kc2) {
            for (int k1 = 0; k1 < n1h; ++k1) row[k1] = 0.0;
        } else {
            for (int k1 = kc1 + 1; k1 < n1h; ++k1) row[k1] = 0.0;
        }
    }
}

void SpectralWorkspace::dealias(DirichletSpectrum& s) const {
    const int kc1 = dealias_k1_max(), kc2 = dealias_k2_max();
    const int n1h = grid_.n1 / 2 + 1;
    for (int k2 = 1; k2 <= grid_.n2; ++k2) {
        cplx* row = s.block().row(k2 - 1);
        if (k2 > kc2) {
            for (int k1 = 0; k1 < n1h; ++k1) row[k1] = 0.0;
        } else {
            for (int k1 = kc1 + 1; k1 < n1h; ++k1) row[k1] = 0.0;
        }
    }
}

}  // namespace ksipm
