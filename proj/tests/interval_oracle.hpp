// Brute-force reference for the good/bad interval partition: a direct global
// enumeration of the inductive definition on a piecewise-linear trace,
// independent of the streaming classifier.  Levels are the dyadic values 2^N;
// an anchor at 2^N is followed by the first crossing of 2^(N+1) (good, level
// N) or of 2^(N-1) (bad, level N-1); the first anchor is the last touch of
// 2^N0 before the trace first reaches 2^(N0+1); descending to 2^(N0-1) drops
// back to the seeking phase.  A sample exactly on a level counts as a
// crossing at the last sample of the flat run, once the trace strictly
// leaves the level.

#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "core/initial_data.hpp"
#include "core/intervals.hpp"

namespace ksipm::test {

struct OracleResult {
    std::vector<Interval> intervals;
    std::optional<int> final_anchor_exp;
};

inline OracleResult enumerate_intervals(const std::vector<double>& t,
                                        const std::vector<double>& y, int n0) {
    // All crossing times of one level value over the whole trace.
    auto crossings = [&](double level) {
        std::vector<double> out;
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            const double a = y[i], b = y[i + 1];
            if ((a < level && b > level) || (a > level && b < level)) {
                out.push_back(t[i] + (level - a) / (b - a) * (t[i + 1] - t[i]));
            } else if (b == level && a != level) {
                // end of a (possibly flat) run at the level: the crossing sits
                // on the last flat sample; a run reaching the end of the trace
                // still attains the level and counts
                std::size_t j = i + 1;
                while (j + 1 < t.size() && y[j + 1] == level) ++j;
                out.push_back(t[j]);
                i = j - 1;  // skip the flat run
            }
        }
        // a trace starting exactly on the level
        if (!y.empty() && y[0] == level) {
            std::size_t j = 0;
            while (j + 1 < t.size() && y[j + 1] == level) ++j;
            out.insert(out.begin(), t[j]);
        }
        return out;
    };

    auto first_after = [](const std::vector<double>& xs, double tau) -> std::optional<double> {
        for (double x : xs)
            if (x > tau) return x;
        return std::nullopt;
    };

    OracleResult res;
    double tau = -std::numeric_limits<double>::infinity();
    while (true) {
        // seeking phase: anchor at the last touch of 2^n0 before the trace
        // first reaches 2^(n0+1)
        const double L0 = std::ldexp(1.0, n0);
        std::vector<double> c0 = crossings(L0);
        std::optional<double> first_anchor = first_after(c0, tau);
        if (!first_anchor) {
            res.final_anchor_exp = std::nullopt;
            return res;
        }
        std::optional<double> t_up = first_after(crossings(2.0 * L0), *first_anchor);
        if (!t_up) {
            res.final_anchor_exp = n0;  // anchored, never escaped
            return res;
        }
        double anchor = *first_anchor;
        for (double c : c0)
            if (c > anchor && c < *t_up) anchor = c;
        res.intervals.push_back({n0, IntervalKind::good, anchor, *t_up, L0, 2.0 * L0});

        // running phase
        int A = n0 + 1;
        tau = *t_up;
        while (true) {
            std::optional<double> up = first_after(crossings(std::ldexp(1.0, A + 1)), tau);
            std::optional<double> dn = first_after(crossings(std::ldexp(1.0, A - 1)), tau);
            if (up && (!dn || *up < *dn)) {
                res.intervals.push_back({A, IntervalKind::good, tau, *up, std::ldexp(1.0, A),
                                         std::ldexp(1.0, A + 1)});
                tau = *up;
                ++A;
            } else if (dn) {
                res.intervals.push_back({A - 1, IntervalKind::bad, tau, *dn, std::ldexp(1.0, A),
                                         std::ldexp(1.0, A - 1)});
                tau = *dn;
                --A;
                if (A == n0 - 1) break;  // below the floor: back to seeking
            } else {
                res.final_anchor_exp = A;
                return res;
            }
        }
    }
}

// Piecewise-linear random trace in exponent space.
struct SyntheticTrace {
    std::vector<double> t, y;
};

inline SyntheticTrace random_trace(std::uint64_t seed, int n0, int segments = 24,
                                   int samples_per_segment = 6, bool force_escape = false) {
    std::mt19937_64 rng(seed);
    auto u = [&] { return u01(rng()); };
    SyntheticTrace tr;
    double x = n0 - 1.5 + 0.4 * u();  // start below the base level
    double time = 0.0;
    tr.t.push_back(time);
    tr.y.push_back(std::exp2(x));
    double xmax = x;
    for (int s = 0; s < segments; ++s) {
        const double slope = -3.5 + 7.0 * u();
        const double dur = 0.2 + 0.8 * u();
        for (int k = 1; k <= samples_per_segment; ++k) {
            const double frac = static_cast<double>(k) / samples_per_segment;
            double xv = x + slope * dur * frac;
            xv = std::min(xv, n0 + 7.3);
            xv = std::max(xv, n0 - 3.7);
            tr.t.push_back(time + dur * frac);
            tr.y.push_back(std::exp2(xv));
            xmax = std::max(xmax, xv);
        }
        x = std::min(std::max(x + slope * dur, n0 - 3.7), n0 + 7.3);
        time += dur;
    }
    if (force_escape) {
        // final climb strictly past the running maximum
        const double target = xmax + 1.6;
        for (int k = 1; k <= 8; ++k) {
            const double frac = static_cast<double>(k) / 8.0;
            tr.t.push_back(time + 0.5 * frac);
            tr.y.push_back(std::exp2(x + (target - x) * frac));
        }
    }
    return tr;
}

}  // namespace ksipm::test
