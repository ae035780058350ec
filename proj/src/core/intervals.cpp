#include "core/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ksipm {

IntervalClassifier::IntervalClassifier(const ClassifierConfig& cfg) : cfg_(cfg) {
    if (cfg.N0 < 1) throw std::invalid_argument("ClassifierConfig: N0 must be >= 1");
}

std::optional<int> IntervalClassifier::anchor_exponent() const {
    if (mode_ == Mode::running) return level_exp_;
    if (anchored_) return cfg_.N0;
    return std::nullopt;
}

std::vector<double> IntervalClassifier::watched_levels() const {
    const double L0 = std::ldexp(1.0, cfg_.N0);
    if (mode_ == Mode::seeking) {
        if (anchored_) return {L0, 2.0 * L0};
        return {L0};
    }
    return {std::ldexp(1.0, level_exp_ + 1), std::ldexp(1.0, level_exp_ - 1)};
}

void IntervalClassifier::handle_crossing(double level, double tc, std::vector<Interval>& out) {
    const double L0 = std::ldexp(1.0, cfg_.N0);
    if (mode_ == Mode::seeking) {
        if (level == L0) {  // re-anchor at the latest touch
            anchored_ = true;
            anchor_t_ = tc;
            return;
        }
        // level == 2 L0: first departure upward completes a good interval of
        // level N0 from the last anchor.
        Interval iv{cfg_.N0, IntervalKind::good, anchor_t_, tc, L0, 2.0 * L0};
        out.push_back(iv);
        intervals_.push_back(iv);
        mode_ = Mode::running;
        level_exp_ = cfg_.N0 + 1;
        anchor_t_ = tc;
        return;
    }
    const double up = std::ldexp(1.0, level_exp_ + 1);
    if (level == up) {
        Interval iv{level_exp_, IntervalKind::good, anchor_t_, tc,
                    std::ldexp(1.0, level_exp_), up};
        out.push_back(iv);
        intervals_.push_back(iv);
        ++level_exp_;
        anchor_t_ = tc;
    } else {
        Interval iv{level_exp_ - 1, IntervalKind::bad, anchor_t_, tc,
                    std::ldexp(1.0, level_exp_), std::ldexp(1.0, level_exp_ - 1)};
        out.push_back(iv);
        intervals_.push_back(iv);
        --level_exp_;
        anchor_t_ = tc;
        if (level_exp_ == cfg_.N0 - 1) {  // below the partition floor
            mode_ = Mode::seeking;
            anchored_ = false;
        }
    }
}

std::vector<Interval> IntervalClassifier::ingest(double t, double y) {
    if (!std::isfinite(t) || !std::isfinite(y))
        throw std::invalid_argument("IntervalClassifier: non-finite sample");
    std::vector<Interval> out;
    if (!have_prev_) {
        have_prev_ = true;
        prev_t_ = t;
        prev_y_ = y;
        // A first sample exactly on a watched level is a potential crossing.
        for (double L : watched_levels())
            if (y == L) pending_ = {L, t};
        return out;
    }
    if (!(t > prev_t_)) throw std::invalid_argument("IntervalClassifier: non-increasing time");

    double a_t = prev_t_, a_y = prev_y_;

    if (pending_) {
        auto [L, tp] = *pending_;
        pending_.reset();
        if (y == L) {
            // Still flat on the level: not a crossing, but the new sample is
            // again a candidate touch.
            pending_ = {L, t};
            prev_t_ = t;
            prev_y_ = y;
            return out;
        }
        // The trace strictly leaves the level: the touch was a crossing.
        handle_crossing(L, tp, out);
        a_t = tp;
        a_y = L;
    }

    // Scan the (monotone) linear segment for crossings in time order.
    while (true) {
        double best_t = 0.0, best_L = 0.0;
        bool found = false;
        for (double L : watched_levels()) {
            if ((a_y < L && y > L) || (a_y > L && y < L)) {
                const double tc = a_t + (L - a_y) / (y - a_y) * (t - a_t);
                if (!found || tc < best_t) {
                    found = true;
                    best_t = tc;
                    best_L = L;
                }
            }
        }
        if (!found) {
            // Segment may end exactly on a watched level; defer to the next
            // sample (the trace may bounce back without passing).
            for (double L : watched_levels())
                if (y == L && a_y != L) pending_ = {L, t};
            break;
        }
        handle_crossing(best_L, best_t, out);
        a_t = best_t;
        a_y = best_L;
    }

    prev_t_ = t;
    prev_y_ = y;
    return out;
}

std::vector<Interval> IntervalClassifier::finish() {
    std::vector<Interval> out;
    if (pending_) {
        auto [L, tp] = *pending_;
        pending_.reset();
        handle_crossing(L, tp, out);
    }
    return out;
}

Summary summarize(const std::vector<Interval>& ivs, int n0, std::optional<int> final_anchor_exp) {
    Summary s;
    std::map<int, LevelCount> levels;
    std::map<int, std::vector<IntervalKind>> order;
    for (const Interval& iv : ivs) {
        LevelCount& lc = levels[iv.level];
        lc.level = iv.level;
        if (iv.kind == IntervalKind::good) {
            ++lc.goods;
            lc.min_good_length = (lc.goods == 1) ? iv.length()
                                                 : std::min(lc.min_good_length, iv.length());
        } else {
            ++lc.bads;
        }
        order[iv.level].push_back(iv.kind);
    }

    // Same-level intervals must alternate starting with good (levels >= N0).
    for (auto& [lvl, seq] : order) {
        if (lvl < n0) continue;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            const IntervalKind expect = (i % 2 == 0) ? IntervalKind::good : IntervalKind::bad;
            if (seq[i] != expect) s.intertwining_ok = false;
        }
    }

    // Count test on the levels the trace has escaped past.
    if (final_anchor_exp) {
        s.checked_from = n0;
        s.checked_to = *final_anchor_exp - 1;
        for (int lvl = s.checked_from; lvl <= s.checked_to; ++lvl) {
            const auto it = levels.find(lvl);
            const int goods = (it == levels.end()) ? 0 : it->second.goods;
            const int bads = (it == levels.end()) ? 0 : it->second.bads;
            if (goods != bads + 1) s.intertwining_ok = false;
        }
    }

    s.per_level.reserve(levels.size());
    for (auto& [lvl, lc] : levels) s.per_level.push_back(lc);
    return s;
}

BudgetLedger budget_ledger(const std::vector<Interval>& ivs, double g,
                           const ClassifierConfig& cfg, double mass) {
    if (!cfg.c1 || !cfg.C1) throw std::invalid_argument("budget_ledger: c1 and C1 required");
    BudgetLedger b;
    b.cap = kPi * mass;
    std::map<int, double> per;
    for (const Interval& iv : ivs) {
        const double contrib = (iv.kind == IntervalKind::good)
                                   ? -(*cfg.c1) * g / static_cast<double>(iv.level)
                                   : (*cfg.C1) * std::exp2(-iv.level / 3.0);
        per[iv.level] += contrib;
        b.cumulative_drop += contrib;
    }
    for (auto& [lvl, v] : per) b.per_level.emplace_back(lvl, v);
    b.within_cap = -b.cumulative_drop <= b.cap;
    return b;
}

}  // namespace ksipm
