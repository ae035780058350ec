// Streaming partition of the ||rho - rho_M||_L2^2 trajectory into good and
// bad intervals between dyadic levels 2^N.
//
// The automaton keeps an anchor at a level value 2^A.  Before the trace has
// reached 2^(N0+1), every touch of 2^N0 re-anchors (the "last crossing"
// before the departure upward); afterwards each first crossing of 2^(A+1)
// emits a good interval of level A and each first crossing of 2^(A-1) emits a
// bad interval of level A-1.  A descent to 2^(N0-1) drops back to the seeking
// phase.  Crossing times are linearly interpolated; a sample exactly on a
// watched level becomes a crossing only once the trace strictly leaves the
// level at the next differing sample.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/grid.hpp"

namespace ksipm {

struct ClassifierConfig {
    int N0 = 4;
    std::optional<double> c1 = std::nullopt;  // ledger coefficient for good intervals
    std::optional<double> C1 = std::nullopt;  // ledger coefficient for bad intervals
};

enum class IntervalKind { good, bad };

struct Interval {
    int level = 0;
    IntervalKind kind = IntervalKind::good;
    double t_start = 0.0, t_end = 0.0;
    double l2_start = 0.0, l2_end = 0.0;
    double length() const { return t_end - t_start; }
};

class IntervalClassifier {
  public:
    explicit IntervalClassifier(const ClassifierConfig& cfg);

    // Feed one (t, l2sq) sample; returns intervals completed by this sample.
    std::vector<Interval> ingest(double t, double l2sq);

    // End of trace: a pending exact touch resolves as a crossing (the level
    // was attained), possibly completing a final interval.
    std::vector<Interval> finish();

    const std::vector<Interval>& intervals() const { return intervals_; }
    // Exponent of the level the anchor currently sits at, if the trace has
    // entered the partition (seeking-anchored reports N0).
    std::optional<int> anchor_exponent() const;
    int n0() const { return cfg_.N0; }

  private:
    enum class Mode { seeking, running };

    ClassifierConfig cfg_;
    Mode mode_ = Mode::seeking;
    bool anchored_ = false;
    int level_exp_ = 0;     // anchor exponent while running
    double anchor_t_ = 0.0;
    bool have_prev_ = false;
    double prev_t_ = 0.0, prev_y_ = 0.0;
    std::optional<std::pair<double, double>> pending_;  // (level value, touch time)
    std::vector<Interval> intervals_;

    void handle_crossing(double level, double tc, std::vector<Interval>& out);
    std::vector<double> watched_levels() const;
};

struct LevelCount {
    int level = 0;
    int goods = 0;
    int bads = 0;
    double min_good_length = 0.0;
};

struct Summary {
    std::vector<LevelCount> per_level;       // sorted by level
    bool intertwining_ok = true;
    int checked_from = 0, checked_to = -1;   // levels subjected to the count test
};

// final_anchor_exp: classifier anchor exponent at end of trace (if any).
// Levels N0 <= N <= final_anchor_exp-1 must satisfy goods = bads + 1 and
// same-level intervals must alternate starting (and for checked levels,
// ending) with good.
Summary summarize(const std::vector<Interval>& intervals, int n0,
                  std::optional<int> final_anchor_exp);

struct BudgetLedger {
    double cumulative_drop = 0.0;  // sum of -c1 g / N and +C1 2^{-N/3}
    std::vector<std::pair<int, double>> per_level;  // level -> summed contribution
    double cap = 0.0;              // pi * mass budget
    bool within_cap = true;        // |drop| stays below cap when drop < 0
};

BudgetLedger budget_ledger(const std::vector<Interval>& intervals, double g,
                           const ClassifierConfig& cfg, double mass);

}  // namespace ksipm
