#pragma once
// Whole-series analysis: per-block J and T, block statistics, Chebyshev
// intervals and sigma counts for both statistics, the equivalence self-check,
// and (optionally) the drift-normalized T' section.

#include <optional>
#include <string>
#include <vector>

#include "bellstat/counts.hpp"
#include "bellstat/inequalities.hpp"
#include "bellstat/significance.hpp"

namespace bellstat {

struct AnalysisOptions {
  double level{0.9995};
  SinglesRule singles_rule{SinglesRule::eq3_runs};
  bool drift{false};
  SettingPair drift_reference{SettingPair::a1b1};
};

// Statistics plus significance for one test statistic.  The significance
// members are absent when the spread is zero (degenerate but reportable).
struct StatSection {
  BlockStatistics stats{};
  double threshold{0.0};
  Direction direction{Direction::below};
  std::optional<double> sigma_violation{};
  std::optional<double> min_confidence{};
  std::optional<ChebyshevInterval> interval{};
};

struct BlockEntry {
  std::int64_t block_id{0};
  JValue j{};
  std::optional<TValue> t{};  // absent where the denominator is zero
  bool normalized{false};
};

// Ratio-statistic section: per-block values (possibly partial), statistics
// over the defined blocks, and the pooled-counts ratio.
struct TSection {
  std::int64_t defined_blocks{0};
  bool partial{false};
  std::optional<StatSection> stats{};   // per-block-then-average order
  std::optional<TValue> aggregate{};    // aggregate-then-ratio order
};

struct AnalysisReport {
  std::int64_t l{0};
  double level{0.9995};
  SinglesRule singles_rule{SinglesRule::eq3_runs};
  std::vector<BlockEntry> blocks;
  StatSection j{};
  TSection t{};
  bool equivalence_consistent{true};
  // Drift section, present when requested.
  std::optional<SettingPair> drift_reference{};
  std::vector<BlockEntry> drift_blocks;
  std::optional<TSection> t_drift{};
  std::string drift_note;
};

// Requires L >= 2 (throws InsufficientDataError otherwise); drift requires
// positive proxy singles (NormalizationError).
AnalysisReport analyze_series(const ExperimentSeries& series, const AnalysisOptions& options);

std::string render_json(const AnalysisReport& report);
std::string render_text(const AnalysisReport& report);

}  // namespace bellstat
