#pragma once
// Count data model for two-channel Bell-type coincidence experiments.
//
// A run is one (a_i, b_j) analyzer-setting combination: coincidence tallies
// over the outcomes o (ordinary beam), e (extraordinary beam) and
// u (undetected), plus the per-side single counts in the o channels.  A block
// is the four runs of one recording interval; a series is L blocks.
//
// Singles are stored per run, for every run.  Experiments that only record
// singles per setting can replicate the value into both runs of that setting;
// the inequality operations select which run's singles they use via
// SinglesRule (see inequalities.hpp).
//
// CSV schema (header required, '#' comment lines ignored, UTF-8):
//   block_id,a_setting,b_setting,n_oo,n_oe,n_eo,n_ee,n_ou,n_uo,s_a,s_b
// with a_setting in {a1,a2} and b_setting in {b1,b2}.  The four-detector
// columns are blank for two-detector recordings.  An extra trailing
// `duration` column is tolerated; a warning is emitted when it is not
// constant.  Serialization is bit-exact re-readable.
//
// All types are plain values, immutable by convention after validation, and
// every operation here is pure; sharing across threads is safe.

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "bellstat/errors.hpp"

namespace bellstat {

enum class Side { a, b };

// One analyzer setting: which side, which of the two settings, and (when the
// geometry is known, e.g. for simulated data) the analyzer angle in radians.
struct SettingLabel {
  Side side{Side::a};
  int index{1};  // 1 or 2
  std::optional<double> angle{};

  bool operator==(const SettingLabel&) const = default;
};

enum class SettingPair : int { a1b1 = 0, a1b2 = 1, a2b1 = 2, a2b2 = 3 };

inline constexpr std::array<SettingPair, 4> kSettingPairs = {
    SettingPair::a1b1, SettingPair::a1b2, SettingPair::a2b1, SettingPair::a2b2};

constexpr int a_index(SettingPair p) { return static_cast<int>(p) < 2 ? 1 : 2; }
constexpr int b_index(SettingPair p) { return static_cast<int>(p) % 2 == 0 ? 1 : 2; }

constexpr SettingPair setting_pair(int a_idx, int b_idx) {
  return static_cast<SettingPair>((a_idx - 1) * 2 + (b_idx - 1));
}

std::string_view to_string(SettingPair p);
std::optional<SettingPair> setting_pair_from_string(std::string_view s);

// Counts of one run.  Num is std::int64_t for raw data and double for
// drift-normalized data.  n_ue, n_eu and n_uu are carried for completeness
// but have no CSV column (they do not enter any statistic computed here).
template <typename Num>
struct SettingPairCountsT {
  SettingLabel a_label{Side::a, 1, {}};
  SettingLabel b_label{Side::b, 1, {}};
  Num n_oo{};
  std::optional<Num> n_oe{}, n_eo{}, n_ee{}, n_ou{}, n_uo{};
  std::optional<Num> n_ue{}, n_eu{}, n_uu{};
  Num s_a{};
  Num s_b{};

  // True when the table entries needed by four-detector statistics and the
  // singles decomposition are all present.
  bool has_four_detector() const {
    return n_oe.has_value() && n_eo.has_value() && n_ee.has_value() &&
           n_ou.has_value() && n_uo.has_value();
  }

  bool operator==(const SettingPairCountsT&) const = default;
};

using SettingPairCounts = SettingPairCountsT<std::int64_t>;
using NormalizedRun = SettingPairCountsT<double>;

inline constexpr std::int64_t kAggregateBlockId = -1;

// Four runs, one per setting pair, indexed by SettingPair.
template <typename Num>
struct BlockRecordT {
  std::int64_t block_id{0};
  std::array<SettingPairCountsT<Num>, 4> runs{};

  SettingPairCountsT<Num>& run(SettingPair p) { return runs[static_cast<std::size_t>(p)]; }
  const SettingPairCountsT<Num>& run(SettingPair p) const {
    return runs[static_cast<std::size_t>(p)];
  }

  bool operator==(const BlockRecordT&) const = default;
};

using BlockRecord = BlockRecordT<std::int64_t>;
using NormalizedBlock = BlockRecordT<double>;

template <typename Num>
struct ExperimentSeriesT {
  std::vector<BlockRecordT<Num>> blocks;

  std::int64_t length() const { return static_cast<std::int64_t>(blocks.size()); }

  bool operator==(const ExperimentSeriesT&) const = default;
};

using ExperimentSeries = ExperimentSeriesT<std::int64_t>;
using NormalizedSeries = ExperimentSeriesT<double>;

namespace detail {

template <typename Num>
bool count_ok(Num v) {
  if constexpr (std::is_floating_point_v<Num>) {
    return std::isfinite(v) && v >= Num{0};
  } else {
    return v >= Num{0};
  }
}

// Integer records must satisfy the decomposition exactly; normalized records
// only up to scaling round-off.
template <typename Num>
bool sum_matches(Num singles, Num total) {
  if constexpr (std::is_floating_point_v<Num>) {
    const Num scale = std::max(Num{1}, std::abs(total));
    return std::abs(singles - total) <= Num{1e-9} * scale;
  } else {
    return singles == total;
  }
}

template <typename Num>
bool at_least(Num lhs, Num rhs) {  // lhs >= rhs, with slack for normalized data
  if constexpr (std::is_floating_point_v<Num>) {
    return lhs >= rhs - Num{1e-9} * std::max(Num{1}, std::abs(rhs));
  } else {
    return lhs >= rhs;
  }
}

}  // namespace detail

void validate_label(const SettingLabel& label);

template <typename Num>
void validate_run(const SettingPairCountsT<Num>& run) {
  validate_label(run.a_label);
  validate_label(run.b_label);
  if (run.a_label.side != Side::a || run.b_label.side != Side::b) {
    throw ValidationError("run labels must be an A-side and a B-side setting");
  }

  const auto check = [](const char* name, const std::optional<Num>& v) {
    if (v && !detail::count_ok(*v)) {
      throw ValidationError(std::string(name) + " must be a nonnegative count");
    }
  };
  if (!detail::count_ok(run.n_oo)) throw ValidationError("n_oo must be a nonnegative count");
  if (!detail::count_ok(run.s_a)) throw ValidationError("s_a must be a nonnegative count");
  if (!detail::count_ok(run.s_b)) throw ValidationError("s_b must be a nonnegative count");
  check("n_oe", run.n_oe);
  check("n_eo", run.n_eo);
  check("n_ee", run.n_ee);
  check("n_ou", run.n_ou);
  check("n_uo", run.n_uo);
  check("n_ue", run.n_ue);
  check("n_eu", run.n_eu);
  check("n_uu", run.n_uu);

  // A coincidence in the o channels implies an o single on each side.
  if (!detail::at_least(run.s_a, run.n_oo)) {
    throw ConsistencyError("s_a < n_oo: singles cannot be below coincidences");
  }
  if (!detail::at_least(run.s_b, run.n_oo)) {
    throw ConsistencyError("s_b < n_oo: singles cannot be below coincidences");
  }
  // Singles decomposition of the four-detector table.
  if (run.n_oe && run.n_ou && !detail::sum_matches(run.s_a, Num(run.n_oo + *run.n_oe + *run.n_ou))) {
    throw ConsistencyError("s_a != n_oo + n_oe + n_ou");
  }
  if (run.n_eo && run.n_uo && !detail::sum_matches(run.s_b, Num(run.n_oo + *run.n_eo + *run.n_uo))) {
    throw ConsistencyError("s_b != n_oo + n_eo + n_uo");
  }
}

template <typename Num>
void validate_block(const BlockRecordT<Num>& block) {
  for (SettingPair p : kSettingPairs) {
    const auto& run = block.run(p);
    validate_run(run);
    if (run.a_label.index != a_index(p) || run.b_label.index != b_index(p)) {
      throw StructuralError("run stored under the wrong setting pair slot");
    }
  }
  // Runs sharing a setting must agree on that setting's angle.
  const auto angle_of_a = [&](SettingPair p) { return block.run(p).a_label.angle; };
  const auto angle_of_b = [&](SettingPair p) { return block.run(p).b_label.angle; };
  if (angle_of_a(SettingPair::a1b1) != angle_of_a(SettingPair::a1b2) ||
      angle_of_a(SettingPair::a2b1) != angle_of_a(SettingPair::a2b2) ||
      angle_of_b(SettingPair::a1b1) != angle_of_b(SettingPair::a2b1) ||
      angle_of_b(SettingPair::a1b2) != angle_of_b(SettingPair::a2b2)) {
    throw StructuralError("runs sharing a setting disagree on its angle");
  }
}

template <typename Num>
void validate_series(const ExperimentSeriesT<Num>& series) {
  if (series.blocks.empty()) {
    throw StructuralError("series must contain at least one block");
  }
  for (const auto& block : series.blocks) validate_block(block);
  const auto& first = series.blocks.front();
  for (const auto& block : series.blocks) {
    for (SettingPair p : kSettingPairs) {
      if (block.run(p).a_label != first.run(p).a_label ||
          block.run(p).b_label != first.run(p).b_label) {
        throw StructuralError("blocks do not share the same four setting pairs");
      }
    }
  }
}

// Component-wise sum of all blocks; optional counts survive only when present
// in every block.  The result carries kAggregateBlockId.
template <typename Num>
BlockRecordT<Num> aggregate(const ExperimentSeriesT<Num>& series) {
  validate_series(series);
  BlockRecordT<Num> total;
  total.block_id = kAggregateBlockId;
  for (SettingPair p : kSettingPairs) {
    auto& out = total.run(p);
    out.a_label = series.blocks.front().run(p).a_label;
    out.b_label = series.blocks.front().run(p).b_label;
    const auto add_opt = [](std::optional<Num>& acc, const std::optional<Num>& v, bool first) {
      if (first) {
        acc = v;
      } else if (acc && v) {
        *acc += *v;
      } else {
        acc.reset();
      }
    };
    bool first = true;
    for (const auto& block : series.blocks) {
      const auto& run = block.run(p);
      if (first) {
        out.n_oo = run.n_oo;
        out.s_a = run.s_a;
        out.s_b = run.s_b;
      } else {
        out.n_oo += run.n_oo;
        out.s_a += run.s_a;
        out.s_b += run.s_b;
      }
      add_opt(out.n_oe, run.n_oe, first);
      add_opt(out.n_eo, run.n_eo, first);
      add_opt(out.n_ee, run.n_ee, first);
      add_opt(out.n_ou, run.n_ou, first);
      add_opt(out.n_uo, run.n_uo, first);
      add_opt(out.n_ue, run.n_ue, first);
      add_opt(out.n_eu, run.n_eu, first);
      add_opt(out.n_uu, run.n_uu, first);
      first = false;
    }
  }
  return total;
}

// Parses the CSV schema above.  Throws ParseError (with line number),
// ValidationError, ConsistencyError or StructuralError.  Non-fatal findings
// (non-constant duration column) are appended to *warnings when given.
ExperimentSeries parse_series(std::istream& in, std::vector<std::string>* warnings = nullptr);
ExperimentSeries parse_series_file(const std::filesystem::path& path,
                                   std::vector<std::string>* warnings = nullptr);

void serialize_series(const ExperimentSeries& series, std::ostream& out);
std::string serialize_series(const ExperimentSeries& series);

}  // namespace bellstat
