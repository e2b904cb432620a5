#pragma once
// The Eberhard linear statistic J, the Clauser-Horne ratio statistic T, and
// the drift normalization connecting them.
//
// For a block with runs at the four setting pairs,
//
//   j_pair   = n_oo(a1,b1) + n_oo(a1,b2) + n_oo(a2,b1) - n_oo(a2,b2)
//   j_single = S_A(a1) + S_B(b1)
//   J        = j_single - j_pair          (local realism: J >= 0)
//   T        = j_pair / j_single          (local realism: T <= 1)
//
// so J = j_single * (1 - T) whenever j_single > 0: the two tests are
// algebraically equivalent but behave differently as statistics (J is total,
// T fails on a zero denominator and is scale invariant).
//
// Which runs supply S_A(a1) and S_B(b1) is configurable.  The default,
// SinglesRule::eq3_runs, takes S_A from the (a1,b2) run and S_B from the
// (a2,b1) run; with that choice the two-detector J equals the four-detector
// form n_oe(a1,b2) + n_ou(a1,b2) + n_eo(a2,b1) + n_uo(a2,b1) + n_oo(a2,b2)
// - n_oo(a1,b1) identically whenever the singles decomposition holds.
//
// All functions are pure and accept integer (raw) or double (drift
// normalized) records.

#include <optional>
#include <string>

#include "bellstat/counts.hpp"
#include "bellstat/errors.hpp"

namespace bellstat {

// Which runs' singles enter S_A(a1) and S_B(b1).
enum class SinglesRule {
  eq3_runs,        // S_A from the (a1,b2) run, S_B from the (a2,b1) run (default)
  first_pair_run,  // both from the (a1,b1) run
  average,         // average over both runs of the respective setting
};

std::string_view to_string(SinglesRule rule);
std::optional<SinglesRule> singles_rule_from_string(std::string_view s);

struct JValue {
  double j_pair{0.0};
  double j_single{0.0};
  double j{0.0};  // j_single - j_pair, maintained by construction
};

inline JValue make_j_value(double j_pair, double j_single) {
  return JValue{j_pair, j_single, j_single - j_pair};
}

struct TValue {
  double numerator{0.0};
  double denominator{0.0};  // > 0
  double t{0.0};
};

// Probabilities per emitted pair for the four coincidences plus the two
// singles marginals entering the probability form of the CH test.
struct ProbabilityQuad {
  double p11{0.0}, p12{0.0}, p21{0.0}, p22{0.0};
  double pA{0.0}, pB{0.0};
};

void validate_quad(const ProbabilityQuad& q);

// (p11 + p12 + p21 - p22) - (pA + pB); local realism predicts <= 0.
double ch_probability_margin(const ProbabilityQuad& q);

struct FourDetectorJ {
  double j{0.0};      // evaluated from the four-detector outcome table
  JValue reduced{};   // two-detector form, for cross-checking
};

struct EquivalenceReport {
  JValue j{};
  std::optional<TValue> t{};  // absent when the singles denominator is zero
  bool consistent{true};
};

namespace detail {

template <typename Num>
double singles_a1(const BlockRecordT<Num>& rec, SinglesRule rule) {
  switch (rule) {
    case SinglesRule::eq3_runs:
      return static_cast<double>(rec.run(SettingPair::a1b2).s_a);
    case SinglesRule::first_pair_run:
      return static_cast<double>(rec.run(SettingPair::a1b1).s_a);
    case SinglesRule::average:
      return 0.5 * (static_cast<double>(rec.run(SettingPair::a1b1).s_a) +
                    static_cast<double>(rec.run(SettingPair::a1b2).s_a));
  }
  return 0.0;
}

template <typename Num>
double singles_b1(const BlockRecordT<Num>& rec, SinglesRule rule) {
  switch (rule) {
    case SinglesRule::eq3_runs:
      return static_cast<double>(rec.run(SettingPair::a2b1).s_b);
    case SinglesRule::first_pair_run:
      return static_cast<double>(rec.run(SettingPair::a1b1).s_b);
    case SinglesRule::average:
      return 0.5 * (static_cast<double>(rec.run(SettingPair::a1b1).s_b) +
                    static_cast<double>(rec.run(SettingPair::a2b1).s_b));
  }
  return 0.0;
}

template <typename Num>
double pair_sum(const BlockRecordT<Num>& rec) {
  return static_cast<double>(rec.run(SettingPair::a1b1).n_oo) +
         static_cast<double>(rec.run(SettingPair::a1b2).n_oo) +
         static_cast<double>(rec.run(SettingPair::a2b1).n_oo) -
         static_cast<double>(rec.run(SettingPair::a2b2).n_oo);
}

}  // namespace detail

template <typename Num>
JValue eberhard_j(const BlockRecordT<Num>& rec, SinglesRule rule = SinglesRule::eq3_runs) {
  return make_j_value(detail::pair_sum(rec),
                      detail::singles_a1(rec, rule) + detail::singles_b1(rec, rule));
}

// Four-detector evaluation; requires the outcome-table entries it consumes.
template <typename Num>
FourDetectorJ eberhard_j_four(const BlockRecordT<Num>& rec) {
  const auto& r12 = rec.run(SettingPair::a1b2);
  const auto& r21 = rec.run(SettingPair::a2b1);
  if (!r12.n_oe || !r12.n_ou || !r21.n_eo || !r21.n_uo) {
    throw CapabilityError("four-detector J needs n_oe/n_ou of the (a1,b2) run and "
                          "n_eo/n_uo of the (a2,b1) run");
  }
  const double j = static_cast<double>(*r12.n_oe) + static_cast<double>(*r12.n_ou) +
                   static_cast<double>(*r21.n_eo) + static_cast<double>(*r21.n_uo) +
                   static_cast<double>(rec.run(SettingPair::a2b2).n_oo) -
                   static_cast<double>(rec.run(SettingPair::a1b1).n_oo);
  return FourDetectorJ{j, eberhard_j(rec, SinglesRule::eq3_runs)};
}

// Ratio statistic; same numerator as j_pair, singles sum as denominator.
template <typename Num>
TValue ratio_T(const BlockRecordT<Num>& rec, SinglesRule rule = SinglesRule::eq3_runs) {
  const double denominator = detail::singles_a1(rec, rule) + detail::singles_b1(rec, rule);
  if (!(denominator > 0.0)) {
    throw UndefinedRatioError("ratio statistic undefined: singles denominator is zero");
  }
  const double numerator = detail::pair_sum(rec);
  return TValue{numerator, denominator, numerator / denominator};
}

// Runtime self-check of the algebraic equivalence J >= 0 <=> T <= 1.
template <typename Num>
EquivalenceReport equivalence_check(const BlockRecordT<Num>& rec,
                                    SinglesRule rule = SinglesRule::eq3_runs) {
  EquivalenceReport report;
  report.j = eberhard_j(rec, rule);
  const double denominator = detail::singles_a1(rec, rule) + detail::singles_b1(rec, rule);
  if (denominator > 0.0) {
    report.t = ratio_T(rec, rule);
    report.consistent = (report.j.j >= 0.0) == (report.t->t <= 1.0);
  } else {
    report.t = std::nullopt;
    report.consistent = true;
  }
  return report;
}

// Rescales every run so that its estimated emitted-pair intensity matches the
// reference run's.  Intensities of two runs are compared through the singles
// of the side whose setting the runs share (that side's per-pair singles rate
// does not depend on the other side's setting); the run diagonal to the
// reference is chained through the intermediate run sharing its A setting.
// Per-block: scale factors are derived from each block's own singles.
//
// Requires positive proxy singles in every run involved; throws
// NormalizationError naming the offending run otherwise.  Idempotent up to
// floating-point round-off.
template <typename Num>
NormalizedSeries drift_normalize(const ExperimentSeriesT<Num>& series, SettingPair reference) {
  validate_series(series);
  NormalizedSeries out;
  out.blocks.reserve(series.blocks.size());

  for (const auto& block : series.blocks) {
    const auto proxy = [&](SettingPair p, Side side) -> double {
      const auto& run = block.run(p);
      const double value =
          side == Side::a ? static_cast<double>(run.s_a) : static_cast<double>(run.s_b);
      if (!(value > 0.0)) {
        throw NormalizationError("block " + std::to_string(block.block_id) + " run " +
                                 std::string(to_string(p)) + ": zero " +
                                 (side == Side::a ? "s_a" : "s_b") + " proxy singles");
      }
      return value;
    };

    const auto scale_for = [&](SettingPair p) -> double {
      if (p == reference) return 1.0;
      const bool same_a = a_index(p) == a_index(reference);
      const bool same_b = b_index(p) == b_index(reference);
      if (same_b) {
        // A setting differs: B-side singles proxy the intensity.
        return proxy(reference, Side::b) / proxy(p, Side::b);
      }
      if (same_a) {
        return proxy(reference, Side::a) / proxy(p, Side::a);
      }
      // Diagonal: chain through the run with this A setting and the
      // reference's B setting.
      const SettingPair mid = setting_pair(a_index(p), b_index(reference));
      return (proxy(reference, Side::b) / proxy(mid, Side::b)) *
             (proxy(mid, Side::a) / proxy(p, Side::a));
    };

    NormalizedBlock normalized;
    normalized.block_id = block.block_id;
    for (SettingPair p : kSettingPairs) {
      const double scale = scale_for(p);
      const auto& run = block.run(p);
      auto& dst = normalized.run(p);
      dst.a_label = run.a_label;
      dst.b_label = run.b_label;
      const auto scaled = [scale](const std::optional<Num>& v) -> std::optional<double> {
        if (!v) return std::nullopt;
        return scale * static_cast<double>(*v);
      };
      dst.n_oo = scale * static_cast<double>(run.n_oo);
      dst.n_oe = scaled(run.n_oe);
      dst.n_eo = scaled(run.n_eo);
      dst.n_ee = scaled(run.n_ee);
      dst.n_ou = scaled(run.n_ou);
      dst.n_uo = scaled(run.n_uo);
      dst.n_ue = scaled(run.n_ue);
      dst.n_eu = scaled(run.n_eu);
      dst.n_uu = scaled(run.n_uu);
      dst.s_a = scale * static_cast<double>(run.s_a);
      dst.s_b = scale * static_cast<double>(run.s_b);
    }
    out.blocks.push_back(std::move(normalized));
  }
  return out;
}

// JSON fragment with the report keys of this module; numbers carry 17
// significant digits.  `t` keys are null when the ratio is undefined.
std::string equivalence_report_json(const JValue& j, const std::optional<TValue>& t,
                                    bool normalized);

}  // namespace bellstat
