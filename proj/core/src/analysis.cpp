#include "bellstat/analysis.hpp"

#include <sstream>

#include "bellstat/json_writer.hpp"

namespace bellstat {

namespace {

StatSection make_stat_section(std::span<const double> values, double level, double threshold,
                              Direction direction) {
  StatSection section;
  section.stats = block_stats(values);
  section.threshold = threshold;
  section.direction = direction;
  if (section.stats.se > 0.0) {
    section.sigma_violation = sigma_violation(section.stats, threshold, direction);
    section.interval = chebyshev_interval(section.stats, level);
    if (*section.sigma_violation > 0.0) {
      section.min_confidence = min_confidence_for_violation(section.stats, threshold, direction);
    }
  }
  return section;
}

template <typename Num>
void fill_entries(const ExperimentSeriesT<Num>& series, SinglesRule rule, bool normalized,
                  std::vector<BlockEntry>* entries, std::vector<double>* j_values,
                  std::vector<double>* t_values, bool* consistent) {
  for (const auto& block : series.blocks) {
    const EquivalenceReport eq = equivalence_check(block, rule);
    *consistent = *consistent && eq.consistent;
    entries->push_back(BlockEntry{block.block_id, eq.j, eq.t, normalized});
    j_values->push_back(eq.j.j);
    if (eq.t) t_values->push_back(eq.t->t);
  }
}

template <typename Num>
TSection make_t_section(const ExperimentSeriesT<Num>& series, std::span<const double> t_values,
                        SinglesRule rule, double level) {
  TSection section;
  section.defined_blocks = static_cast<std::int64_t>(t_values.size());
  section.partial = section.defined_blocks < series.length();
  if (section.defined_blocks >= 2) {
    section.stats = make_stat_section(t_values, level, 1.0, Direction::above);
  }
  try {
    section.aggregate = ratio_T(aggregate(series), rule);
  } catch (const UndefinedRatioError&) {
    section.aggregate = std::nullopt;
  }
  return section;
}

void write_stat_section(JsonWriter& w, const StatSection& section) {
  w.begin_object();
  w.key("l").value(section.stats.l);
  w.key("mean").value(section.stats.mean);
  w.key("sample_std").value(section.stats.sample_std);
  w.key("se").value(section.stats.se);
  if (section.sigma_violation) {
    w.key("sigma_violation").value(*section.sigma_violation);
  } else {
    w.key("sigma_violation").null();
  }
  w.key("chebyshev");
  if (section.interval) {
    w.begin_object();
    w.key("level").value(section.interval->level);
    w.key("k").value(section.interval->k);
    w.key("c").value(section.interval->c);
    w.key("lo").value(section.interval->lo);
    w.key("hi").value(section.interval->hi);
    w.end_object();
  } else {
    w.null();
  }
  w.end_object();
}

void write_entries(JsonWriter& w, const std::vector<BlockEntry>& entries) {
  w.begin_array();
  for (const BlockEntry& entry : entries) {
    w.begin_object();
    w.key("block_id").value(entry.block_id);
    w.key("j_pair").value(entry.j.j_pair);
    w.key("j_single").value(entry.j.j_single);
    w.key("j").value(entry.j.j);
    if (entry.t) {
      w.key("t_numerator").value(entry.t->numerator);
      w.key("t_denominator").value(entry.t->denominator);
      w.key("t").value(entry.t->t);
    } else {
      w.key("t_numerator").null();
      w.key("t_denominator").null();
      w.key("t").null();
    }
    w.key("normalized").value(entry.normalized);
    w.end_object();
  }
  w.end_array();
}

void write_t_section(JsonWriter& w, const TSection& section) {
  w.begin_object();
  w.key("threshold").value(1.0);
  w.key("direction").value("above");
  w.key("defined_blocks").value(section.defined_blocks);
  w.key("partial").value(section.partial);
  w.key("stats");
  if (section.stats) {
    write_stat_section(w, *section.stats);
  } else {
    w.null();
  }
  w.key("aggregate");
  if (section.aggregate) {
    w.begin_object();
    w.key("t_numerator").value(section.aggregate->numerator);
    w.key("t_denominator").value(section.aggregate->denominator);
    w.key("t").value(section.aggregate->t);
    w.end_object();
  } else {
    w.null();
  }
  w.end_object();
}

void print_stat_section(std::ostringstream& out, const StatSection& section,
                        const char* violated_when) {
  const auto& s = section.stats;
  out << "  blocks " << s.l << "  mean " << format_g17(s.mean) << "  sample_std "
      << format_g17(s.sample_std) << "  se " << format_g17(s.se) << '\n';
  if (section.sigma_violation) {
    out << "  sigma violation (" << violated_when << "): " << format_g17(*section.sigma_violation);
    if (section.min_confidence) {
      out << "  (min confidence " << format_g17(*section.min_confidence) << ")";
    }
    out << '\n';
  } else {
    out << "  sigma violation: degenerate (zero spread)\n";
  }
  if (section.interval) {
    out << "  Chebyshev " << format_g17(section.interval->level) << ": c "
        << format_g17(section.interval->c) << "  interval [" << format_g17(section.interval->lo)
        << ", " << format_g17(section.interval->hi) << "]\n";
  } else {
    out << "  Chebyshev interval: degenerate (zero spread)\n";
  }
}

void print_t_section(std::ostringstream& out, const TSection& section, std::int64_t l) {
  out << "  defined in " << section.defined_blocks << "/" << l << " blocks"
      << (section.partial ? " (partial)" : "") << '\n';
  if (section.stats) {
    print_stat_section(out, *section.stats, "above 1");
  } else {
    out << "  per-block statistics: undefined (fewer than 2 defined blocks)\n";
  }
  if (section.aggregate) {
    out << "  aggregate-then-ratio: T " << format_g17(section.aggregate->t) << " ("
        << format_g17(section.aggregate->numerator) << " / "
        << format_g17(section.aggregate->denominator) << ")\n";
  } else {
    out << "  aggregate-then-ratio: undefined (zero denominator)\n";
  }
}

constexpr const char* kDriftNote =
    "intensity drift normalization assumes runs sharing a setting share that side's "
    "per-pair singles rate; scale factors are derived per block from opposite-side singles";

}  // namespace

AnalysisReport analyze_series(const ExperimentSeries& series, const AnalysisOptions& options) {
  if (!(options.level > 0.0) || !(options.level < 1.0)) {
    throw DomainError("confidence level must lie in (0,1)");
  }
  validate_series(series);

  AnalysisReport report;
  report.l = series.length();
  report.level = options.level;
  report.singles_rule = options.singles_rule;

  std::vector<double> j_values;
  std::vector<double> t_values;
  fill_entries(series, options.singles_rule, false, &report.blocks, &j_values, &t_values,
               &report.equivalence_consistent);

  report.j = make_stat_section(j_values, options.level, 0.0, Direction::below);
  report.t = make_t_section(series, t_values, options.singles_rule, options.level);

  if (options.drift) {
    const NormalizedSeries normalized = drift_normalize(series, options.drift_reference);
    report.drift_reference = options.drift_reference;
    report.drift_note = kDriftNote;
    std::vector<double> jn_values;
    std::vector<double> tn_values;
    bool drift_consistent = true;
    fill_entries(normalized, options.singles_rule, true, &report.drift_blocks, &jn_values,
                 &tn_values, &drift_consistent);
    report.equivalence_consistent = report.equivalence_consistent && drift_consistent;
    report.t_drift = make_t_section(normalized, tn_values, options.singles_rule, options.level);
  }

  return report;
}

std::string render_json(const AnalysisReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("l").value(report.l);
  w.key("level").value(report.level);
  w.key("singles_rule").value(to_string(report.singles_rule));
  w.key("blocks");
  write_entries(w, report.blocks);
  w.key("j");
  w.begin_object();
  w.key("threshold").value(0.0);
  w.key("direction").value("below");
  w.key("stats");
  write_stat_section(w, report.j);
  if (report.j.min_confidence) {
    w.key("min_confidence").value(*report.j.min_confidence);
  } else {
    w.key("min_confidence").null();
  }
  w.end_object();
  w.key("t");
  write_t_section(w, report.t);
  w.key("drift");
  if (report.t_drift) {
    w.begin_object();
    w.key("reference").value(to_string(*report.drift_reference));
    w.key("note").value(report.drift_note);
    w.key("blocks");
    write_entries(w, report.drift_blocks);
    w.key("t");
    write_t_section(w, *report.t_drift);
    w.end_object();
  } else {
    w.null();
  }
  w.key("equivalence_consistent").value(report.equivalence_consistent);
  w.end_object();
  return w.str();
}

std::string render_text(const AnalysisReport& report) {
  std::ostringstream out;
  out << "bellstat analyze: L " << report.l << "  level " << format_g17(report.level)
      << "  singles rule " << to_string(report.singles_rule) << '\n';
  out << "J statistic (local realism predicts J >= 0):\n";
  print_stat_section(out, report.j, "below 0");
  out << "T statistic (local realism predicts T <= 1):\n";
  print_t_section(out, report.t, report.l);
  if (report.t_drift) {
    out << "Drift-normalized T' (reference " << to_string(*report.drift_reference) << "):\n";
    print_t_section(out, *report.t_drift, report.l);
    out << "  note: " << report.drift_note << '\n';
  }
  out << "Equivalence self-check (J >= 0 <=> T <= 1): "
      << (report.equivalence_consistent ? "consistent" : "INCONSISTENT") << '\n';
  return out.str();
}

}  // namespace bellstat
