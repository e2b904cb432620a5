#include "bellstat/counts.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace bellstat {

namespace {

constexpr std::array<std::string_view, 11> kColumns = {
    "block_id", "a_setting", "b_setting", "n_oo", "n_oe", "n_eo",
    "n_ee",     "n_ou",      "n_uo",      "s_a",  "s_b"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::int64_t parse_int(std::string_view field, std::size_t line, const char* column) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, std::string("cannot parse ") + column + " from '" +
                               std::string(field) + "'");
  }
  return value;
}

std::optional<std::int64_t> parse_opt_int(std::string_view field, std::size_t line,
                                          const char* column) {
  if (field.empty()) return std::nullopt;
  return parse_int(field, line, column);
}

double parse_double(std::string_view field, std::size_t line, const char* column) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, std::string("cannot parse ") + column + " from '" +
                               std::string(field) + "'");
  }
  return value;
}

int parse_setting(std::string_view field, char expected_prefix, std::size_t line) {
  if (field.size() == 2 && field[0] == expected_prefix && (field[1] == '1' || field[1] == '2')) {
    return field[1] - '0';
  }
  throw ParseError(line, std::string("setting must be ") + expected_prefix + "1 or " +
                             expected_prefix + "2, got '" + std::string(field) + "'");
}

struct PendingBlock {
  std::size_t order = 0;
  std::array<std::optional<SettingPairCounts>, 4> runs;
};

}  // namespace

std::string_view to_string(SettingPair p) {
  switch (p) {
    case SettingPair::a1b1: return "a1b1";
    case SettingPair::a1b2: return "a1b2";
    case SettingPair::a2b1: return "a2b1";
    case SettingPair::a2b2: return "a2b2";
  }
  return "a1b1";
}

std::optional<SettingPair> setting_pair_from_string(std::string_view s) {
  for (SettingPair p : kSettingPairs) {
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

void validate_label(const SettingLabel& label) {
  if (label.index != 1 && label.index != 2) {
    throw ValidationError("setting index must be 1 or 2");
  }
  if (label.angle && !std::isfinite(*label.angle)) {
    throw ValidationError("setting angle must be finite");
  }
}

ExperimentSeries parse_series(std::istream& in, std::vector<std::string>* warnings) {
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  bool have_duration = false;

  std::vector<std::int64_t> block_order;
  std::unordered_map<std::int64_t, PendingBlock> pending;
  std::optional<double> first_duration;
  bool duration_constant = true;
  std::size_t duration_warn_line = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view stripped = trim(raw);
    if (stripped.empty() || stripped.front() == '#') continue;

    const auto fields = split_csv(stripped);

    if (!have_header) {
      const bool plain = fields.size() == kColumns.size();
      const bool with_duration =
          fields.size() == kColumns.size() + 1 && fields.back() == "duration";
      if (!plain && !with_duration) {
        throw ParseError(line_no, "header must be 'block_id,a_setting,b_setting,n_oo,n_oe,"
                                  "n_eo,n_ee,n_ou,n_uo,s_a,s_b' (optionally + ',duration')");
      }
      for (std::size_t i = 0; i < kColumns.size(); ++i) {
        if (fields[i] != kColumns[i]) {
          throw ParseError(line_no, "unexpected header column '" + std::string(fields[i]) +
                                        "', expected '" + std::string(kColumns[i]) + "'");
        }
      }
      have_header = true;
      have_duration = with_duration;
      continue;
    }

    const std::size_t expected = kColumns.size() + (have_duration ? 1 : 0);
    if (fields.size() != expected) {
      throw ParseError(line_no, "expected " + std::to_string(expected) + " fields, got " +
                                    std::to_string(fields.size()));
    }

    const std::int64_t block_id = parse_int(fields[0], line_no, "block_id");
    const int ai = parse_setting(fields[1], 'a', line_no);
    const int bi = parse_setting(fields[2], 'b', line_no);
    const SettingPair pair = setting_pair(ai, bi);

    SettingPairCounts run;
    run.a_label = SettingLabel{Side::a, ai, {}};
    run.b_label = SettingLabel{Side::b, bi, {}};
    run.n_oo = parse_int(fields[3], line_no, "n_oo");
    run.n_oe = parse_opt_int(fields[4], line_no, "n_oe");
    run.n_eo = parse_opt_int(fields[5], line_no, "n_eo");
    run.n_ee = parse_opt_int(fields[6], line_no, "n_ee");
    run.n_ou = parse_opt_int(fields[7], line_no, "n_ou");
    run.n_uo = parse_opt_int(fields[8], line_no, "n_uo");
    run.s_a = parse_int(fields[9], line_no, "s_a");
    run.s_b = parse_int(fields[10], line_no, "s_b");

    if (have_duration) {
      const double duration = parse_double(fields[11], line_no, "duration");
      if (!first_duration) {
        first_duration = duration;
      } else if (duration != *first_duration && duration_constant) {
        duration_constant = false;
        duration_warn_line = line_no;
      }
    }

    try {
      validate_run(run);
    } catch (const ConsistencyError& e) {
      throw ConsistencyError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }

    auto [it, inserted] = pending.try_emplace(block_id);
    if (inserted) {
      it->second.order = block_order.size();
      block_order.push_back(block_id);
    }
    auto& slot = it->second.runs[static_cast<std::size_t>(pair)];
    if (slot) {
      throw StructuralError("line " + std::to_string(line_no) + ": duplicate run for block " +
                            std::to_string(block_id) + " pair " + std::string(to_string(pair)));
    }
    slot = std::move(run);
  }

  if (!have_header) throw ParseError(line_no, "missing header");
  if (block_order.empty()) throw StructuralError("series must contain at least one block");

  if (warnings && have_duration && !duration_constant) {
    warnings->push_back("line " + std::to_string(duration_warn_line) +
                        ": duration column is not constant across runs; block statistics "
                        "assume comparable block intensities");
  }

  ExperimentSeries series;
  series.blocks.reserve(block_order.size());
  for (const std::int64_t id : block_order) {
    const auto& partial = pending.at(id);
    BlockRecord block;
    block.block_id = id;
    for (SettingPair p : kSettingPairs) {
      const auto& slot = partial.runs[static_cast<std::size_t>(p)];
      if (!slot) {
        throw StructuralError("block " + std::to_string(id) + " is missing setting pair " +
                              std::string(to_string(p)));
      }
      block.run(p) = *slot;
    }
    series.blocks.push_back(std::move(block));
  }

  validate_series(series);
  return series;
}

ExperimentSeries parse_series_file(const std::filesystem::path& path,
                                   std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path.string() + "'");
  }
  return parse_series(in, warnings);
}

void serialize_series(const ExperimentSeries& series, std::ostream& out) {
  out << "block_id,a_setting,b_setting,n_oo,n_oe,n_eo,n_ee,n_ou,n_uo,s_a,s_b\n";
  const auto opt = [](const std::optional<std::int64_t>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  for (const auto& block : series.blocks) {
    for (SettingPair p : kSettingPairs) {
      const auto& run = block.run(p);
      out << block.block_id << ",a" << run.a_label.index << ",b" << run.b_label.index << ','
          << run.n_oo << ',' << opt(run.n_oe) << ',' << opt(run.n_eo) << ',' << opt(run.n_ee)
          << ',' << opt(run.n_ou) << ',' << opt(run.n_uo) << ',' << run.s_a << ',' << run.s_b
          << '\n';
    }
  }
}

std::string serialize_series(const ExperimentSeries& series) {
  std::ostringstream out;
  serialize_series(series, out);
  return out.str();
}

}  // namespace bellstat
