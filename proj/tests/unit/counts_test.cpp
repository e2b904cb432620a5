#include <algorithm>
#include <random>
#include <sstream>

#include "bellstat/counts.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace bellstat;
using testsupport::block_from_noo;
using testsupport::random_series;

namespace {

const char* kHeader = "block_id,a_setting,b_setting,n_oo,n_oe,n_eo,n_ee,n_ou,n_uo,s_a,s_b\n";

std::string zero_block_csv() {
  std::string csv = kHeader;
  csv += "1,a1,b1,0,,,,,,0,0\n";
  csv += "1,a1,b2,0,,,,,,0,0\n";
  csv += "1,a2,b1,0,,,,,,0,0\n";
  csv += "1,a2,b2,0,,,,,,0,0\n";
  return csv;
}

ExperimentSeries parse_text(const std::string& text, std::vector<std::string>* warnings = nullptr) {
  std::istringstream in(text);
  return parse_series(in, warnings);
}

}  // namespace

TEST_SUITE("counts") {

TEST_CASE("parse: single all-zero block") {
  const ExperimentSeries series = parse_text(zero_block_csv());
  CHECK(series.length() == 1);
  for (SettingPair p : kSettingPairs) {
    const auto& run = series.blocks.front().run(p);
    CHECK(run.n_oo == 0);
    CHECK(run.s_a == 0);
    CHECK(run.s_b == 0);
    CHECK_FALSE(run.has_four_detector());
  }
}

TEST_CASE("parse: singles below coincidences is a consistency error") {
  std::string csv = kHeader;
  csv += "1,a1,b1,10,,,,,,8,12\n";
  csv += "1,a1,b2,0,,,,,,0,0\n";
  csv += "1,a2,b1,0,,,,,,0,0\n";
  csv += "1,a2,b2,0,,,,,,0,0\n";
  CHECK_THROWS_AS(parse_text(csv), ConsistencyError);
  try {
    parse_text(csv);
  } catch (const ConsistencyError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("parse: 30 blocks of 4 rows") {
  std::string csv = kHeader;
  for (int b = 1; b <= 30; ++b) {
    for (const char* pair : {"a1,b1", "a1,b2", "a2,b1", "a2,b2"}) {
      csv += std::to_string(b) + "," + pair + ",5,,,,,," + std::to_string(5 + b) + "," +
             std::to_string(6 + b) + "\n";
    }
  }
  const ExperimentSeries series = parse_text(csv);
  CHECK(series.length() == 30);
  CHECK(series.blocks.front().block_id == 1);
  CHECK(series.blocks.back().block_id == 30);
  CHECK(series.blocks.back().run(SettingPair::a2b2).s_a == 35);
}

TEST_CASE("parse(serialize(series)) round-trips") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    const ExperimentSeries series = random_series(rng);
    const std::string text = serialize_series(series);
    const ExperimentSeries back = parse_text(text);
    CHECK(back == series);
    // Serialization itself is stable.
    CHECK(serialize_series(back) == text);
  }
}

TEST_CASE("parse: comments, blank lines and CRLF are tolerated") {
  std::string csv = "# generated data\n\n";
  csv += "block_id,a_setting,b_setting,n_oo,n_oe,n_eo,n_ee,n_ou,n_uo,s_a,s_b\r\n";
  csv += "1,a1,b1,3,,,,,,4,5\r\n";
  csv += "# mid-file comment\n";
  csv += "1,a1,b2,0,,,,,,1,1\n";
  csv += "1,a2,b1,0,,,,,,1,1\n";
  csv += "1,a2,b2,0,,,,,,1,1\n";
  const ExperimentSeries series = parse_text(csv);
  CHECK(series.blocks.front().run(SettingPair::a1b1).n_oo == 3);
}

TEST_CASE("parse: structural and format errors") {
  SUBCASE("missing setting pair") {
    std::string csv = kHeader;
    csv += "1,a1,b1,0,,,,,,0,0\n";
    csv += "1,a1,b2,0,,,,,,0,0\n";
    csv += "1,a2,b1,0,,,,,,0,0\n";
    CHECK_THROWS_AS(parse_text(csv), StructuralError);
  }
  SUBCASE("duplicate setting pair") {
    std::string csv = zero_block_csv();
    csv += "1,a2,b2,0,,,,,,0,0\n";
    CHECK_THROWS_AS(parse_text(csv), StructuralError);
  }
  SUBCASE("empty input") { CHECK_THROWS_AS(parse_text(""), ParseError); }
  SUBCASE("header only") { CHECK_THROWS_AS(parse_text(kHeader), StructuralError); }
  SUBCASE("bad header") {
    CHECK_THROWS_AS(parse_text("block,a,b,n\n1,a1,b1,0\n"), ParseError);
  }
  SUBCASE("malformed count carries the line number") {
    std::string csv = kHeader;
    csv += "1,a1,b1,zero,,,,,,0,0\n";
    try {
      parse_text(csv);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("wrong field count") {
    std::string csv = kHeader;
    csv += "1,a1,b1,0,,,,,,0\n";
    CHECK_THROWS_AS(parse_text(csv), ParseError);
  }
  SUBCASE("bad setting label") {
    std::string csv = kHeader;
    csv += "1,a3,b1,0,,,,,,0,0\n";
    CHECK_THROWS_AS(parse_text(csv), ParseError);
  }
  SUBCASE("negative count is a validation error") {
    std::string csv = kHeader;
    csv += "1,a1,b1,-3,,,,,,0,0\n";
    CHECK_THROWS_AS(parse_text(csv), ValidationError);
  }
}

TEST_CASE("parse: singles decomposition is enforced for four-detector rows") {
  const auto row = [](const char* counts) {
    std::string csv = kHeader;
    csv += std::string("1,a1,b1,") + counts + "\n";
    csv += "1,a1,b2,0,0,0,0,0,0,0,0\n";
    csv += "1,a2,b1,0,0,0,0,0,0,0,0\n";
    csv += "1,a2,b2,0,0,0,0,0,0,0,0\n";
    return csv;
  };
  // n_oo=4, n_oe=2, n_ou=1 -> s_a must be 7; n_eo=3, n_uo=2 -> s_b must be 9.
  CHECK_NOTHROW(parse_text(row("4,2,3,5,1,2,7,9")));
  CHECK_THROWS_AS(parse_text(row("4,2,3,5,1,2,8,9")), ConsistencyError);
  CHECK_THROWS_AS(parse_text(row("4,2,3,5,1,2,7,8")), ConsistencyError);
}

TEST_CASE("parse: non-constant duration column warns") {
  std::string csv =
      "block_id,a_setting,b_setting,n_oo,n_oe,n_eo,n_ee,n_ou,n_uo,s_a,s_b,duration\n";
  csv += "1,a1,b1,0,,,,,,0,0,10\n";
  csv += "1,a1,b2,0,,,,,,0,0,10\n";
  csv += "1,a2,b1,0,,,,,,0,0,12\n";
  csv += "1,a2,b2,0,,,,,,0,0,10\n";
  std::vector<std::string> warnings;
  parse_text(csv, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings.front().find("duration") != std::string::npos);

  warnings.clear();
  std::string constant = csv;
  constant.replace(constant.find(",12\n"), 4, ",10\n");
  parse_text(constant, &warnings);
  CHECK(warnings.empty());
}

TEST_CASE("aggregate: identity, linearity and direct sums") {
  SUBCASE("single block is returned unchanged up to the block id") {
    const ExperimentSeries series = parse_text(zero_block_csv());
    const BlockRecord agg = aggregate(series);
    CHECK(agg.block_id == kAggregateBlockId);
    BlockRecord expected = series.blocks.front();
    expected.block_id = kAggregateBlockId;
    CHECK(agg == expected);
  }
  SUBCASE("two identical blocks double every count") {
    std::mt19937_64 rng(7);
    ExperimentSeries series = random_series(rng, 1);
    BlockRecord copy = series.blocks.front();
    copy.block_id = 2;
    series.blocks.push_back(copy);
    const BlockRecord agg = aggregate(series);
    for (SettingPair p : kSettingPairs) {
      CHECK(agg.run(p).n_oo == 2 * series.blocks.front().run(p).n_oo);
      CHECK(agg.run(p).s_a == 2 * series.blocks.front().run(p).s_a);
      CHECK(agg.run(p).s_b == 2 * series.blocks.front().run(p).s_b);
    }
  }
  SUBCASE("n_oo = 1,2,3 sums to 6") {
    ExperimentSeries series;
    for (std::int64_t i = 1; i <= 3; ++i) {
      series.blocks.push_back(block_from_noo(i, {i, 0, 0, 0}, {i, 0, 0, 0}, {i, 0, 0, 0}));
    }
    CHECK(aggregate(series).run(SettingPair::a1b1).n_oo == 6);
  }
}

TEST_CASE("aggregate: order independence") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    ExperimentSeries series = random_series(rng, 6);
    BlockRecord reference = aggregate(series);
    std::shuffle(series.blocks.begin(), series.blocks.end(), rng);
    CHECK(aggregate(series) == reference);
  }
}

TEST_CASE("aggregate: optional counts survive only when present everywhere") {
  std::mt19937_64 rng(13);
  ExperimentSeries series;
  series.blocks.push_back(testsupport::random_block(rng, true));
  series.blocks.push_back(testsupport::random_block(rng, false));
  const BlockRecord agg = aggregate(series);
  CHECK_FALSE(agg.run(SettingPair::a1b1).n_oe.has_value());
}

TEST_CASE("validate_series rejects mismatched setting pairs") {
  std::mt19937_64 rng(17);
  ExperimentSeries series = random_series(rng, 2);
  if (series.blocks.size() < 2) {
    series.blocks.push_back(series.blocks.front());
    series.blocks.back().block_id = 99;
  }
  series.blocks.back().run(SettingPair::a1b1).a_label.angle = 0.5;
  CHECK_THROWS_AS(validate_series(series), StructuralError);
}

}  // TEST_SUITE
