#include <cmath>
#include <fstream>
#include <numbers>

#include "bellstat/analysis.hpp"
#include "bellstat/json_writer.hpp"
#include "bellstat/simulator.hpp"
#include "doctest.h"
#include "generators.hpp"
#include "json.hpp"
#include "schema_check.hpp"
#include "synthetic.hpp"

using namespace bellstat;
using testsupport::block_from_noo;

#ifndef BELLSTAT_SCHEMA_PATH
#define BELLSTAT_SCHEMA_PATH "schema/analysis_report.schema.json"
#endif

namespace {

ExperimentSeries all_zero_series(int l) {
  ExperimentSeries series;
  for (int i = 1; i <= l; ++i) {
    series.blocks.push_back(block_from_noo(i, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}));
  }
  return series;
}

testsupport::SchemaChecker load_schema() {
  std::ifstream in(BELLSTAT_SCHEMA_PATH);
  REQUIRE(in.good());
  return testsupport::SchemaChecker(nlohmann::json::parse(in));
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("all-zero dataset: J statistics zero, T undefined, still a report") {
  const AnalysisReport report = analyze_series(all_zero_series(5), AnalysisOptions{});
  CHECK(report.l == 5);
  CHECK(report.j.stats.mean == 0.0);
  CHECK(report.j.stats.sample_std == 0.0);
  CHECK_FALSE(report.j.sigma_violation.has_value());
  CHECK_FALSE(report.j.interval.has_value());
  CHECK(report.t.defined_blocks == 0);
  CHECK(report.t.partial);
  CHECK_FALSE(report.t.stats.has_value());
  CHECK_FALSE(report.t.aggregate.has_value());
  CHECK(report.equivalence_consistent);

  // Renders in both forms and validates against the published schema.
  const std::string json_text = render_json(report);
  const nlohmann::json parsed = nlohmann::json::parse(json_text);
  load_schema().validate(parsed);
  CHECK(render_text(report).find("degenerate") != std::string::npos);
}

TEST_CASE("violating seeded dataset: interval excludes zero") {
  constexpr double kDeg = std::numbers::pi / 180.0;
  SourceModel src;
  src.r = 1.0;
  src.angles = {0.0, 45.0 * kDeg, 22.5 * kDeg, -22.5 * kDeg};
  const ExperimentSeries series = simulate(src, SimConfig{5000, 30, 123});

  const AnalysisReport report = analyze_series(series, AnalysisOptions{});
  REQUIRE(report.j.sigma_violation.has_value());
  CHECK(*report.j.sigma_violation > 0.0);
  REQUIRE(report.j.interval.has_value());
  CHECK(report.j.interval->hi < 0.0);
  REQUIRE(report.t.stats.has_value());
  CHECK(report.t.stats->stats.mean > 1.0);
  REQUIRE(report.t.aggregate.has_value());
  CHECK(report.t.aggregate->t > 1.0);
  CHECK(report.equivalence_consistent);
}

TEST_CASE("published J summary reproduced end to end from counts") {
  const AnalysisReport report =
      analyze_series(testsupport::vienna_like_j_series(), AnalysisOptions{});
  CHECK(report.l == 30);
  CHECK(report.j.stats.mean == -4224.0);
  REQUIRE(report.j.interval.has_value());
  CHECK(std::abs(report.j.interval->c - 2738.0) <= 1.0);
  CHECK(std::abs(report.j.interval->lo - (-6962.0)) <= 1.0);
  CHECK(std::abs(report.j.interval->hi - (-1486.0)) <= 1.0);
  REQUIRE(report.j.sigma_violation.has_value());
  CHECK(std::abs(*report.j.sigma_violation - 68.99) <= 0.1);
}

TEST_CASE("published T summary reproduced end to end from counts") {
  const AnalysisReport report =
      analyze_series(testsupport::vienna_like_t_series(), AnalysisOptions{});
  REQUIRE(report.t.stats.has_value());
  const StatSection& stats = *report.t.stats;
  CHECK(stats.stats.mean == doctest::Approx(1.0394).epsilon(1e-12));
  REQUIRE(stats.interval.has_value());
  CHECK(std::abs(stats.interval->c - 0.027) <= 0.001);
  CHECK(std::abs(stats.interval->lo - 1.0124) <= 0.001);
  CHECK(std::abs(stats.interval->hi - 1.0664) <= 0.001);
  REQUIRE(stats.sigma_violation.has_value());
  CHECK(std::abs(*stats.sigma_violation - 65.7) <= 0.1);
}

TEST_CASE("drift section present and flagged") {
  ExperimentSeries series;
  for (int i = 1; i <= 3; ++i) {
    series.blocks.push_back(block_from_noo(i, {40, 30, 20, 10},
                                           {100, 90 + i, 100, 90},
                                           {100, 90, 100 + i, 90}));
  }
  AnalysisOptions options;
  options.drift = true;
  const AnalysisReport report = analyze_series(series, options);
  REQUIRE(report.t_drift.has_value());
  CHECK(!report.drift_note.empty());
  REQUIRE(!report.drift_blocks.empty());
  for (const BlockEntry& entry : report.drift_blocks) CHECK(entry.normalized);
  for (const BlockEntry& entry : report.blocks) CHECK_FALSE(entry.normalized);

  const nlohmann::json parsed = nlohmann::json::parse(render_json(report));
  load_schema().validate(parsed);
  CHECK_FALSE(parsed["drift"].is_null());
  CHECK(parsed["drift"]["t"]["defined_blocks"].get<int>() == 3);
}

TEST_CASE("text and JSON reports carry identical numbers") {
  const AnalysisReport report =
      analyze_series(testsupport::vienna_like_j_series(), AnalysisOptions{});
  const std::string text = render_text(report);
  const nlohmann::json parsed = nlohmann::json::parse(render_json(report));

  // The text report prints the same 17-significant-digit strings.
  for (const char* key : {"mean", "sample_std", "se"}) {
    const double value = parsed["j"]["stats"][key].get<double>();
    CHECK(text.find(format_g17(value)) != std::string::npos);
  }
  const double c = parsed["j"]["stats"]["chebyshev"]["c"].get<double>();
  CHECK(text.find(format_g17(c)) != std::string::npos);
}

TEST_CASE("partial T section when some blocks have zero denominators") {
  ExperimentSeries series;
  series.blocks.push_back(block_from_noo(1, {5, 3, 2, 1}, {5, 8, 2, 1}, {5, 3, 8, 1}));
  series.blocks.push_back(block_from_noo(2, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}));
  series.blocks.push_back(block_from_noo(3, {6, 2, 2, 1}, {6, 9, 2, 1}, {6, 2, 9, 1}));
  const AnalysisReport report = analyze_series(series, AnalysisOptions{});
  CHECK(report.t.defined_blocks == 2);
  CHECK(report.t.partial);
  CHECK(report.t.stats.has_value());  // two defined blocks suffice
  REQUIRE(report.t.aggregate.has_value());
}

TEST_CASE("fewer than two blocks cannot be analyzed") {
  CHECK_THROWS_AS(analyze_series(all_zero_series(1), AnalysisOptions{}), InsufficientDataError);
  CHECK_THROWS_AS(analyze_series(all_zero_series(2), AnalysisOptions{.level = 1.5}), DomainError);
}

}  // TEST_SUITE
