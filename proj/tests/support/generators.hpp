#pragma once
// Seeded generators for fuzz/property tests over count records.

#include <cstdint>
#include <random>

#include "bellstat/counts.hpp"

namespace testsupport {

using namespace bellstat;

inline SettingPairCounts random_run(std::mt19937_64& rng, SettingPair pair, bool four_detector,
                                    std::int64_t max_count = 1000000,
                                    std::int64_t min_singles = 0) {
  std::uniform_int_distribution<std::int64_t> count(0, max_count);
  SettingPairCounts run;
  run.a_label = SettingLabel{Side::a, a_index(pair), {}};
  run.b_label = SettingLabel{Side::b, b_index(pair), {}};
  run.n_oo = count(rng);
  if (four_detector) {
    // Only the columns the CSV schema carries; n_ue/n_eu/n_uu stay absent so
    // generated series stay serializable.
    run.n_oe = count(rng);
    run.n_eo = count(rng);
    run.n_ee = count(rng);
    run.n_ou = count(rng);
    run.n_uo = count(rng);
    run.s_a = run.n_oo + *run.n_oe + *run.n_ou;
    run.s_b = run.n_oo + *run.n_eo + *run.n_uo;
  } else {
    run.s_a = run.n_oo + count(rng);
    run.s_b = run.n_oo + count(rng);
  }
  run.s_a = std::max(run.s_a, min_singles);
  run.s_b = std::max(run.s_b, min_singles);
  if (four_detector) {
    // Keep the decomposition intact when min_singles lifted the values.
    run.n_ou = run.s_a - run.n_oo - *run.n_oe;
    run.n_uo = run.s_b - run.n_oo - *run.n_eo;
  }
  return run;
}

inline BlockRecord random_block(std::mt19937_64& rng, bool four_detector,
                                std::int64_t max_count = 1000000,
                                std::int64_t min_singles = 0) {
  static std::int64_t next_id = 1;
  BlockRecord block;
  block.block_id = next_id++;
  for (SettingPair p : kSettingPairs) {
    block.run(p) = random_run(rng, p, four_detector, max_count, min_singles);
  }
  return block;
}

inline ExperimentSeries random_series(std::mt19937_64& rng, int max_blocks = 8,
                                      std::int64_t max_count = 1000000,
                                      std::int64_t min_singles = 0) {
  std::uniform_int_distribution<int> n_blocks(1, max_blocks);
  std::bernoulli_distribution four(0.5);
  const bool four_detector = four(rng);
  ExperimentSeries series;
  const int l = n_blocks(rng);
  for (int i = 0; i < l; ++i) {
    BlockRecord block = random_block(rng, four_detector, max_count, min_singles);
    block.block_id = i + 1;
    series.blocks.push_back(std::move(block));
  }
  return series;
}

// Two-detector block from the four n_oo values plus per-run singles.
inline BlockRecord block_from_noo(std::int64_t id, const std::array<std::int64_t, 4>& n_oo,
                                  const std::array<std::int64_t, 4>& s_a,
                                  const std::array<std::int64_t, 4>& s_b) {
  BlockRecord block;
  block.block_id = id;
  for (SettingPair p : kSettingPairs) {
    const auto i = static_cast<std::size_t>(p);
    auto& run = block.run(p);
    run.a_label = SettingLabel{Side::a, a_index(p), {}};
    run.b_label = SettingLabel{Side::b, b_index(p), {}};
    run.n_oo = n_oo[i];
    run.s_a = s_a[i];
    run.s_b = s_b[i];
  }
  return block;
}

}  // namespace testsupport
