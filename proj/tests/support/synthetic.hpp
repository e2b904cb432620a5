#pragma once
// Synthetic series whose per-block statistics reproduce the published summary
// values of the 2013 Vienna run (block mean and standard error), used to
// exercise the full CSV -> per-block statistic -> interval pipeline.  The raw
// per-block data was never published, so the count layout here is a minimal
// construction hitting the published (mean, SE) pairs.

#include <array>
#include <cstdint>
#include <vector>

#include "generators.hpp"

namespace testsupport {

// Offsets with zero sum; the quadratic sum is tuned so that the standard
// error of the resulting 30 block values lands on the published figure.
inline std::vector<std::int64_t> symmetric_offsets(std::int64_t main_step,
                                                   std::int64_t trim_step, int main_pairs) {
  std::vector<std::int64_t> d;
  for (int i = 0; i < main_pairs; ++i) {
    d.push_back(main_step);
    d.push_back(-main_step);
  }
  d.push_back(trim_step);
  d.push_back(-trim_step);
  return d;
}

// 30 blocks whose J values have mean exactly -4224 and SE ~= 61.23.
inline ExperimentSeries vienna_like_j_series() {
  const std::vector<std::int64_t> offsets = symmetric_offsets(330, 326, 14);
  ExperimentSeries series;
  std::int64_t id = 1;
  for (const std::int64_t d : offsets) {
    const std::int64_t j_target = -4224 + d;
    const std::int64_t n11 = 100 - j_target;  // j_single is fixed at 100
    series.blocks.push_back(block_from_noo(id++, {n11, 0, 0, 0}, {n11, 50, 0, 0},
                                           {n11, 0, 50, 0}));
  }
  return series;
}

// 30 blocks whose T values have mean exactly 1.0394 and SE ~= 0.0006.
inline ExperimentSeries vienna_like_t_series() {
  const std::vector<std::int64_t> offsets = symmetric_offsets(3231, 3231, 14);
  ExperimentSeries series;
  std::int64_t id = 1;
  for (const std::int64_t f : offsets) {
    const std::int64_t n11 = 1039400 + f;  // denominator fixed at 10^6
    series.blocks.push_back(block_from_noo(id++, {n11, 0, 0, 0}, {n11, 500000, 0, 0},
                                           {n11, 0, 500000, 0}));
  }
  return series;
}

}  // namespace testsupport
