#include "bellstat/significance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bellstat {

BlockStatistics block_stats(std::span<const double> values) {
  const std::int64_t l = static_cast<std::int64_t>(values.size());
  if (l < 2) {
    throw InsufficientDataError("block statistics need at least 2 blocks, got " +
                                std::to_string(l));
  }
  for (const double v : values) {
    if (!std::isfinite(v)) throw ValidationError("block values must be finite");
  }

  // Identical inputs short-circuit so that sample_std == 0 holds exactly.
  const bool all_equal =
      std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); });
  if (all_equal) {
    return BlockStatistics{l, values.front(), 0.0, 0.0};
  }

  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / static_cast<double>(l);

  double ss = 0.0;
  for (const double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  const double sample_std = std::sqrt(ss / static_cast<double>(l - 1));
  return BlockStatistics{l, mean, sample_std, sample_std / std::sqrt(static_cast<double>(l))};
}

double chebyshev_tail(double c, double sigma) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError("chebyshev_tail requires c > 0");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw DomainError("chebyshev_tail requires sigma >= 0");
  }
  const double ratio = sigma / c;
  return std::min(1.0, ratio * ratio);
}

ChebyshevInterval chebyshev_interval(const BlockStatistics& stats, double level) {
  if (!(level > 0.0) || !(level < 1.0)) {
    throw DomainError("confidence level must lie in (0,1)");
  }
  if (!(stats.se > 0.0)) {
    throw DegenerateStatisticsError("Chebyshev interval undefined for se == 0");
  }
  const double k = 1.0 / std::sqrt(1.0 - level);
  const double c = k * stats.se;
  return ChebyshevInterval{level, k, c, stats.mean - c, stats.mean + c};
}

double sigma_violation(const BlockStatistics& stats, double threshold, Direction direction) {
  if (!(stats.se > 0.0)) {
    throw DegenerateStatisticsError("sigma count undefined for se == 0");
  }
  const bool violated =
      direction == Direction::below ? stats.mean < threshold : stats.mean > threshold;
  if (!violated) return 0.0;
  return std::abs(stats.mean - threshold) / stats.se;
}

double min_confidence_for_violation(const BlockStatistics& stats, double threshold,
                                    Direction direction) {
  const double k = sigma_violation(stats, threshold, direction);
  if (k == 0.0) {
    throw DomainError("mean does not violate the threshold in the stated direction");
  }
  const double confidence = 1.0 - 1.0 / (k * k);
  if (confidence < 0.0) return 0.0;
  const double below_one = std::nextafter(1.0, 0.0);
  return std::min(confidence, below_one);
}

}  // namespace bellstat
