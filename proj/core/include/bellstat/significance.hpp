#pragma once
// Block estimators and distribution-free (Chebyshev) significance.
//
// Given per-block values of a test statistic, block_stats forms the sample
// mean, the Bessel-corrected sample standard deviation and the standard error
// of the mean s/sqrt(L).  chebyshev_interval turns a confidence level
// 1 - 1/k^2 into the interval mean +/- k*SE without any distributional
// assumption beyond a finite second moment.  Finite-L corrections to the
// Chebyshev bound are deliberately not applied; SE stands in for the standard
// deviation of the mean.

#include <cstdint>
#include <span>

#include "bellstat/errors.hpp"

namespace bellstat {

struct BlockStatistics {
  std::int64_t l{0};      // number of blocks
  double mean{0.0};
  double sample_std{0.0};  // Bessel-corrected (L-1 divisor)
  double se{0.0};          // sample_std / sqrt(l)
};

struct ChebyshevInterval {
  double level{0.0};  // confidence level in (0,1)
  double k{0.0};      // sigma multiplier, 1/sqrt(1-level)
  double c{0.0};      // half-width k*se
  double lo{0.0};
  double hi{0.0};
};

enum class Direction { below, above };

// L >= 2 and all values finite required.
BlockStatistics block_stats(std::span<const double> values);

// Upper bound on P(|eta - mu| >= c), clamped to 1.  Requires c > 0.
double chebyshev_tail(double c, double sigma);

// Requires 0 < level < 1 and stats.se > 0.
ChebyshevInterval chebyshev_interval(const BlockStatistics& stats, double level);

// |mean - threshold| / se when the mean violates the threshold in the stated
// direction (strictly below or strictly above), else 0.  Requires se > 0.
double sigma_violation(const BlockStatistics& stats, double threshold, Direction direction);

// Largest Chebyshev confidence level at which the violation is established:
// 1 - 1/k^2 with k = |mean - threshold|/se, clamped to [0,1).  Requires a
// strict violation in the stated direction and se > 0.
double min_confidence_for_violation(const BlockStatistics& stats, double threshold,
                                    Direction direction);

}  // namespace bellstat
