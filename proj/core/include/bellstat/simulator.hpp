#pragma once
// Synthetic data generation for the two-photon polarization experiment, and
// the joint source/analyzer optimization of the expected Eberhard J.
//
// Physical model: a pure two-qubit state proportional to |HH> + r|VV> is
// analyzed with a polarizer on each arm.  At analyzer angle theta the
// ordinary beam projects onto cos(theta)|H> + sin(theta)|V>, the
// extraordinary beam onto the orthogonal state.  Each photon is then detected
// with its arm's efficiency (detected -> o or e per its beam, undetected ->
// u), and finally a background click with per-trial probability bg promotes
// an undetected slot to o or e with equal odds.  This is the minimal standard
// model with independent arm losses and independent background events.
//
// Deterministic local strategies assign one outcome in {o,e,u} per setting
// per side; there are 3^2 * 3^2 = 81 of them and every local realistic
// prediction for this experiment is a mixture of the 81.
//
// outcome_probs and expected_j are pure; simulate and optimize_eberhard own
// their deterministic state (per-run derived RNG streams, fixed evaluation
// order), so equal seeds give equal results regardless of scheduling.

#include <array>
#include <cstdint>

#include "bellstat/counts.hpp"
#include "bellstat/errors.hpp"

namespace bellstat {

struct SourceModel {
  double r{1.0};                     // |HH> + r|VV>, r >= 0
  std::array<double, 4> angles{};    // alpha1, alpha2, beta1, beta2 (radians)
  double eta_a{1.0};
  double eta_b{1.0};
  double bg{0.0};                    // per-channel per-trial background click probability
};

void validate_model(const SourceModel& src);

enum class Outcome : int { o = 0, e = 1, u = 2 };

inline constexpr std::array<Outcome, 3> kOutcomes = {Outcome::o, Outcome::e, Outcome::u};

// Joint outcome distribution of one emitted pair at one setting pair.
struct NineProbs {
  std::array<std::array<double, 3>, 3> p{};  // [A outcome][B outcome]

  double at(Outcome a, Outcome b) const {
    return p[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  double a_marginal(Outcome a) const {
    const auto& row = p[static_cast<std::size_t>(a)];
    return row[0] + row[1] + row[2];
  }
  double b_marginal(Outcome b) const {
    const auto i = static_cast<std::size_t>(b);
    return p[0][i] + p[1][i] + p[2][i];
  }
  double sum() const {
    double total = 0.0;
    for (const auto& row : p) total += row[0] + row[1] + row[2];
    return total;
  }
};

NineProbs outcome_probs(const SourceModel& src, SettingPair pair);

// Expected J per emitted pair; negative means quantum violation.
double expected_j(const SourceModel& src);

// Sum over the four runs of q(1-q), where q is the probability mass entering
// J from that run; N * this is the variance of a block's J at N pairs per
// run.  Used for statistical power estimates.
double j_block_variance_per_pair(const SourceModel& src);

struct SimConfig {
  std::int64_t pairs_per_block{1};
  std::int64_t blocks{1};  // L
  std::uint64_t seed{0};
};

// Draws pairs_per_block outcomes per run per block and tallies the nine
// counts plus singles.  Each (block, run) uses an RNG stream derived from
// (seed, block index, run index), so results do not depend on evaluation
// order and block contents are stable under changes of cfg.blocks.
ExperimentSeries simulate(const SourceModel& src, const SimConfig& cfg);

struct LhvStrategy {
  std::array<Outcome, 2> a_map{};  // outcome at alpha1, alpha2
  std::array<Outcome, 2> b_map{};  // outcome at beta1, beta2
};

std::array<LhvStrategy, 81> all_lhv_strategies();

// Per-pair J of a deterministic strategy (every run yields its fixed outcome).
double lhv_expected_j(const LhvStrategy& strategy);

// One-pair deterministic block for a strategy, with full outcome tables and
// consistent singles.
BlockRecord lhv_block(const LhvStrategy& strategy);

struct LhvExtremal {
  double j_min{0.0};
  LhvStrategy argmin{};
};

// Enumerates all 81 strategies; the minimum is the local realistic bound.
LhvExtremal lhv_extremal_j();

struct OptimizeResult {
  double r{0.0};
  std::array<double, 4> angles{};  // radians, reduced to (-pi/2, pi/2]
  double j_min{0.0};
  std::int64_t evaluations{0};
};

// Minimizes expected_j over (r, angles) at fixed efficiencies: deterministic
// coarse grid (15 degree angle spacing, r in 0.1..1.0) followed by
// Nelder-Mead refinement from the best five seeds, each run until the simplex
// diameter falls below 1e-9 or 10^4 evaluations are spent.
OptimizeResult optimize_eberhard(double eta, double bg);

}  // namespace bellstat
