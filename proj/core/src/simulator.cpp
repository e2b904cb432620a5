#include "bellstat/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace bellstat {

namespace {

constexpr std::size_t idx(Outcome x) { return static_cast<std::size_t>(x); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t run_seed(std::uint64_t seed, std::int64_t block, int pair) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(block + 1));
  s = splitmix64(s ^ static_cast<std::uint64_t>(pair + 1));
  return s;
}

// Quantum joint probability of beam outcomes x,y in {o,e} for analyzers at
// (theta_a, theta_b) on the state (|HH> + r|VV>)/sqrt(1+r^2).
double beam_prob(double r, double theta_a, double theta_b, Outcome x, Outcome y) {
  const double ca = x == Outcome::o ? std::cos(theta_a) : -std::sin(theta_a);
  const double sa = x == Outcome::o ? std::sin(theta_a) : std::cos(theta_a);
  const double cb = y == Outcome::o ? std::cos(theta_b) : -std::sin(theta_b);
  const double sb = y == Outcome::o ? std::sin(theta_b) : std::cos(theta_b);
  const double amplitude = ca * cb + r * sa * sb;
  return amplitude * amplitude / (1.0 + r * r);
}

double beam_marginal(double r, double theta, Outcome x) {
  const double c = x == Outcome::o ? std::cos(theta) : -std::sin(theta);
  const double s = x == Outcome::o ? std::sin(theta) : std::cos(theta);
  return (c * c + r * r * s * s) / (1.0 + r * r);
}

// Background promotion of undetected slots, applied per side.
void apply_background(NineProbs& probs, double bg) {
  if (bg <= 0.0) return;
  // A side (rows).
  for (std::size_t y = 0; y < 3; ++y) {
    const double u = probs.p[idx(Outcome::u)][y];
    probs.p[idx(Outcome::o)][y] += 0.5 * bg * u;
    probs.p[idx(Outcome::e)][y] += 0.5 * bg * u;
    probs.p[idx(Outcome::u)][y] = (1.0 - bg) * u;
  }
  // B side (columns).
  for (std::size_t x = 0; x < 3; ++x) {
    const double u = probs.p[x][idx(Outcome::u)];
    probs.p[x][idx(Outcome::o)] += 0.5 * bg * u;
    probs.p[x][idx(Outcome::e)] += 0.5 * bg * u;
    probs.p[x][idx(Outcome::u)] = (1.0 - bg) * u;
  }
}

std::array<std::int64_t, 9> sample_multinomial(std::int64_t n,
                                               const std::array<double, 9>& probs,
                                               std::mt19937_64& rng) {
  std::array<std::int64_t, 9> counts{};
  std::int64_t remaining = n;
  double mass_left = 1.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    if (remaining == 0) break;
    const double p = std::clamp(mass_left > 0.0 ? probs[i] / mass_left : 1.0, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> binom(remaining, p);
    counts[i] = binom(rng);
    remaining -= counts[i];
    mass_left -= probs[i];
  }
  counts.back() = remaining;
  return counts;
}

Outcome outcome_from_int(int v) { return static_cast<Outcome>(v); }

// ---- Nelder-Mead ---------------------------------------------------------

struct NmResult {
  std::vector<double> x;
  double f{std::numeric_limits<double>::infinity()};
};

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                     const std::vector<double>& x0, const std::vector<double>& steps,
                     double diameter_tol, std::int64_t max_evaluations) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += steps[i];

  std::int64_t evals = 0;
  const auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return objective(x);
  };
  for (std::size_t i = 0; i <= n; ++i) fs[i] = eval(xs[i]);

  std::vector<std::size_t> order(n + 1);
  while (evals < max_evaluations) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t d = 0; d < n; ++d) {
        diameter = std::max(diameter, std::abs(xs[i][d] - xs[order[0]][d]));
      }
    }
    if (diameter < diameter_tol) break;

    const std::size_t best = order[0];
    const std::size_t second_worst = order[n - 1];
    const std::size_t worst = order[n];

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += xs[i][d];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    const auto blend = [&](double coeff) {
      std::vector<double> x(n);
      for (std::size_t d = 0; d < n; ++d) {
        x[d] = centroid[d] + coeff * (centroid[d] - xs[worst][d]);
      }
      return x;
    };

    const std::vector<double> reflected = blend(1.0);
    const double fr = eval(reflected);
    if (fr < fs[best]) {
      const std::vector<double> expanded = blend(2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        xs[worst] = expanded;
        fs[worst] = fe;
      } else {
        xs[worst] = reflected;
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[second_worst]) {
      xs[worst] = reflected;
      fs[worst] = fr;
      continue;
    }
    const bool outside = fr < fs[worst];
    const std::vector<double> contracted = blend(outside ? 0.5 : -0.5);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : fs[worst])) {
      xs[worst] = contracted;
      fs[worst] = fc;
      continue;
    }
    // Shrink towards the best vertex.
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < n; ++d) {
        xs[i][d] = xs[best][d] + 0.5 * (xs[i][d] - xs[best][d]);
      }
      fs[i] = eval(xs[i]);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (fs[i] < fs[best]) best = i;
  }
  return NmResult{xs[best], fs[best]};
}

}  // namespace

void validate_model(const SourceModel& src) {
  if (!(std::isfinite(src.r) && src.r >= 0.0)) throw ValidationError("r must be >= 0");
  for (const double a : src.angles) {
    if (!std::isfinite(a)) throw ValidationError("angles must be finite");
  }
  const auto unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!unit(src.eta_a) || !unit(src.eta_b)) {
    throw ValidationError("efficiencies must lie in [0,1]");
  }
  if (!(std::isfinite(src.bg) && src.bg >= 0.0 && src.bg < 1.0)) {
    throw ValidationError("background probability must lie in [0,1)");
  }
}

NineProbs outcome_probs(const SourceModel& src, SettingPair pair) {
  validate_model(src);
  const double theta_a = src.angles[a_index(pair) - 1];
  const double theta_b = src.angles[2 + b_index(pair) - 1];
  const double ea = src.eta_a;
  const double eb = src.eta_b;

  NineProbs probs;
  for (const Outcome x : {Outcome::o, Outcome::e}) {
    for (const Outcome y : {Outcome::o, Outcome::e}) {
      probs.p[idx(x)][idx(y)] = ea * eb * beam_prob(src.r, theta_a, theta_b, x, y);
    }
    probs.p[idx(x)][idx(Outcome::u)] = ea * (1.0 - eb) * beam_marginal(src.r, theta_a, x);
  }
  for (const Outcome y : {Outcome::o, Outcome::e}) {
    probs.p[idx(Outcome::u)][idx(y)] = (1.0 - ea) * eb * beam_marginal(src.r, theta_b, y);
  }
  probs.p[idx(Outcome::u)][idx(Outcome::u)] = (1.0 - ea) * (1.0 - eb);

  apply_background(probs, src.bg);
  return probs;
}

double expected_j(const SourceModel& src) {
  const NineProbs p12 = outcome_probs(src, SettingPair::a1b2);
  const NineProbs p21 = outcome_probs(src, SettingPair::a2b1);
  const NineProbs p22 = outcome_probs(src, SettingPair::a2b2);
  const NineProbs p11 = outcome_probs(src, SettingPair::a1b1);
  return p12.at(Outcome::o, Outcome::e) + p12.at(Outcome::o, Outcome::u) +
         p21.at(Outcome::e, Outcome::o) + p21.at(Outcome::u, Outcome::o) +
         p22.at(Outcome::o, Outcome::o) - p11.at(Outcome::o, Outcome::o);
}

double j_block_variance_per_pair(const SourceModel& src) {
  const NineProbs p12 = outcome_probs(src, SettingPair::a1b2);
  const NineProbs p21 = outcome_probs(src, SettingPair::a2b1);
  const NineProbs p22 = outcome_probs(src, SettingPair::a2b2);
  const NineProbs p11 = outcome_probs(src, SettingPair::a1b1);
  const std::array<double, 4> masses = {
      p11.at(Outcome::o, Outcome::o),
      p12.at(Outcome::o, Outcome::e) + p12.at(Outcome::o, Outcome::u),
      p21.at(Outcome::e, Outcome::o) + p21.at(Outcome::u, Outcome::o),
      p22.at(Outcome::o, Outcome::o),
  };
  double variance = 0.0;
  for (const double q : masses) variance += q * (1.0 - q);
  return variance;
}

ExperimentSeries simulate(const SourceModel& src, const SimConfig& cfg) {
  validate_model(src);
  if (cfg.pairs_per_block <= 0) throw ValidationError("pairs_per_block must be > 0");
  if (cfg.blocks < 1) throw ValidationError("blocks must be >= 1");

  std::array<NineProbs, 4> probs;
  std::array<std::array<double, 9>, 4> flat;
  for (SettingPair pair : kSettingPairs) {
    const auto k = static_cast<std::size_t>(pair);
    probs[k] = outcome_probs(src, pair);
    for (std::size_t x = 0; x < 3; ++x) {
      for (std::size_t y = 0; y < 3; ++y) flat[k][3 * x + y] = probs[k].p[x][y];
    }
  }

  ExperimentSeries series;
  series.blocks.reserve(static_cast<std::size_t>(cfg.blocks));
  for (std::int64_t b = 0; b < cfg.blocks; ++b) {
    BlockRecord block;
    block.block_id = b + 1;
    for (SettingPair pair : kSettingPairs) {
      const auto k = static_cast<int>(pair);
      std::mt19937_64 rng(run_seed(cfg.seed, b, k));
      const auto counts =
          sample_multinomial(cfg.pairs_per_block, flat[static_cast<std::size_t>(k)], rng);

      auto& run = block.run(pair);
      run.a_label = SettingLabel{Side::a, a_index(pair), {}};
      run.b_label = SettingLabel{Side::b, b_index(pair), {}};
      run.n_oo = counts[0];
      run.n_oe = counts[1];
      run.n_ou = counts[2];
      run.n_eo = counts[3];
      run.n_ee = counts[4];
      run.n_eu = counts[5];
      run.n_uo = counts[6];
      run.n_ue = counts[7];
      run.n_uu = counts[8];
      run.s_a = counts[0] + counts[1] + counts[2];
      run.s_b = counts[0] + counts[3] + counts[6];
    }
    series.blocks.push_back(std::move(block));
  }
  return series;
}

std::array<LhvStrategy, 81> all_lhv_strategies() {
  std::array<LhvStrategy, 81> strategies{};
  std::size_t i = 0;
  for (int a1 = 0; a1 < 3; ++a1) {
    for (int a2 = 0; a2 < 3; ++a2) {
      for (int b1 = 0; b1 < 3; ++b1) {
        for (int b2 = 0; b2 < 3; ++b2) {
          strategies[i++] = LhvStrategy{{outcome_from_int(a1), outcome_from_int(a2)},
                                        {outcome_from_int(b1), outcome_from_int(b2)}};
        }
      }
    }
  }
  return strategies;
}

double lhv_expected_j(const LhvStrategy& s) {
  const Outcome a1 = s.a_map[0], a2 = s.a_map[1];
  const Outcome b1 = s.b_map[0], b2 = s.b_map[1];
  double j = 0.0;
  if (a1 == Outcome::o && b2 == Outcome::e) j += 1.0;
  if (a1 == Outcome::o && b2 == Outcome::u) j += 1.0;
  if (a2 == Outcome::e && b1 == Outcome::o) j += 1.0;
  if (a2 == Outcome::u && b1 == Outcome::o) j += 1.0;
  if (a2 == Outcome::o && b2 == Outcome::o) j += 1.0;
  if (a1 == Outcome::o && b1 == Outcome::o) j -= 1.0;
  return j;
}

BlockRecord lhv_block(const LhvStrategy& s) {
  BlockRecord block;
  block.block_id = 1;
  for (SettingPair pair : kSettingPairs) {
    const Outcome a = s.a_map[a_index(pair) - 1];
    const Outcome b = s.b_map[b_index(pair) - 1];
    auto& run = block.run(pair);
    run.a_label = SettingLabel{Side::a, a_index(pair), {}};
    run.b_label = SettingLabel{Side::b, b_index(pair), {}};
    const auto one_if = [&](Outcome x, Outcome y) -> std::int64_t {
      return (a == x && b == y) ? 1 : 0;
    };
    run.n_oo = one_if(Outcome::o, Outcome::o);
    run.n_oe = one_if(Outcome::o, Outcome::e);
    run.n_ou = one_if(Outcome::o, Outcome::u);
    run.n_eo = one_if(Outcome::e, Outcome::o);
    run.n_ee = one_if(Outcome::e, Outcome::e);
    run.n_eu = one_if(Outcome::e, Outcome::u);
    run.n_uo = one_if(Outcome::u, Outcome::o);
    run.n_ue = one_if(Outcome::u, Outcome::e);
    run.n_uu = one_if(Outcome::u, Outcome::u);
    run.s_a = a == Outcome::o ? 1 : 0;
    run.s_b = b == Outcome::o ? 1 : 0;
  }
  return block;
}

LhvExtremal lhv_extremal_j() {
  LhvExtremal best;
  best.j_min = std::numeric_limits<double>::infinity();
  for (const LhvStrategy& s : all_lhv_strategies()) {
    const double j = lhv_expected_j(s);
    if (j < best.j_min) {
      best.j_min = j;
      best.argmin = s;
    }
  }
  return best;
}

OptimizeResult optimize_eberhard(double eta, double bg) {
  if (!(std::isfinite(eta) && eta >= 0.0 && eta <= 1.0)) {
    throw DomainError("eta must lie in [0,1]");
  }
  if (!(std::isfinite(bg) && bg >= 0.0 && bg < 1.0)) {
    throw DomainError("bg must lie in [0,1)");
  }

  std::int64_t evaluations = 0;
  const auto objective = [&](const std::vector<double>& x) {
    ++evaluations;
    SourceModel src;
    src.r = std::abs(x[0]);
    src.angles = {x[1], x[2], x[3], x[4]};
    src.eta_a = eta;
    src.eta_b = eta;
    src.bg = bg;
    return expected_j(src);
  };

  constexpr double kDeg = std::numbers::pi / 180.0;
  struct Seed {
    double f;
    std::vector<double> x;
  };
  std::vector<Seed> seeds;

  // Coarse deterministic grid: 15 degree angle spacing (angles are periodic
  // mod 180 degrees), r from 0.1 to 1.0.
  std::vector<double> grid_angles;
  for (int d = 0; d < 180; d += 15) grid_angles.push_back(d * kDeg);
  for (int ri = 1; ri <= 10; ++ri) {
    const double r = 0.1 * ri;
    for (const double a1 : grid_angles) {
      for (const double a2 : grid_angles) {
        for (const double b1 : grid_angles) {
          for (const double b2 : grid_angles) {
            const std::vector<double> x = {r, a1, a2, b1, b2};
            const double f = objective(x);
            if (seeds.size() < 5) {
              seeds.push_back({f, x});
              std::sort(seeds.begin(), seeds.end(),
                        [](const Seed& lhs, const Seed& rhs) { return lhs.f < rhs.f; });
            } else if (f < seeds.back().f) {
              seeds.back() = {f, x};
              std::sort(seeds.begin(), seeds.end(),
                        [](const Seed& lhs, const Seed& rhs) { return lhs.f < rhs.f; });
            }
          }
        }
      }
    }
  }

  NmResult best;
  const std::vector<double> steps = {0.05, 5.0 * kDeg, 5.0 * kDeg, 5.0 * kDeg, 5.0 * kDeg};
  for (const Seed& seed : seeds) {
    const NmResult local = nelder_mead(objective, seed.x, steps, 1e-9, 10000);
    if (local.f < best.f) best = local;
  }

  OptimizeResult result;
  result.r = std::abs(best.x[0]);
  for (std::size_t i = 0; i < 4; ++i) {
    // Polarizer angles are periodic mod pi; report the representative in
    // (-pi/2, pi/2].
    double a = std::remainder(best.x[i + 1], std::numbers::pi);
    if (a <= -std::numbers::pi / 2) a += std::numbers::pi;
    result.angles[i] = a;
  }
  result.j_min = best.f;
  result.evaluations = evaluations;
  return result;
}

}  // namespace bellstat
