#include "bellstat/nonequivalence.hpp"

#include <cmath>
#include <random>
#include <string>

namespace bellstat {

void validate_model(const TwoPointModel& m) {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!(std::isfinite(m.p1) && m.p1 > 0.0 && m.p1 < 1.0)) {
    throw ValidationError("p1 must lie in (0,1)");
  }
  if (!positive(m.a1) || !positive(m.a2)) throw ValidationError("A1, A2 must be > 0");
  if (!positive(m.eps1) || !positive(m.eps2)) throw ValidationError("eps1, eps2 must be > 0");
}

double require_ratio(const std::optional<double>& ratio, const char* what) {
  if (!ratio) {
    throw DegenerateStatisticsError(std::string(what) + " undefined: zero sigma");
  }
  return *ratio;
}

NoneqReport moments(const TwoPointModel& m) {
  validate_model(m);
  const double p1 = m.p1;
  const double p2 = m.p2();
  const double root_p1p2 = std::sqrt(p1 * p2);

  NoneqReport r;
  r.mu_j = -(m.eps1 * m.a1 * p1 + m.eps2 * m.a2 * p2);
  r.sigma_j = root_p1p2 * std::abs(m.eps1 * m.a1 - m.eps2 * m.a2);
  r.mu_t = 1.0 + m.eps1 * p1 + m.eps2 * p2;
  r.sigma_t = root_p1p2 * std::abs(m.eps1 - m.eps2);
  if (r.sigma_j > 0.0) r.r_j = -r.mu_j / r.sigma_j;
  if (r.sigma_t > 0.0) r.r_t = (r.mu_t - 1.0) / r.sigma_t;
  return r;
}

TwoPointModel construct(double delta, double lambda, double k, double a2, double eps2) {
  if (!(std::isfinite(delta) && delta > 0.0 && delta < 1.0)) {
    throw DomainError("delta must lie in (0,1)");
  }
  if (!(std::isfinite(lambda) && lambda > 1.0)) throw DomainError("lambda must be > 1");
  if (!(std::isfinite(k) && k > 0.0)) throw DomainError("k must be > 0");
  if (!(std::isfinite(a2) && a2 > 0.0)) throw DomainError("a2 must be > 0");
  if (!(std::isfinite(eps2) && eps2 > 0.0)) throw DomainError("eps2 must be > 0");

  const double a = 1.0 / lambda + 1.0 / (k * delta * lambda);
  TwoPointModel m;
  m.p1 = delta * delta;
  m.a2 = a2;
  m.a1 = a * a2;
  m.eps2 = eps2;
  m.eps1 = lambda * eps2;
  validate_model(m);
  return m;
}

NoneqReport empirical_check(const TwoPointModel& m, std::int64_t n_samples, std::uint64_t seed) {
  validate_model(m);
  if (n_samples < 2) throw InsufficientDataError("empirical check needs n_samples >= 2");

  // The tally of x1 outcomes over i.i.d. draws is binomial; sampling the
  // count directly is equivalent to drawing per-sample.
  std::mt19937_64 rng(seed);
  std::binomial_distribution<std::int64_t> binom(n_samples, m.p1);
  const std::int64_t n1 = binom(rng);
  const std::int64_t n2 = n_samples - n1;

  const double j1 = -m.eps1 * m.a1;  // J at x1
  const double j2 = -m.eps2 * m.a2;  // J at x2
  const double t1 = 1.0 + m.eps1;    // T at x1
  const double t2 = 1.0 + m.eps2;

  const double n = static_cast<double>(n_samples);
  const double w1 = static_cast<double>(n1);
  const double w2 = static_cast<double>(n2);

  const auto sample_stats = [&](double v1, double v2, double* mean, double* stddev) {
    // A sample concentrated on one value has zero spread exactly.
    if (v1 == v2 || n1 == 0 || n1 == n_samples) {
      *mean = n1 == 0 ? v2 : v1;
      *stddev = 0.0;
      return;
    }
    *mean = (w1 * v1 + w2 * v2) / n;
    const double d1 = v1 - *mean;
    const double d2 = v2 - *mean;
    *stddev = std::sqrt((w1 * d1 * d1 + w2 * d2 * d2) / (n - 1.0));
  };

  NoneqReport r;
  sample_stats(j1, j2, &r.mu_j, &r.sigma_j);
  sample_stats(t1, t2, &r.mu_t, &r.sigma_t);
  const bool degenerate_sample = n1 == 0 || n1 == n_samples;
  if (!degenerate_sample && r.sigma_j > 0.0) r.r_j = -r.mu_j / r.sigma_j;
  if (!degenerate_sample && r.sigma_t > 0.0) r.r_t = (r.mu_t - 1.0) / r.sigma_t;
  return r;
}

}  // namespace bellstat
