#pragma once
// Two-point counterexample separating the significance of the linear test
// J >= 0 from the ratio test T <= 1.
//
// A random variable x takes value x1 with probability p1 and x2 with
// probability p2 = 1 - p1.  Two positive functions J1, J2 are fixed by
// J1(x_i) = A_i and J2(x_i) = B_i = (1 + eps_i) A_i, and the tests apply to
// J = J1 - J2 and T = J2 / J1.  Closed-form moments:
//
//   mu_J    = -(eps1 A1 p1 + eps2 A2 p2)        < 0
//   sigma_J = sqrt(p1 p2) |eps1 A1 - eps2 A2|
//   mu_T    = 1 + eps1 p1 + eps2 p2             > 1
//   sigma_T = sqrt(p1 p2) |eps1 - eps2|
//
// and the significance ratios are R_J = -mu_J/sigma_J, R_T = (mu_T-1)/sigma_T.
// T ignores the common scale of A1, A2 while J is linear in it, which is what
// lets construct() drive R_J to any k while R_T stays small.

#include <cstdint>
#include <optional>

#include "bellstat/errors.hpp"

namespace bellstat {

struct TwoPointModel {
  double p1{0.5};    // in (0,1); p2 = 1 - p1
  double a1{1.0};    // A1 > 0
  double a2{1.0};    // A2 > 0
  double eps1{1.0};  // > 0
  double eps2{1.0};  // > 0

  double p2() const { return 1.0 - p1; }
};

void validate_model(const TwoPointModel& m);

struct NoneqReport {
  double mu_j{0.0};
  double sigma_j{0.0};
  double mu_t{0.0};
  double sigma_t{0.0};
  // Absent when the corresponding sigma is zero (degenerate ratio).
  std::optional<double> r_j{};
  std::optional<double> r_t{};
};

// Throws DegenerateStatisticsError naming `what` when the ratio is absent.
double require_ratio(const std::optional<double>& ratio, const char* what);

// Exact closed-form moments and significance ratios.
NoneqReport moments(const TwoPointModel& m);

// Builds the counterexample instance: p1 = delta^2, eps1 = lambda * eps2,
// A1 = a * A2 with a = 1/lambda + 1/(k * delta * lambda), so that
// a*lambda - 1 = 1/(k*delta) exactly and R_J = sqrt(p1/p2) + k*delta/sqrt(p1 p2).
// Requires delta in (0,1), lambda > 1, k > 0.
TwoPointModel construct(double delta, double lambda, double k, double a2 = 1.0,
                        double eps2 = 1.0);

// Monte Carlo cross-check: sample-based estimates of all report fields from
// n_samples i.i.d. draws, deterministic for a given seed.  A sample in which
// only one point occurs is degenerate; its ratios are omitted.
NoneqReport empirical_check(const TwoPointModel& m, std::int64_t n_samples, std::uint64_t seed);

}  // namespace bellstat
