#pragma once
// Independent route to the nine outcome probabilities, used as the oracle for
// the simulator's closed-form implementation: the quantum part goes through
// explicit 4x4 density-matrix algebra (rho = |psi><psi|, probabilities as
// Tr[rho (P_a (x) P_b)]) and detection thinning plus background promotion are
// applied as explicit 3x3 transition matrices.

#include <array>
#include <cmath>

#include "bellstat/counts.hpp"
#include "bellstat/simulator.hpp"

namespace testsupport {

using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat4 = std::array<std::array<double, 4>, 4>;

inline Mat2 projector(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return Mat2{{{c * c, c * s}, {c * s, s * s}}};
}

inline Mat2 identity2() { return Mat2{{{1.0, 0.0}, {0.0, 1.0}}}; }

inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
        }
      }
    }
  }
  return out;
}

inline Mat4 density_matrix(double r) {
  // |psi> = (|HH> + r|VV>)/sqrt(1+r^2) in the basis {HH, HV, VH, VV}.
  const double norm = std::sqrt(1.0 + r * r);
  const std::array<double, 4> psi = {1.0 / norm, 0.0, 0.0, r / norm};
  Mat4 rho{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) rho[i][j] = psi[i] * psi[j];
  }
  return rho;
}

inline double trace_product(const Mat4& rho, const Mat4& op) {
  double trace = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) trace += rho[i][j] * op[j][i];
  }
  return trace;
}

// Nine joint probabilities indexed [A outcome][B outcome] with o=0,e=1,u=2.
inline std::array<std::array<double, 3>, 3> oracle_probs(const bellstat::SourceModel& src,
                                                         bellstat::SettingPair pair) {
  using bellstat::a_index;
  using bellstat::b_index;
  const double theta_a = src.angles[a_index(pair) - 1];
  const double theta_b = src.angles[2 + b_index(pair) - 1];
  const Mat4 rho = density_matrix(src.r);
  const double half_pi = std::acos(-1.0) / 2.0;

  const std::array<Mat2, 2> pa = {projector(theta_a), projector(theta_a + half_pi)};
  const std::array<Mat2, 2> pb = {projector(theta_b), projector(theta_b + half_pi)};

  // Quantum beam probabilities and marginals.
  double q[2][2];
  double qa[2];
  double qb[2];
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) q[x][y] = trace_product(rho, kron(pa[x], pb[y]));
    qa[x] = trace_product(rho, kron(pa[x], identity2()));
    qb[x] = trace_product(rho, kron(identity2(), pb[x]));
  }

  // Detection thinning.
  const double ea = src.eta_a;
  const double eb = src.eta_b;
  std::array<std::array<double, 3>, 3> pre{};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) pre[x][y] = ea * eb * q[x][y];
    pre[x][2] = ea * (1.0 - eb) * qa[x];
    pre[2][x] = (1.0 - ea) * eb * qb[x];
  }
  pre[2][2] = (1.0 - ea) * (1.0 - eb);

  // Background promotion as a transition matrix m[from][to] applied per side.
  const double bg = src.bg;
  const double m[3][3] = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {bg / 2.0, bg / 2.0, 1.0 - bg}};
  std::array<std::array<double, 3>, 3> out{};
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      double total = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) total += pre[i][j] * m[i][x] * m[j][y];
      }
      out[x][y] = total;
    }
  }
  return out;
}

}  // namespace testsupport
