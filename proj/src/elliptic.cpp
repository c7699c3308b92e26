#include "hgsim/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hgsim/types.hpp"

namespace hgsim {

namespace {

constexpr int kMaxAgmIterations = 40;

struct AgmLadder {
  double a[kMaxAgmIterations + 1];
  double c[kMaxAgmIterations + 1];
  int steps = 0;
};

// a_{i+1} = (a_i + b_i)/2, b_{i+1} = sqrt(a_i b_i), c_{i+1} = (a_i - b_i)/2,
// starting from a_0 = 1, b_0 = k', c_0 = k.
AgmLadder agm_ladder(double k) {
  AgmLadder ladder;
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  double c = k;
  ladder.a[0] = a;
  ladder.c[0] = c;
  int i = 0;
  while (std::abs(c) > 1e-17 * a && i < kMaxAgmIterations) {
    double an = 0.5 * (a + b);
    c = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    ++i;
    ladder.a[i] = a;
    ladder.c[i] = c;
  }
  ladder.steps = i;
  return ladder;
}

}  // namespace

double complete_elliptic_k(double k) {
  if (k < 0.0 || k > 1.0) fail(errc::invalid_argument, "complete_elliptic_k: modulus outside [0,1]");
  if (k == 1.0) return std::numeric_limits<double>::infinity();
  AgmLadder ladder = agm_ladder(k);
  return M_PI / (2.0 * ladder.a[ladder.steps]);
}

double jacobi_sn(double u, double k) {
  if (k < 0.0 || k > 1.0) fail(errc::invalid_argument, "jacobi_sn: modulus outside [0,1]");
  if (k == 0.0) return std::sin(u);
  if (k >= 1.0 - 1e-15) return std::tanh(u);

  AgmLadder ladder = agm_ladder(k);
  const int n = ladder.steps;

  // Reduce u into one period for phase accuracy at large arguments.
  double period = 4.0 * M_PI / (2.0 * ladder.a[n]);
  if (std::abs(u) > period) u = std::fmod(u, period);

  double phi = std::ldexp(ladder.a[n] * u, n);
  for (int i = n; i >= 1; --i) {
    double s = std::clamp(ladder.c[i] / ladder.a[i] * std::sin(phi), -1.0, 1.0);
    phi = 0.5 * (phi + std::asin(s));
  }
  return std::sin(phi);
}

double carlson_rf(double x, double y, double z) {
  // Duplication theorem iteration (converges for nonnegative arguments,
  // at most one of them zero).
  constexpr double kTol = 1e-12;
  double mu;
  for (int iter = 0; iter < 200; ++iter) {
    double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    double lambda = sx * (sy + sz) + sy * sz;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    mu = (x + y + z) / 3.0;
    double dev = std::max({std::abs(x - mu), std::abs(y - mu), std::abs(z - mu)});
    if (dev < kTol * mu) break;
  }
  double dx = 1.0 - x / mu;
  double dy = 1.0 - y / mu;
  double dz = 1.0 - z / mu;
  double e2 = dx * dy + dy * dz + dz * dx;
  double e3 = dx * dy * dz;
  return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(mu);
}

double inverse_sn(double x, double k) {
  if (x < 0.0 || x > 1.0) fail(errc::invalid_argument, "inverse_sn: argument outside [0,1]");
  if (k < 0.0 || k > 1.0) fail(errc::invalid_argument, "inverse_sn: modulus outside [0,1]");
  if (x == 0.0) return 0.0;
  if (k >= 1.0 - 1e-15) {
    if (x >= 1.0) fail(errc::invalid_argument, "inverse_sn: x = 1 diverges at modulus 1");
    return std::atanh(x);
  }
  if (x == 1.0) return complete_elliptic_k(k);
  // asn(x, k) = x RF(1 - x^2, 1 - k^2 x^2, 1).
  double x2 = x * x;
  return x * carlson_rf(1.0 - x2, 1.0 - k * k * x2, 1.0);
}

}  // namespace hgsim
