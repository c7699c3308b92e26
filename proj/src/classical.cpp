#include "hgsim/classical.hpp"

#include <algorithm>
#include <cmath>

#include "hgsim/elliptic.hpp"

namespace hgsim {

namespace {

Complex ipow(Complex z, int n) {
  Complex out(1.0, 0.0);
  for (int i = 0; i < n; ++i) out *= z;
  return out;
}

}  // namespace

std::pair<Complex, Complex> rhs(const ClassicalState& s, const ModelSpec& model) {
  const int N = model.order;
  const Complex minus_ig(0.0, -model.coupling);
  Complex d1 = minus_ig * double(N) * ipow(std::conj(s.a1), N - 1) * s.aN;
  Complex dN = minus_ig * ipow(s.a1, N);
  return {d1, dN};
}

MotionIntegrals integrals_of_motion(const ClassicalState& s, const ModelSpec& model) {
  MotionIntegrals out;
  out.E = s.n1() + model.order * s.nN();
  out.Gamma = (ipow(s.a1, model.order) * std::conj(s.aN)).real();
  return out;
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)
// ---------------------------------------------------------------------------

namespace {

using Vec4 = std::array<double, 4>;

Vec4 to_vec(const ClassicalState& s) {
  return {s.a1.real(), s.a1.imag(), s.aN.real(), s.aN.imag()};
}

ClassicalState to_state(const Vec4& v) {
  return {Complex(v[0], v[1]), Complex(v[2], v[3])};
}

Vec4 deriv(const Vec4& v, const ModelSpec& model) {
  auto [d1, dN] = rhs(to_state(v), model);
  return {d1.real(), d1.imag(), dN.real(), dN.imag()};
}

struct Dopri5 {
  // Butcher tableau (Dormand & Prince 1980).
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  static constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0;
  static constexpr double e3 = 500.0 / 1113.0 - 7571.0 / 16695.0;
  static constexpr double e4 = 125.0 / 192.0 - 393.0 / 640.0;
  static constexpr double e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
  static constexpr double e6 = 11.0 / 84.0 - 187.0 / 2100.0;
  static constexpr double e7 = -1.0 / 40.0;
};

struct StepResult {
  Vec4 y;
  Vec4 k_last;   // FSAL stage, valid when accepted
  double error;  // weighted RMS error estimate
};

StepResult dopri5_step(const Vec4& y, const Vec4& k1, double h, const ModelSpec& model,
                       double tol) {
  using D = Dopri5;
  Vec4 k2, k3, k4, k5, k6, k7, tmp, y5;
  for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * D::a21 * k1[i];
  k2 = deriv(tmp, model);
  for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (D::a31 * k1[i] + D::a32 * k2[i]);
  k3 = deriv(tmp, model);
  for (int i = 0; i < 4; ++i)
    tmp[i] = y[i] + h * (D::a41 * k1[i] + D::a42 * k2[i] + D::a43 * k3[i]);
  k4 = deriv(tmp, model);
  for (int i = 0; i < 4; ++i)
    tmp[i] = y[i] + h * (D::a51 * k1[i] + D::a52 * k2[i] + D::a53 * k3[i] + D::a54 * k4[i]);
  k5 = deriv(tmp, model);
  for (int i = 0; i < 4; ++i)
    tmp[i] = y[i] + h * (D::a61 * k1[i] + D::a62 * k2[i] + D::a63 * k3[i] + D::a64 * k4[i] +
                         D::a65 * k5[i]);
  k6 = deriv(tmp, model);
  for (int i = 0; i < 4; ++i)
    y5[i] = y[i] +
            h * (D::b1 * k1[i] + D::b3 * k3[i] + D::b4 * k4[i] + D::b5 * k5[i] + D::b6 * k6[i]);
  k7 = deriv(y5, model);

  double err_sq = 0.0;
  for (int i = 0; i < 4; ++i) {
    double err = h * (D::e1 * k1[i] + D::e3 * k3[i] + D::e4 * k4[i] + D::e5 * k5[i] +
                      D::e6 * k6[i] + D::e7 * k7[i]);
    double scale = tol + tol * std::max(std::abs(y[i]), std::abs(y5[i]));
    err_sq += (err / scale) * (err / scale);
  }
  return {y5, k7, std::sqrt(err_sq / 4.0)};
}

// Advances through `times` (ascending, nonnegative) calling emit(index, state).
template <typename Emit>
void integrate_grid(const ClassicalState& s0, const ModelSpec& model,
                    const std::vector<double>& times, double tol, Emit&& emit) {
  if (times.empty()) return;
  if (!(tol > 0.0)) fail(errc::invalid_argument, "integrate: tol must be > 0");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i + 1] >= times[i]))
      fail(errc::invalid_argument, "integrate: sample times must be ascending");

  Vec4 y = to_vec(s0);
  double t = 0.0;
  std::size_t next = 0;
  while (next < times.size() && times[next] <= 0.0) emit(next++, s0);
  if (next >= times.size()) return;

  Vec4 k1 = deriv(y, model);
  // Initial step: crude first guess refined by the controller.
  double scale = std::max({std::abs(y[0]), std::abs(y[1]), std::abs(y[2]), std::abs(y[3]), 1e-3});
  double dscale = std::max({std::abs(k1[0]), std::abs(k1[1]), std::abs(k1[2]), std::abs(k1[3])});
  double h = (dscale > 0.0) ? 0.01 * scale / dscale : 1e-3;
  h = std::min(h, times.back());

  const double t_end = times.back();
  int rejected_in_a_row = 0;
  while (t < t_end) {
    bool clipped = false;
    double step = h;
    if (t + step >= times[next]) {
      step = times[next] - t;
      clipped = true;
    }
    if (step <= std::abs(t) * 1e-15 + 1e-300)
      fail(errc::numerical, "integrate: step size underflow at t=" + std::to_string(t));

    StepResult res = dopri5_step(y, k1, step, model, tol);
    if (res.error <= 1.0) {
      t = clipped ? times[next] : t + step;
      y = res.y;
      k1 = res.k_last;
      rejected_in_a_row = 0;
      double factor = (res.error > 0.0) ? 0.9 * std::pow(res.error, -0.2) : 5.0;
      if (clipped) {
        // Landed exactly on a sample time; the clipped span says nothing
        // about the stable step, so keep the previous h unless shrinking.
        while (next < times.size() && times[next] <= t) emit(next++, to_state(y));
        if (next >= times.size()) return;
        h = std::max(h, step * std::clamp(factor, 0.2, 5.0));
      } else {
        h = step * std::clamp(factor, 0.2, 5.0);
      }
    } else {
      double factor = 0.9 * std::pow(res.error, -0.2);
      h = step * std::clamp(factor, 0.1, 0.9);
      if (++rejected_in_a_row > 60)
        fail(errc::numerical, "integrate: repeated step rejection at t=" + std::to_string(t));
    }
  }
}

}  // namespace

TrajectoryRecord integrate(const ClassicalState& s0, const ModelSpec& model, double t_end,
                           double tol, int samples) {
  if (samples < 1) fail(errc::invalid_argument, "integrate: samples must be >= 1");
  if (!(t_end >= 0.0)) fail(errc::invalid_argument, "integrate: t_end must be >= 0");
  TrajectoryRecord record;
  record.model = model;
  record.times.resize(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) record.times[i] = t_end * i / samples;
  record.states.resize(record.times.size());
  integrate_grid(s0, model, record.times, tol,
                 [&](std::size_t i, const ClassicalState& s) { record.states[i] = s; });
  return record;
}

std::vector<ClassicalState> integrate_times(const ClassicalState& s0, const ModelSpec& model,
                                            const std::vector<double>& times, double tol) {
  std::vector<ClassicalState> states(times.size());
  integrate_grid(s0, model, times, tol,
                 [&](std::size_t i, const ClassicalState& s) { states[i] = s; });
  return states;
}

// ---------------------------------------------------------------------------
// Closed-form N = 2 solution
// ---------------------------------------------------------------------------

std::array<double, 3> cubic_roots(double E, double Gamma) {
  if (!(E >= 0.0)) fail(errc::invalid_argument, "cubic_roots: E must be >= 0");
  const double G2 = Gamma * Gamma;
  if (E <= 0.0) {
    if (G2 > 0.0) fail(errc::invalid_argument, "cubic_roots: Gamma nonzero at E = 0");
    return {0.0, 0.0, 0.0};
  }
  // n (E - 2n)^2 - Gamma^2 = 4 n^3 - 4 E n^2 + E^2 n - Gamma^2; physical pairs
  // satisfy Gamma^2 <= 2 E^3 / 27 which is the three-real-roots condition.
  if (G2 > 2.0 * E * E * E / 27.0 * (1.0 + 1e-9))
    fail(errc::invalid_argument, "cubic_roots: complex roots (unphysical E, Gamma)");

  // Depressed form u^3 + p u + q with n = u + E/3.
  const double p = -E * E / 12.0;
  const double q = E * E * E / 108.0 - G2 / 4.0;
  const double radius = 2.0 * std::sqrt(-p / 3.0);  // = E/3
  double cos_arg = std::clamp(3.0 * q / (p * radius), -1.0, 1.0);
  double phi = std::acos(cos_arg) / 3.0;

  std::array<double, 3> roots;
  for (int k = 0; k < 3; ++k) roots[k] = E / 3.0 + radius * std::cos(phi - 2.0 * M_PI * k / 3.0);
  std::sort(roots.begin(), roots.end(), std::greater<double>());

  // Newton polish against the monic cubic.
  for (double& root : roots) {
    for (int it = 0; it < 3; ++it) {
      double f = ((4.0 * root - 4.0 * E) * root + E * E) * root - G2;
      double df = (12.0 * root - 8.0 * E) * root + E * E;
      if (df == 0.0) break;
      root -= f / df;
    }
  }
  std::sort(roots.begin(), roots.end(), std::greater<double>());
  if (roots[2] < 0.0 && roots[2] > -1e-12 * E) roots[2] = 0.0;
  return roots;
}

EllipticParams shg_elliptic_params(const ClassicalState& s0, double g) {
  MotionIntegrals integrals = integrals_of_motion(s0, ModelSpec{2, 1.0});
  auto [a, b, c] = cubic_roots(integrals.E, integrals.Gamma);

  EllipticParams params;
  params.a = a;
  params.b = b;
  params.c = c;

  const double scale = std::max(integrals.E, 1.0);
  if (b - c <= 1e-13 * scale || a - c <= 1e-13 * scale) {
    params.constant = true;
    params.k = 0.0;
    return params;
  }
  params.k = std::sqrt((b - c) / (a - c));

  double n20 = std::clamp(s0.nN(), c, b);
  double s = std::sqrt((n20 - c) / (b - c));
  if (params.k >= 1.0 - 1e-12 && s >= 1.0 - 1e-12) {
    // Separatrix maximum: the state sits at the stationary point.
    params.constant = true;
    return params;
  }
  double u0 = inverse_sn(std::min(s, 1.0), std::min(params.k, 1.0));
  double n2_rate = 2.0 * g * (s0.a1 * s0.a1 * std::conj(s0.aN)).imag();
  if (n2_rate < 0.0) u0 = -u0;
  params.t0 = -u0 / (2.0 * g * std::sqrt(a - c));
  return params;
}

double shg_elliptic_solution(const ClassicalState& s0, double g, double t) {
  EllipticParams params = shg_elliptic_params(s0, g);
  if (params.constant) return s0.nN();
  double u = 2.0 * g * std::sqrt(params.a - params.c) * (t - params.t0);
  double sn = jacobi_sn(u, params.k);
  return params.c + (params.b - params.c) * sn * sn;
}

ClassicalState net_solution(const ModelSpec& model, double r, double t) {
  if (!(r > 0.0)) fail(errc::invalid_argument, "net_solution: r must be > 0");
  const int N = model.order;
  double r1 = N * r;
  double rate = model.coupling * t * std::pow(r1, N - 1);
  ClassicalState s;
  s.a1 = std::polar(r1, -rate);
  s.aN = std::polar(r, -double(N) * rate);
  return s;
}

}  // namespace hgsim
