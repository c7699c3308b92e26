#include "hgsim/analytic.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace hgsim {

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) fail(errc::invalid_argument, "Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::pair<Rational, Rational> net_fano(int order) {
  if (order < 1) fail(errc::invalid_argument, "net_fano: order must be >= 1");
  long long n = order;
  long long den = 2 * (n + 1) * (n + 1);
  return {Rational(6 * n * n + n + 1, den), Rational(2 * n * n + n + 5, den)};
}

double net_omega_bar(int order, double r) {
  return std::sqrt(2.0 * order * (order + 1)) * std::pow(order * r, order - 1);
}

NetFrequencies net_frequencies(int order, double r) {
  if (order < 2) fail(errc::invalid_argument, "net_frequencies: order must be >= 2");
  if (!(r > 0.0)) fail(errc::invalid_argument, "net_frequencies: r must be > 0");
  NetFrequencies out;
  out.omega_bar = net_omega_bar(order, r);
  out.delta_omega = std::sqrt(2.0 * order * (order + 1)) * std::pow(double(order), order - 1) *
                    std::pow(r, order - 2) * (order - 1.0) / (order + 1.0);
  out.t_osc = 2.0 * M_PI / out.omega_bar;
  out.t_rel = 2.0 * M_PI / out.delta_omega;
  return out;
}

double net_a2_mean(int order, double r, double sigma2) {
  double np1 = order + 1.0;
  return 4.0 * sigma2 * r * r * (2.0 * order * order + order + 1.0) / (np1 * np1);
}

double net_b2_mean(int order, double r, double sigma2) {
  double np1 = order + 1.0;
  return 8.0 * sigma2 * r * r / (np1 * np1);
}

NetPrediction net_prediction(int order, double r) {
  NetPrediction out;
  out.order = order;
  auto [f1, fn] = net_fano(order);
  out.f1s = f1;
  out.fns = fn;
  out.omega_bar = net_omega_bar(order, r);
  if (order >= 2) {
    NetFrequencies freq = net_frequencies(order, r);
    out.delta_omega = freq.delta_omega;
    out.t_osc = freq.t_osc;
    out.t_rel = freq.t_rel;
  } else {
    out.t_osc = 2.0 * M_PI / out.omega_bar;
    out.delta_omega = 0.0;
    out.t_rel = std::numeric_limits<double>::infinity();
  }
  out.a2_mean = net_a2_mean(order, r);
  out.b2_mean = net_b2_mean(order, r);
  return out;
}

std::pair<double, double> net_perturbative_intensity(int order, double r, double x1, double y1,
                                                     double xN, double yN, double gt) {
  const double N = order;
  // Perturbed total intensity E (the ensemble frequency dispersion in Omega
  // is exactly what dephases trajectories into the ring).
  double E = N * (N + 1.0) * r * r + 2.0 * N * (x1 + xN) * r +
             (x1 * x1 + y1 * y1 + N * (xN * xN + yN * yN));
  double omega =
      std::sqrt(2.0 * std::pow(N, N) * std::pow(E, N - 1.0) / std::pow(N + 1.0, N - 2.0));
  double dx = x1 - N * xN;
  double dy = y1 - yN;
  double A = r / (N + 1.0) * std::sqrt(4.0 * dx * dx + 2.0 * N * (N + 1.0) * dy * dy);
  double B = 2.0 / (N + 1.0) * r * (x1 + xN);
  double osc = A * std::sin(omega * gt);
  double nN = r * r + B + osc;
  double n1 = N * N * r * r + N * N * B - N * osc;
  return {n1, nN};
}

double ShortTimeCoefficients::evaluate(double gt) const {
  double out = 1.0;
  for (const auto& [power, coeff] : terms) out += coeff * std::pow(gt, power);
  return out;
}

ShortTimeCoefficients shg_fano_coefficients(int mode, double r1, double r2, double theta) {
  if (!(r1 > 0.0) || !(r2 > 0.0))
    fail(errc::invalid_argument, "shg_fano_coefficients: requires r1, r2 > 0");
  ShortTimeCoefficients out;
  out.mode = mode;
  if (mode == 1) {
    out.terms.push_back({1, -4.0 * std::sin(theta) * r2});
    out.terms.push_back({2, 4.0 * r2 * r2 / (r1 * r1) - 2.0 * r1 * r1 +
                                8.0 * (2.0 + std::cos(2.0 * theta)) * r2 * r2});
  } else if (mode == 2) {
    out.terms.push_back({3, -16.0 / 3.0 * std::sin(theta) * r1 * r1 * r2});
    out.terms.push_back(
        {4, 4.0 / 3.0 *
                (2.0 * r2 * r2 + 16.0 * r1 * r1 * r2 * r2 -
                 (4.0 + 3.0 * std::cos(2.0 * theta)) * r1 * r1 * r1 * r1)});
  } else {
    fail(errc::invalid_argument, "shg_fano_coefficients: mode must be 1 or 2");
  }
  return out;
}

std::pair<double, double> short_time_fano_shg(double r1, double r2, double theta, double gt) {
  return {shg_fano_coefficients(1, r1, r2, theta).evaluate(gt),
          shg_fano_coefficients(2, r1, r2, theta).evaluate(gt)};
}

SpontaneousShortTime short_time_fano_spontaneous(double r1, double gt) {
  if (!(r1 > 0.0)) fail(errc::invalid_argument, "short_time_fano_spontaneous: requires r1 > 0");
  SpontaneousShortTime out;
  const double r2 = r1 * r1;
  const double tau2 = gt * gt;
  const double tau4 = tau2 * tau2;
  out.f1 = 1.0 - 2.0 * r2 * tau2 + 4.0 / 3.0 * r2 * (3.0 * r2 + 1.0) * tau4;
  out.f2 = 1.0 - 4.0 / 3.0 * r2 * r2 * tau4 +
           4.0 / 45.0 * r2 * r2 * (36.0 * r2 + 17.0) * tau4 * tau2;
  out.normally_ordered_var1 = -2.0 * r2 * r2 * tau2;
  out.normally_ordered_var2 = -4.0 / 3.0 * r2 * r2 * r2 * r2 * tau4 * tau2;
  return out;
}

double short_time_fano_fundamental(int order, double r1, double rN, double theta, double gt) {
  if (order < 2) fail(errc::invalid_argument, "short_time_fano_fundamental: order must be >= 2");
  if (!(r1 > 0.0) || !(rN > 0.0))
    fail(errc::invalid_argument, "short_time_fano_fundamental: requires r1, rN > 0");
  return 1.0 -
         2.0 * order * (order - 1.0) * std::pow(r1, order - 2) * rN * std::sin(theta) * gt;
}

std::pair<double, double> short_time_fano_general(int order, double r1, double rN, double theta,
                                                  double gt) {
  double f1 = short_time_fano_fundamental(order, r1, rN, theta, gt);
  double s = std::sin(theta);
  double tau3 = gt * gt * gt;
  double fN;
  switch (order) {
    case 2:
      fN = shg_fano_coefficients(2, r1, rN, theta).evaluate(gt);
      break;
    case 3:
      fN = 1.0 - 36.0 * std::pow(r1, 3) * rN * (r1 * r1 + 2.0) * s * tau3;
      break;
    case 4:
      fN = 1.0 - 64.0 * std::pow(r1, 4) * rN *
                     (17.0 + 12.0 * r1 * r1 + 2.0 * std::pow(r1, 4)) * s * tau3;
      break;
    default:
      fail(errc::invalid_argument,
           "short_time_fano_general: harmonic expansion only printed for orders 2-4");
  }
  return {f1, fN};
}

}  // namespace hgsim
