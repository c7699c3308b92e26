#ifndef HGSIM_ANALYTIC_HPP
#define HGSIM_ANALYTIC_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hgsim/types.hpp"

namespace hgsim {

/// Exact rational, always reduced, positive denominator.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  bool operator==(const Rational& other) const { return num == other.num && den == other.den; }
};

/// Quasi-stationary semiclassical Fano factors in the no-energy-transfer
/// regime: F1 = (6N^2+N+1)/(2(N+1)^2), FN = (2N^2+N+5)/(2(N+1)^2).
std::pair<Rational, Rational> net_fano(int order);

/// Mean oscillation frequency and its spread across the noise ensemble,
/// with the derived oscillation/relaxation periods.
struct NetFrequencies {
  double omega_bar = 0.0;    // sqrt(2N(N+1)) (N r)^{N-1}
  double delta_omega = 0.0;  // sqrt(2N(N+1)) N^{N-1} r^{N-2} (N-1)/(N+1)
  double t_osc = 0.0;        // 2 pi / omega_bar
  double t_rel = 0.0;        // 2 pi / delta_omega
};
NetFrequencies net_frequencies(int order, double r);

/// omega_bar alone, defined for every order >= 1 (delta_omega vanishes at
/// order 1, so NetFrequencies requires order >= 2).
double net_omega_bar(int order, double r);

/// Ensemble second moments of the perturbation amplitudes at noise variance
/// sigma2 per quadrature: A2 = 4 sigma2 r^2 (2N^2+N+1)/(N+1)^2,
/// B2 = 8 sigma2 r^2 / (N+1)^2.
double net_a2_mean(int order, double r, double sigma2 = 0.25);
double net_b2_mean(int order, double r, double sigma2 = 0.25);

/// Everything the closed-form no-energy-transfer analysis predicts at
/// sigma2 = 1/4.
struct NetPrediction {
  int order = 2;
  Rational f1s;
  Rational fns;
  double omega_bar = 0.0;
  double delta_omega = 0.0;
  double t_osc = 0.0;
  double t_rel = 0.0;
  double a2_mean = 0.0;
  double b2_mean = 0.0;
};
NetPrediction net_prediction(int order, double r);

/// Perturbed intensities of one noisy trajectory near the NET point:
/// nN = r^2 + B + A sin(Omega gt), n1 = N^2 r^2 + N^2 B - N A sin(Omega gt),
/// with Omega evaluated at the perturbed total intensity E.
std::pair<double, double> net_perturbative_intensity(int order, double r, double x1, double y1,
                                                     double xN, double yN, double gt);

/// Short-time expansion of a Fano factor: 1 + sum coeff * (gt)^power.
struct ShortTimeCoefficients {
  int mode = 1;  // 1 or N
  std::vector<std::pair<int, double>> terms;

  double evaluate(double gt) const;
};

/// Second-harmonic expansions for coherent inputs (r1, r2 > 0):
/// F1 to (gt)^2 and F2 to (gt)^4.
ShortTimeCoefficients shg_fano_coefficients(int mode, double r1, double r2, double theta);
std::pair<double, double> short_time_fano_shg(double r1, double r2, double theta, double gt);

/// Spontaneous process (r2 = 0): Fano factors and normally-ordered
/// photon-number variances.
struct SpontaneousShortTime {
  double f1 = 1.0;
  double f2 = 1.0;
  double normally_ordered_var1 = 0.0;
  double normally_ordered_var2 = 0.0;
};
SpontaneousShortTime short_time_fano_spontaneous(double r1, double gt);

/// Fundamental-mode leading term, valid for every order >= 2:
/// F1 = 1 - 2N(N-1) r1^{N-2} rN sin(theta) gt.
double short_time_fano_fundamental(int order, double r1, double rN, double theta, double gt);

/// Fundamental and harmonic branch; the harmonic expansion is only printed
/// for orders 2-4, other orders are rejected.
std::pair<double, double> short_time_fano_general(int order, double r1, double rN, double theta,
                                                  double gt);

}  // namespace hgsim

#endif
