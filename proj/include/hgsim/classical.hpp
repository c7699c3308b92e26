#ifndef HGSIM_CLASSICAL_HPP
#define HGSIM_CLASSICAL_HPP

#include <array>
#include <utility>
#include <vector>

#include "hgsim/types.hpp"

namespace hgsim {

struct ClassicalState {
  Complex a1{0.0, 0.0};
  Complex aN{0.0, 0.0};

  double n1() const { return std::norm(a1); }
  double nN() const { return std::norm(aN); }
};

/// Coupled-mode equations of Nth-harmonic generation:
/// da1/dt = -i g N conj(a1)^{N-1} aN,  daN/dt = -i g a1^N.
std::pair<Complex, Complex> rhs(const ClassicalState& s, const ModelSpec& model);

/// E = n1 + N nN and Gamma = Re[a1^N conj(aN)] (= r1^N rN cos theta, but
/// defined at zero amplitudes too). Both are conserved by the flow.
struct MotionIntegrals {
  double E = 0.0;
  double Gamma = 0.0;
};
MotionIntegrals integrals_of_motion(const ClassicalState& s, const ModelSpec& model);

struct TrajectoryRecord {
  ModelSpec model{};
  std::vector<double> times;  // plain time; gt = coupling * t
  std::vector<ClassicalState> states;
};

/// Adaptive Dormand-Prince 5(4) integration in the Cartesian complex
/// representation (robust at mode-vacuum crossings), sampled on a uniform
/// grid of `samples`+1 points over [0, t_end]. atol = rtol = tol.
TrajectoryRecord integrate(const ClassicalState& s0, const ModelSpec& model, double t_end,
                           double tol = 1e-10, int samples = 200);

/// Same integration sampled at the given ascending times (first >= 0).
std::vector<ClassicalState> integrate_times(const ClassicalState& s0, const ModelSpec& model,
                                            const std::vector<double>& times, double tol = 1e-10);

/// Roots of n (E - 2n)^2 - Gamma^2 = 0 sorted a >= b >= c >= 0 (the N = 2
/// intensity cubic). Throws when the cubic has complex roots (unphysical
/// E, Gamma pair).
std::array<double, 3> cubic_roots(double E, double Gamma);

/// Closed-form parameters of the N = 2 intensity oscillation
/// n2(t) = c + (b - c) sn^2[2 g sqrt(a-c) (t - t0), k], k^2 = (b-c)/(a-c).
struct EllipticParams {
  double a = 0.0, b = 0.0, c = 0.0;
  double k = 0.0;
  double t0 = 0.0;
  bool constant = false;  // degenerate b = c (no oscillation)
};
EllipticParams shg_elliptic_params(const ClassicalState& s0, double g);

/// Harmonic intensity n2(t) of second-harmonic generation from the closed
/// form; branch fixed by n2(0) and the sign of dn2/dt(0).
double shg_elliptic_solution(const ClassicalState& s0, double g, double t);

/// No-energy-transfer solution for r1 = N r, theta = 0:
/// a1(t) = N r e^{-i g t (N r)^{N-1}}, aN(t) = r e^{-i N g t (N r)^{N-1}}.
ClassicalState net_solution(const ModelSpec& model, double r, double t);

}  // namespace hgsim

#endif
