#include <doctest.h>

#include <cmath>
#include <vector>

#include "hgsim/fock.hpp"
#include "hgsim/observables.hpp"
#include "hgsim/quantum.hpp"

using namespace hgsim;

TEST_CASE("fano: Poissonian, number state, arithmetic") {
  CHECK(fano({4.0, 20.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fano({3.0, 9.0}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(fano({9.0, 90.5}) == doctest::Approx(9.5 / 9.0).epsilon(1e-15));
  CHECK_THROWS_AS(fano({0.0, 0.0}), Error);
}

TEST_CASE("global fano: constant series reduces to the instantaneous value") {
  std::vector<double> means(100, 4.0), seconds(100, 20.0);
  CHECK(std::abs(global_fano(means, seconds) - fano({4.0, 20.0})) < 1e-12);
}

TEST_CASE("global fano: sinusoidal mean with Poissonian spread") {
  // <n>(t) = 9 + sin t, <n^2> = <n>^2 + <n>, averaged over many periods:
  // <<n>> = 9, <<n^2>> = 81 + 1/2 + 9, so FG = 1 + (1/2)/9.
  const double T = 1000.0 * 2.0 * M_PI;
  const int samples = 200001;
  std::vector<double> means(samples), seconds(samples);
  for (int i = 0; i < samples; ++i) {
    double t = T * i / (samples - 1);
    double n = 9.0 + std::sin(t);
    means[i] = n;
    seconds[i] = n * n + n;
  }
  CHECK(std::abs(global_fano(means, seconds) - (1.0 + 0.5 / 9.0)) < 1e-3);
}

TEST_CASE("global fano: input validation") {
  CHECK_THROWS_AS(global_fano({1.0}, {2.0}), Error);
  CHECK_THROWS_AS(global_fano({0.0, 0.0}, {0.0, 0.0}), Error);
}

TEST_CASE("quadrature variance: coherent states sit at the shot-noise limit") {
  CoherentInput input;
  input.model = ModelSpec{2, 1.0};
  input.alpha1 = Complex(1.3, -0.8);
  input.alphaN = Complex(0.4, 0.9);
  TwoModeFockState state = prepare_product_state(input, 1e-13);
  for (double angle : {0.0, 0.7, 2.2}) {
    CHECK(std::abs(quadrature_variance(state, 1, angle) - 1.0) < 1e-8);
    CHECK(std::abs(quadrature_variance(state, 2, angle) - 1.0) < 1e-8);
  }
}

TEST_CASE("quadrature variance: Fock |1> gives 3 at every angle") {
  DensityMatrix rho;
  rho.dim = 3;
  rho.elems.assign(9, Complex(0.0, 0.0));
  rho.elems[1 * 3 + 1] = Complex(1.0, 0.0);  // |1><1|
  for (double angle : {0.0, 0.5, 1.9, 3.0})
    CHECK(quadrature_variance(rho, angle) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("quadrature variance: invariant under angle shift by pi") {
  DensityMatrix rho;
  rho.dim = 4;
  rho.elems.assign(16, Complex(0.0, 0.0));
  // mixed state with off-diagonal coherence
  rho.elems[0] = Complex(0.5, 0.0);
  rho.elems[1 * 4 + 1] = Complex(0.3, 0.0);
  rho.elems[2 * 4 + 2] = Complex(0.2, 0.0);
  rho.elems[0 * 4 + 1] = Complex(0.2, 0.1);
  rho.elems[1 * 4 + 0] = Complex(0.2, -0.1);
  for (double angle : {0.0, 0.3, 1.1})
    CHECK(std::abs(quadrature_variance(rho, angle) - quadrature_variance(rho, angle + M_PI)) <
          1e-12);
}

TEST_CASE("husimi: vacuum peaks at 1/pi") {
  DensityMatrix rho;
  rho.dim = 1;
  rho.elems = {Complex(1.0, 0.0)};
  QGridSpec spec;
  spec.half_extent = 3.0;
  spec.resolution = 61;  // odd, so the origin is a grid point
  QGrid grid = husimi_q(rho, spec);
  int center = 30 * 61 + 30;
  CHECK(grid.values[center] == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
  for (double q : grid.values) {
    CHECK(q >= 0.0);
    CHECK(q <= 1.0 / M_PI + 1e-12);
  }
}

TEST_CASE("husimi: coherent state reproduces the Gaussian overlap") {
  Complex alpha(1.2, -0.7);
  auto c = coherent_amplitudes(alpha, 40);
  DensityMatrix rho;
  rho.dim = 41;
  rho.elems.assign(41 * 41, Complex(0.0, 0.0));
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j) rho.elems[i * 41 + j] = c[i] * std::conj(c[j]);

  QGridSpec spec;
  spec.center = alpha;
  spec.half_extent = 2.5;
  spec.resolution = 21;
  QGrid grid = husimi_q(rho, spec);
  for (int iy = 0; iy < 21; ++iy)
    for (int ix = 0; ix < 21; ++ix) {
      Complex beta = grid.point(ix, iy);
      double expected = std::exp(-std::norm(beta - alpha)) / M_PI;
      CHECK(std::abs(grid.values[iy * 21 + ix] - expected) < 1e-8);
    }
}

TEST_CASE("husimi: grid mass grows monotonically toward 1 with the extent") {
  auto c = coherent_amplitudes(Complex(1.0, 0.5), 30);
  DensityMatrix rho;
  rho.dim = 31;
  rho.elems.assign(31 * 31, Complex(0.0, 0.0));
  for (int i = 0; i <= 30; ++i)
    for (int j = 0; j <= 30; ++j) rho.elems[i * 31 + j] = c[i] * std::conj(c[j]);

  double previous = 0.0;
  for (double extent : {1.5, 2.5, 4.0, 6.0}) {
    QGridSpec spec;
    spec.center = Complex(1.0, 0.5);
    spec.half_extent = extent;
    spec.resolution = 121;
    double mass = husimi_q(rho, spec).total_mass();
    CHECK(mass >= previous - 1e-9);
    CHECK(mass <= 1.0 + 1e-6);
    previous = mass;
  }
  CHECK(previous > 0.999);
}

TEST_CASE("husimi: deterministic across worker counts") {
  auto c = coherent_amplitudes(Complex(0.8, 0.1), 25);
  DensityMatrix rho;
  rho.dim = 26;
  rho.elems.assign(26 * 26, Complex(0.0, 0.0));
  for (int i = 0; i <= 25; ++i)
    for (int j = 0; j <= 25; ++j) rho.elems[i * 26 + j] = c[i] * std::conj(c[j]);
  QGridSpec spec;
  spec.half_extent = 3.0;
  spec.resolution = 41;
  QGrid a = husimi_q(rho, spec, 1);
  QGrid b = husimi_q(rho, spec, 4);
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("sector masses partition the grid total") {
  DensityMatrix rho;
  rho.dim = 1;
  rho.elems = {Complex(1.0, 0.0)};
  QGridSpec spec;
  spec.half_extent = 4.0;
  spec.resolution = 81;
  QGrid grid = husimi_q(rho, spec);
  auto masses = sector_masses(grid, 32);
  double total = 0.0;
  for (double m : masses) total += m;
  CHECK(total == doctest::Approx(grid.total_mass()).epsilon(1e-10));
}
