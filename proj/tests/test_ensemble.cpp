#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hgsim/ensemble.hpp"

using namespace hgsim;

namespace {

CoherentInput make_input(int order, Complex a1, Complex aN) {
  CoherentInput input;
  input.model = ModelSpec{order, 1.0};
  input.alpha1 = a1;
  input.alphaN = aN;
  return input;
}

}  // namespace

TEST_CASE("sampling: degenerate noise reproduces the centers") {
  CoherentInput input = make_input(2, Complex(2.0, 1.0), Complex(-0.5, 0.3));
  NoiseSpec noise{1e-18, 7, 50};
  auto samples = sample_initial(input, noise);
  REQUIRE(samples.size() == 50);
  for (const auto& s : samples) {
    CHECK(std::abs(s.a1 - input.alpha1) < 1e-8);
    CHECK(std::abs(s.aN - input.alphaN) < 1e-8);
  }
}

TEST_CASE("sampling: identical list for a fixed seed") {
  CoherentInput input = make_input(2, Complex(2.0, 0.0), Complex(1.0, 0.0));
  NoiseSpec noise{0.25, 42, 10};
  auto a = sample_initial(input, noise);
  auto b = sample_initial(input, noise);
  for (int i = 0; i < 10; ++i) {
    CHECK(a[i].a1 == b[i].a1);
    CHECK(a[i].aN == b[i].aN);
  }
  NoiseSpec other{0.25, 43, 10};
  auto c = sample_initial(input, other);
  bool any_different = false;
  for (int i = 0; i < 10; ++i) any_different |= (a[i].a1 != c[i].a1);
  CHECK(any_different);
}

TEST_CASE("sampling: variance matches sigma2 at one million draws") {
  CoherentInput input = make_input(2, Complex(6.0, 0.0), Complex(3.0, 0.0));
  NoiseSpec noise{0.25, 2024, 1000000};
  auto samples = sample_initial(input, noise);
  double mean = 0.0, second = 0.0;
  for (const auto& s : samples) {
    mean += s.a1.real();
    second += s.a1.real() * s.a1.real();
  }
  mean /= noise.count;
  second /= noise.count;
  double variance = second - mean * mean;
  CHECK(variance > 0.2475);  // 3 sigma band around 1/4
  CHECK(variance < 0.2525);
  CHECK(std::abs(mean - 6.0) < 3.0 * std::sqrt(0.25 / noise.count) + 1e-4);
}

TEST_CASE("ensemble: identical samples give zero semiclassical Fano") {
  CoherentInput input = make_input(2, Complex(2.0, 0.0), Complex(1.0, 0.0));
  std::vector<ClassicalState> samples(64, ClassicalState{Complex(2.0, 0.0), Complex(1.0, 0.0)});
  std::vector<double> grid{0.0, 0.5, 1.0};
  EnsembleResult result = run_ensemble(samples, input.model, grid, {}, 0.0, 1e-10, 2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(result.stats.f1[i]) < 1e-12);
    CHECK(std::abs(result.stats.fN[i]) < 1e-12);
    CHECK(std::abs(result.stats.s1[i]) < 1e-12);
  }
}

TEST_CASE("ensemble: strong-field start has unit Fano and quadrature variance") {
  // At t = 0 the cloud is the sampled Gaussian itself: S = 4 sigma2 = 1 and
  // F -> 1 as the field strengthens.
  const double r = 30.0;
  CoherentInput input = make_input(2, Complex(2.0 * r, 0.0), Complex(r, 0.0));
  NoiseSpec noise{0.25, 11, 100000};
  auto samples = sample_initial(input, noise);
  std::vector<double> grid{0.0};
  EnsembleResult result = run_ensemble(samples, input.model, grid, {}, 0.0, 1e-10, 2);

  double se = std::sqrt(2.0 / noise.count);  // relative MC error of a variance
  CHECK(std::abs(result.stats.f1[0] - 1.0) < 3.0 * se + 3.0 / (r * r));
  CHECK(std::abs(result.stats.fN[0] - 1.0) < 3.0 * se + 3.0 / (r * r));
  CHECK(std::abs(result.stats.s1[0] - 1.0) < 3.0 * se);
  CHECK(std::abs(result.stats.sN[0] - 1.0) < 3.0 * se);
}

TEST_CASE("ensemble: mean total quanta conserved along the grid") {
  CoherentInput input = make_input(2, Complex(4.0, 0.0), Complex(2.0, 0.0));
  NoiseSpec noise{0.25, 5, 400};
  auto samples = sample_initial(input, noise);
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.25 * i);
  EnsembleResult result = run_ensemble(samples, input.model, grid, {}, 0.0, 1e-10, 2);
  double e0 = result.stats.n1_mean[0] + 2.0 * result.stats.nN_mean[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    double e = result.stats.n1_mean[i] + 2.0 * result.stats.nN_mean[i];
    CHECK(std::abs(e - e0) < 1e-6 * e0);
  }
}

TEST_CASE("ensemble: permutation of the sample list leaves statistics unchanged") {
  CoherentInput input = make_input(2, Complex(3.0, 0.0), Complex(1.5, 0.0));
  NoiseSpec noise{0.25, 3, 300};
  auto samples = sample_initial(input, noise);
  auto shuffled = samples;
  std::reverse(shuffled.begin(), shuffled.end());
  std::vector<double> grid{0.0, 0.4, 0.8};
  EnsembleResult a = run_ensemble(samples, input.model, grid, {}, 0.0, 1e-10, 2);
  EnsembleResult b = run_ensemble(shuffled, input.model, grid, {}, 0.0, 1e-10, 2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.stats.f1[i] == doctest::Approx(b.stats.f1[i]).epsilon(1e-12));
    CHECK(a.stats.nN_second[i] == doctest::Approx(b.stats.nN_second[i]).epsilon(1e-12));
  }
}

TEST_CASE("ensemble: bitwise identical statistics for any worker count") {
  CoherentInput input = make_input(2, Complex(6.0, 0.0), Complex(3.0, 0.0));
  NoiseSpec noise{0.25, 99, 600};
  auto samples = sample_initial(input, noise);
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.2 * i);
  EnsembleResult a = run_ensemble(samples, input.model, grid, {1.0}, 0.0, 1e-9, 1);
  EnsembleResult b = run_ensemble(samples, input.model, grid, {1.0}, 0.0, 1e-9, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.stats.n1_mean[i] == b.stats.n1_mean[i]);
    CHECK(a.stats.n1_second[i] == b.stats.n1_second[i]);
    CHECK(a.stats.fN[i] == b.stats.fN[i]);
    CHECK(a.stats.sN[i] == b.stats.sN[i]);
  }
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t s = 0; s < a.snapshots.size(); ++s)
    for (std::size_t p = 0; p < a.snapshots[s].points.size(); ++p)
      CHECK(a.snapshots[s].points[p] == b.snapshots[s].points[p]);
}

TEST_CASE("ensemble: quadrature variances relax toward the ring values") {
  // Dephasing spreads the cloud around the circle, so S grows from the
  // shot-noise start toward 2 n + 1 (73 and 19 at alpha = (6, 3)).
  CoherentInput input = make_input(2, Complex(6.0, 0.0), Complex(3.0, 0.0));
  NoiseSpec noise{0.25, 17, 2000};
  auto samples = sample_initial(input, noise);
  std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 4.0};
  EnsembleResult result = run_ensemble(samples, input.model, grid, {}, 0.0, 1e-10, 2);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(result.stats.s1[i] >= result.stats.s1[i - 1] - 0.5);
    CHECK(result.stats.sN[i] >= result.stats.sN[i - 1] - 0.5);
  }
  CHECK(std::abs(result.stats.s1[0] - 1.0) < 0.2);
  CHECK(result.stats.s1.back() > 50.0);
  CHECK(result.stats.s1.back() < 85.0);
  CHECK(result.stats.sN.back() > 13.0);
  CHECK(result.stats.sN.back() < 23.0);
}

TEST_CASE("ring metrics: degenerate and synthetic clouds") {
  CloudSnapshot point_cloud;
  point_cloud.points.assign(100, Complex(1.0, 1.0));
  RingMetrics point = cloud_ring_metrics(point_cloud);
  CHECK(point.angular_coverage == doctest::Approx(1.0 / 32.0));
  CHECK(std::abs(point.radial_variance) < 1e-12);
  CHECK(point.radial_mean == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  CloudSnapshot ring;
  for (int i = 0; i < 256; ++i)
    ring.points.push_back(3.0 * std::polar(1.0, 2.0 * M_PI * i / 256.0));
  RingMetrics metrics = cloud_ring_metrics(ring);
  CHECK(metrics.angular_coverage == doctest::Approx(1.0));
  CHECK(metrics.radial_mean == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(metrics.radial_variance) < 1e-9);
}

TEST_CASE("ensemble: integrator failure carries the trajectory index") {
  std::vector<ClassicalState> samples(3, ClassicalState{Complex(1.0, 0.0), Complex(0.0, 0.0)});
  std::vector<double> grid{0.0, 1.0};
  CHECK_THROWS_WITH_AS(run_ensemble(samples, ModelSpec{2, 1.0}, grid, {}, 0.0, -1.0, 1),
                       doctest::Contains("trajectory 0"), Error);
}
