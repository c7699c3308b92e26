#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hgsim/tridiag.hpp"
#include "hgsim/types.hpp"

using namespace hgsim;

namespace {

double reconstruction_residual(const std::vector<double>& diag,
                               const std::vector<double>& offdiag, const TridiagEigen& eig) {
  const int n = eig.dim;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double h = 0.0;
      if (i == j) h = diag[i];
      if (j == i + 1) h = offdiag[i];
      if (j == i - 1) h = offdiag[j];
      double rebuilt = 0.0;
      for (int k = 0; k < n; ++k) rebuilt += eig.vec(i, k) * eig.values[k] * eig.vec(j, k);
      num += (rebuilt - h) * (rebuilt - h);
      den += h * h;
    }
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

double orthogonality_error(const TridiagEigen& eig) {
  const int n = eig.dim;
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += eig.vec(i, a) * eig.vec(i, b);
      worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("1x1 zero matrix") {
  auto eig = tridiag_eigen({0.0}, {});
  CHECK(eig.values[0] == 0.0);
  CHECK(eig.vec(0, 0) == 1.0);
}

TEST_CASE("2x2 antidiagonal coupling sqrt(2)") {
  auto eig = tridiag_eigen({0.0, 0.0}, {std::sqrt(2.0)});
  CHECK(eig.values[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
  CHECK(eig.values[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(orthogonality_error(eig) < 1e-14);
}

TEST_CASE("3x3 with offdiag (sqrt 12, 2) has spectrum (-4, 0, 4)") {
  // Characteristic polynomial lambda (lambda^2 - 16) = 0.
  auto eig = tridiag_eigen({0.0, 0.0, 0.0}, {std::sqrt(12.0), 2.0});
  CHECK(eig.values[0] == doctest::Approx(-4.0).epsilon(1e-13));
  CHECK(std::abs(eig.values[1]) < 1e-13);
  CHECK(eig.values[2] == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("random 50x50: reconstruction within 1e-9 relative") {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> uni(0.1, 5.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> diag(50, 0.0), offdiag(49);
    for (auto& e : offdiag) e = uni(gen);
    auto eig = tridiag_eigen(diag, offdiag);
    CHECK(reconstruction_residual(diag, offdiag, eig) < 1e-9);
    CHECK(orthogonality_error(eig) < 1e-10);
  }
}

TEST_CASE("zero-diagonal spectra are symmetric about zero") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> uni(0.5, 30.0);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 7 + 10 * trial;
    std::vector<double> diag(n, 0.0), offdiag(n - 1);
    for (auto& e : offdiag) e = uni(gen);
    auto eig = tridiag_eigen(diag, offdiag);
    double scale = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    for (int k = 0; k < n; ++k)
      CHECK(std::abs(eig.values[k] + eig.values[n - 1 - k]) < 1e-9 * scale);
  }
}

TEST_CASE("positive off-diagonals give simple spectra") {
  std::vector<double> diag(40, 0.0), offdiag(39);
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> uni(0.2, 4.0);
  for (auto& e : offdiag) e = uni(gen);
  auto eig = tridiag_eigen(diag, offdiag);
  for (int k = 0; k + 1 < 40; ++k) CHECK(eig.values[k + 1] - eig.values[k] > 1e-10);
}

TEST_CASE("iteration cap failure is reported, never silent") {
  std::vector<double> diag(12, 0.0), offdiag(11, 1.0);
  CHECK_THROWS_AS(tridiag_eigen(diag, offdiag, 0), Error);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(tridiag_eigen({}, {}), Error);
  CHECK_THROWS_AS(tridiag_eigen({0.0, 0.0}, {}), Error);
}
