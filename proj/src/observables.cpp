#include "hgsim/observables.hpp"

#include <cmath>

#include "hgsim/parallel.hpp"

namespace hgsim {

double fano(const PhotonMoments& m) {
  if (!(m.mean > 0.0))
    fail(errc::invalid_argument, "fano: undefined for zero mean photon number");
  return (m.second - m.mean * m.mean) / m.mean;
}

namespace {

double trapezoid_mean(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  Accumulator acc;
  acc.add(0.5 * samples.front());
  for (std::size_t i = 1; i + 1 < n; ++i) acc.add(samples[i]);
  acc.add(0.5 * samples.back());
  return acc.total() / static_cast<double>(n - 1);
}

}  // namespace

double global_fano(const std::vector<double>& means, const std::vector<double>& seconds) {
  if (means.size() < 2 || means.size() != seconds.size())
    fail(errc::invalid_argument, "global_fano: need >= 2 samples on a uniform grid");
  double mean_avg = trapezoid_mean(means);
  double second_avg = trapezoid_mean(seconds);
  if (!(mean_avg > 0.0)) fail(errc::invalid_argument, "global_fano: undefined for zero mean");
  return (second_avg - mean_avg * mean_avg) / mean_avg;
}

double quadrature_variance(const LadderMoments& m, double angle) {
  Complex rot(std::cos(-angle), std::sin(-angle));
  Complex mean_a = m.a * rot;
  Complex mean_a2 = m.a_squared * rot * rot;
  return 2.0 * (mean_a2 - mean_a * mean_a).real() + 2.0 * (m.n - std::norm(m.a)) + 1.0;
}

double quadrature_variance(const DensityMatrix& rho, double angle) {
  LadderMoments m;
  Complex a(0.0, 0.0), a2(0.0, 0.0);
  double n = 0.0, n2 = 0.0;
  for (int row = 0; row < rho.dim; ++row) {
    double diag = rho.at(row, row).real();
    n += diag * row;
    n2 += diag * double(row) * row;
    // <a> = sum_n sqrt(n) rho(n, n-1); <a^2> = sum_n sqrt(n(n-1)) rho(n, n-2)
    if (row >= 1) a += std::sqrt(double(row)) * rho.at(row, row - 1);
    if (row >= 2) a2 += std::sqrt(double(row) * (row - 1)) * rho.at(row, row - 2);
  }
  m.a = a;
  m.a_squared = a2;
  m.n = n;
  m.n2 = n2;
  return quadrature_variance(m, angle);
}

double quadrature_variance(const TwoModeFockState& state, int mode, double angle) {
  return quadrature_variance(ladder_moments(state, mode), angle);
}

double QGrid::total_mass() const {
  Accumulator acc;
  for (double q : values) acc.add(q);
  return acc.total() * cell_area();
}

QGrid husimi_q(const DensityMatrix& rho, const QGridSpec& spec, int threads) {
  if (spec.resolution < 2) fail(errc::invalid_argument, "husimi_q: resolution must be >= 2");
  QGrid grid;
  grid.spec = spec;
  grid.values.assign(static_cast<std::size_t>(spec.resolution) * spec.resolution, 0.0);

  parallel_for(static_cast<std::size_t>(spec.resolution), threads, [&](std::size_t iy) {
    std::vector<Complex> overlap(static_cast<std::size_t>(rho.dim));
    std::vector<Complex> rho_v(static_cast<std::size_t>(rho.dim));
    for (int ix = 0; ix < spec.resolution; ++ix) {
      Complex beta = grid.point(ix, static_cast<int>(iy));
      overlap[0] = Complex(std::exp(-0.5 * std::norm(beta)), 0.0);
      for (int n = 1; n < rho.dim; ++n) overlap[n] = overlap[n - 1] * beta / std::sqrt(double(n));
      for (int row = 0; row < rho.dim; ++row) {
        Complex sum(0.0, 0.0);
        const Complex* rrow = &rho.elems[static_cast<std::size_t>(row) * rho.dim];
        for (int col = 0; col < rho.dim; ++col) sum += rrow[col] * overlap[col];
        rho_v[row] = sum;
      }
      Complex q(0.0, 0.0);
      for (int row = 0; row < rho.dim; ++row) q += std::conj(overlap[row]) * rho_v[row];
      grid.values[iy * spec.resolution + ix] = q.real() / M_PI;
    }
  });
  return grid;
}

QGridSpec default_grid_for(const DensityMatrix& rho, int resolution) {
  double n_mean = 0.0;
  for (int i = 0; i < rho.dim; ++i) n_mean += rho.at(i, i).real() * i;
  QGridSpec spec;
  spec.center = Complex(0.0, 0.0);
  spec.half_extent = std::sqrt(std::max(n_mean, 0.0)) + 4.0;
  spec.resolution = resolution;
  return spec;
}

std::vector<double> sector_masses(const QGrid& grid, int sectors) {
  std::vector<double> mass(static_cast<std::size_t>(sectors), 0.0);
  const double cell = grid.cell_area();
  for (int iy = 0; iy < grid.spec.resolution; ++iy) {
    for (int ix = 0; ix < grid.spec.resolution; ++ix) {
      Complex rel = grid.point(ix, iy) - grid.spec.center;
      double angle = std::atan2(rel.imag(), rel.real());  // [-pi, pi]
      int sector = static_cast<int>((angle + M_PI) / (2.0 * M_PI) * sectors);
      sector = std::min(std::max(sector, 0), sectors - 1);
      mass[sector] += grid.values[static_cast<std::size_t>(iy) * grid.spec.resolution + ix] * cell;
    }
  }
  return mass;
}

}  // namespace hgsim
