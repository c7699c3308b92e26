#ifndef HGSIM_OBSERVABLES_HPP
#define HGSIM_OBSERVABLES_HPP

#include <vector>

#include "hgsim/quantum.hpp"
#include "hgsim/types.hpp"

namespace hgsim {

struct PhotonMoments {
  double mean = 0.0;    // <n>
  double second = 0.0;  // <n^2>
};

/// Fano factor (variance over mean). Undefined for mean = 0 (vacuum).
double fano(const PhotonMoments& m);

/// Global Fano factor from trapezoidal time averages of the instantaneous
/// moments on a uniform grid over [0, T]: (<<n^2>> - <<n>>^2) / <<n>>.
double global_fano(const std::vector<double>& means, const std::vector<double>& seconds);

/// Quadrature variance S = <[Delta(a e^{-i angle} + a^dag e^{i angle})]^2>.
/// Coherent states give 1 (shot-noise limit); Fock |n> gives 2n + 1.
double quadrature_variance(const LadderMoments& m, double angle);
double quadrature_variance(const DensityMatrix& rho, double angle);
double quadrature_variance(const TwoModeFockState& state, int mode, double angle);

struct QGridSpec {
  Complex center{0.0, 0.0};
  double half_extent = 4.0;
  int resolution = 201;  // points per axis
};

/// Husimi function sampled on a square grid; values[iy * resolution + ix]
/// holds Q(center + x_ix + i y_iy), both axes running from -half_extent to
/// +half_extent.
struct QGrid {
  QGridSpec spec;
  std::vector<double> values;

  double axis_value(int index) const {
    return -spec.half_extent + 2.0 * spec.half_extent * index / (spec.resolution - 1);
  }
  Complex point(int ix, int iy) const {
    return spec.center + Complex(axis_value(ix), axis_value(iy));
  }
  double cell_area() const {
    double step = 2.0 * spec.half_extent / (spec.resolution - 1);
    return step * step;
  }
  double total_mass() const;
};

/// Q(beta) = <beta|rho|beta> / pi on the grid, via the coherent-overlap
/// recurrence <n|beta> = <n-1|beta> beta / sqrt(n).
QGrid husimi_q(const DensityMatrix& rho, const QGridSpec& spec, int threads = 1);

/// Grid spec covering the classical circle of the state: origin-centered,
/// half extent sqrt(<n>) + 4 vacuum widths.
QGridSpec default_grid_for(const DensityMatrix& rho, int resolution = 201);

/// Q mass per angular sector (about the grid center), `sectors` equal slices.
std::vector<double> sector_masses(const QGrid& grid, int sectors = 32);

}  // namespace hgsim

#endif
