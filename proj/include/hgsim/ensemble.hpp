#ifndef HGSIM_ENSEMBLE_HPP
#define HGSIM_ENSEMBLE_HPP

#include <cstdint>
#include <vector>

#include "hgsim/classical.hpp"
#include "hgsim/types.hpp"

namespace hgsim {

/// Gaussian vacuum noise seeded on the coherent amplitudes: independent
/// x, y per mode with variance sigma2 per quadrature component.
struct NoiseSpec {
  double sigma2 = 0.25;
  std::uint64_t seed = 0;
  int count = 1;

  void validate() const {
    if (!(sigma2 > 0.0)) fail(errc::invalid_argument, "noise.sigma2: must be > 0");
    if (count < 1) fail(errc::invalid_argument, "noise.count: must be >= 1");
  }
};

/// alpha_k = center_k + x_k + i y_k, one draw per trajectory; trajectory i
/// draws from counter stream (seed, i), so the list is reproducible and
/// order-stable under any parallel schedule.
std::vector<ClassicalState> sample_initial(const CoherentInput& input, const NoiseSpec& noise);

/// Ensemble statistics per grid time; semiclassical Fano factors and
/// quadrature variances from the trajectory cloud.
struct EnsembleStats {
  std::vector<double> gt;  // dimensionless time grid
  std::vector<double> n1_mean, n1_second, f1, s1;
  std::vector<double> nN_mean, nN_second, fN, sN;
};

struct CloudSnapshot {
  double gt = 0.0;
  int mode = 1;
  std::vector<Complex> points;  // one per trajectory, in trajectory order
};

struct EnsembleResult {
  EnsembleStats stats;
  std::vector<CloudSnapshot> snapshots;  // both modes per requested time
};

/// Integrates every sampled trajectory over the gt grid and averages the
/// observables. Accumulation is compensated and chunked in trajectory-index
/// order with a fixed chunk size, so results are bitwise identical for any
/// worker count. Integrator failures carry the trajectory index.
EnsembleResult run_ensemble(const std::vector<ClassicalState>& samples, const ModelSpec& model,
                            const std::vector<double>& gt_grid,
                            const std::vector<double>& snapshot_gts, double quadrature_angle,
                            double tol, int threads);

/// Radial statistics about the phase-space origin and the fraction of
/// `sectors` equal angular sectors holding at least one point.
struct RingMetrics {
  double radial_mean = 0.0;
  double radial_variance = 0.0;
  double angular_coverage = 0.0;
};
RingMetrics cloud_ring_metrics(const CloudSnapshot& snapshot, int sectors = 32);

}  // namespace hgsim

#endif
