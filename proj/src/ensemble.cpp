#include "hgsim/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "hgsim/parallel.hpp"
#include "hgsim/rng.hpp"

namespace hgsim {

std::vector<ClassicalState> sample_initial(const CoherentInput& input, const NoiseSpec& noise) {
  input.validate();
  noise.validate();
  double sigma = std::sqrt(noise.sigma2);
  std::vector<ClassicalState> samples(static_cast<std::size_t>(noise.count));
  for (int i = 0; i < noise.count; ++i) {
    CounterRng rng(noise.seed, static_cast<std::uint64_t>(i));
    auto z1 = rng.next_normal_pair();
    auto zN = rng.next_normal_pair();
    samples[i].a1 = input.alpha1 + Complex(sigma * z1[0], sigma * z1[1]);
    samples[i].aN = input.alphaN + Complex(sigma * zN[0], sigma * zN[1]);
  }
  return samples;
}

namespace {

constexpr int kChunk = 256;  // fixed chunking keeps reductions thread-count independent

struct ChunkSums {
  // Per grid time: sum n, sum n^2, sum X, sum X^2 for both modes.
  std::vector<Accumulator> acc;  // layout [time][quantity], 8 quantities

  explicit ChunkSums(std::size_t n_times) : acc(n_times * 8) {}
  Accumulator& at(std::size_t time_idx, int quantity) { return acc[time_idx * 8 + quantity]; }
};

}  // namespace

EnsembleResult run_ensemble(const std::vector<ClassicalState>& samples, const ModelSpec& model,
                            const std::vector<double>& gt_grid,
                            const std::vector<double>& snapshot_gts, double quadrature_angle,
                            double tol, int threads) {
  if (samples.empty()) fail(errc::invalid_argument, "run_ensemble: empty sample list");
  if (gt_grid.empty()) fail(errc::invalid_argument, "run_ensemble: empty time grid");

  // Merge the stats grid with the snapshot times (dedup, ascending).
  std::vector<double> all_gts = gt_grid;
  all_gts.insert(all_gts.end(), snapshot_gts.begin(), snapshot_gts.end());
  std::sort(all_gts.begin(), all_gts.end());
  all_gts.erase(std::unique(all_gts.begin(), all_gts.end()), all_gts.end());
  std::vector<double> times(all_gts.size());
  for (std::size_t i = 0; i < all_gts.size(); ++i) times[i] = all_gts[i] / model.coupling;

  std::vector<std::size_t> grid_to_merged(gt_grid.size());
  for (std::size_t i = 0; i < gt_grid.size(); ++i)
    grid_to_merged[i] =
        std::lower_bound(all_gts.begin(), all_gts.end(), gt_grid[i]) - all_gts.begin();
  std::vector<std::size_t> snap_to_merged(snapshot_gts.size());
  for (std::size_t i = 0; i < snapshot_gts.size(); ++i)
    snap_to_merged[i] =
        std::lower_bound(all_gts.begin(), all_gts.end(), snapshot_gts[i]) - all_gts.begin();

  const std::size_t n_samples = samples.size();
  const std::size_t n_times = all_gts.size();
  const std::size_t n_chunks = (n_samples + kChunk - 1) / kChunk;

  EnsembleResult result;
  result.snapshots.reserve(snapshot_gts.size() * 2);
  for (std::size_t s = 0; s < snapshot_gts.size(); ++s) {
    for (int mode : {1, model.order}) {
      CloudSnapshot snap;
      snap.gt = snapshot_gts[s];
      snap.mode = mode;
      snap.points.resize(n_samples);
      result.snapshots.push_back(std::move(snap));
      if (model.order == 1) break;  // avoid duplicate mode-1 snapshot
    }
  }

  const Complex rot(std::cos(-quadrature_angle), std::sin(-quadrature_angle));
  std::vector<ChunkSums> chunk_sums(n_chunks, ChunkSums(n_times));

  parallel_for(n_chunks, threads, [&](std::size_t chunk) {
    std::size_t begin = chunk * kChunk;
    std::size_t end = std::min(begin + kChunk, n_samples);
    ChunkSums& sums = chunk_sums[chunk];
    for (std::size_t traj = begin; traj < end; ++traj) {
      std::vector<ClassicalState> path;
      try {
        path = integrate_times(samples[traj], model, times, tol);
      } catch (const Error& e) {
        fail(e.code(), "trajectory " + std::to_string(traj) + ": " + e.what());
      }
      for (std::size_t ti = 0; ti < n_times; ++ti) {
        const ClassicalState& s = path[ti];
        double n1 = s.n1(), nN = s.nN();
        double x1 = 2.0 * (s.a1 * rot).real();
        double xN = 2.0 * (s.aN * rot).real();
        sums.at(ti, 0).add(n1);
        sums.at(ti, 1).add(n1 * n1);
        sums.at(ti, 2).add(x1);
        sums.at(ti, 3).add(x1 * x1);
        sums.at(ti, 4).add(nN);
        sums.at(ti, 5).add(nN * nN);
        sums.at(ti, 6).add(xN);
        sums.at(ti, 7).add(xN * xN);
      }
      for (std::size_t s_idx = 0; s_idx < snap_to_merged.size(); ++s_idx) {
        const ClassicalState& s = path[snap_to_merged[s_idx]];
        std::size_t base = s_idx * (model.order == 1 ? 1 : 2);
        result.snapshots[base].points[traj] = s.a1;
        if (model.order != 1) result.snapshots[base + 1].points[traj] = s.aN;
      }
    }
  });

  // Final reduction in chunk order.
  EnsembleStats& stats = result.stats;
  stats.gt = gt_grid;
  auto resize_all = [&](std::size_t n) {
    for (auto* v : {&stats.n1_mean, &stats.n1_second, &stats.f1, &stats.s1, &stats.nN_mean,
                    &stats.nN_second, &stats.fN, &stats.sN})
      v->resize(n);
  };
  resize_all(gt_grid.size());

  const double inv_count = 1.0 / static_cast<double>(n_samples);
  for (std::size_t gi = 0; gi < gt_grid.size(); ++gi) {
    std::size_t ti = grid_to_merged[gi];
    double q[8];
    for (int k = 0; k < 8; ++k) {
      Accumulator total;
      for (std::size_t chunk = 0; chunk < n_chunks; ++chunk)
        total.add(chunk_sums[chunk].at(ti, k).total());
      q[k] = total.total() * inv_count;
    }
    stats.n1_mean[gi] = q[0];
    stats.n1_second[gi] = q[1];
    stats.s1[gi] = q[3] - q[2] * q[2];
    stats.nN_mean[gi] = q[4];
    stats.nN_second[gi] = q[5];
    stats.sN[gi] = q[7] - q[6] * q[6];
    stats.f1[gi] = (q[0] > 0.0) ? (q[1] - q[0] * q[0]) / q[0] : 0.0;
    stats.fN[gi] = (q[4] > 0.0) ? (q[5] - q[4] * q[4]) / q[4] : 0.0;
  }
  return result;
}

RingMetrics cloud_ring_metrics(const CloudSnapshot& snapshot, int sectors) {
  if (snapshot.points.empty()) fail(errc::invalid_argument, "cloud_ring_metrics: empty snapshot");
  RingMetrics out;
  std::vector<char> occupied(static_cast<std::size_t>(sectors), 0);
  Accumulator radius_sum, radius_sq_sum;
  for (Complex z : snapshot.points) {
    double radius = std::abs(z);
    radius_sum.add(radius);
    radius_sq_sum.add(radius * radius);
    double angle = std::atan2(z.imag(), z.real());
    int sector = static_cast<int>((angle + M_PI) / (2.0 * M_PI) * sectors);
    sector = std::min(std::max(sector, 0), sectors - 1);
    occupied[sector] = 1;
  }
  double inv = 1.0 / static_cast<double>(snapshot.points.size());
  out.radial_mean = radius_sum.total() * inv;
  out.radial_variance = radius_sq_sum.total() * inv - out.radial_mean * out.radial_mean;
  int filled = 0;
  for (char c : occupied) filled += c;
  out.angular_coverage = static_cast<double>(filled) / sectors;
  return out;
}

}  // namespace hgsim
