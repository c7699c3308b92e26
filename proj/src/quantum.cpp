#include "hgsim/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "hgsim/parallel.hpp"
#include "hgsim/tridiag.hpp"

namespace hgsim {

TridiagonalBlockHamiltonian build_block(int E, const ModelSpec& model) {
  if (E < 0) fail(errc::invalid_argument, "build_block: E must be >= 0");
  const int N = model.order;
  TridiagonalBlockHamiltonian H;
  H.E = E;
  H.dim = E / N + 1;
  H.coupling = model.coupling;
  H.offdiag.resize(static_cast<std::size_t>(H.dim > 0 ? H.dim - 1 : 0));
  for (int m = 0; m + 1 < H.dim; ++m) {
    int n1 = E - N * m;
    double falling = 1.0;  // n1 (n1-1) ... (n1-N+1), exact in double for dims in scope
    for (int j = 0; j < N; ++j) falling *= double(n1 - j);
    H.offdiag[m] = model.coupling * std::sqrt(double(m + 1)) * std::sqrt(falling);
  }
  return H;
}

BlockEigen diagonalize_block(const TridiagonalBlockHamiltonian& H) {
  BlockEigen out;
  out.E = H.E;
  out.dim = H.dim;
  if (H.dim == 1) {
    out.eigenvalues = {0.0};
    out.eigenvectors = {1.0};
    return out;
  }
  std::vector<double> diag(static_cast<std::size_t>(H.dim), 0.0);
  std::vector<double> offdiag(H.offdiag);
  if (H.coupling != 1.0)
    for (auto& e : offdiag) e /= H.coupling;
  TridiagEigen eig = tridiag_eigen(diag, offdiag);
  out.eigenvalues = std::move(eig.values);
  out.eigenvectors = std::move(eig.vectors);
  return out;
}

// ---------------------------------------------------------------------------
// Binary cache records
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'H', 'G', 'E', 'C'};
constexpr std::uint32_t kFormatVersion = 1;

std::string record_path(const std::string& dir, int order, int E) {
  return dir + "/eig_N" + std::to_string(order) + "_E" + std::to_string(E) + ".bin";
}

}  // namespace

void save_block_eigen(const BlockEigen& eig, int order, const std::string& path) {
  std::ofstream out(path + ".tmp", std::ios::binary | std::ios::trunc);
  if (!out) fail(errc::io, "cannot open cache record for writing: " + path);
  std::uint32_t header[4] = {kFormatVersion, static_cast<std::uint32_t>(order),
                             static_cast<std::uint32_t>(eig.E),
                             static_cast<std::uint32_t>(eig.dim)};
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(eig.eigenvalues.data()),
            static_cast<std::streamsize>(eig.eigenvalues.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(eig.eigenvectors.data()),
            static_cast<std::streamsize>(eig.eigenvectors.size() * sizeof(double)));
  out.close();
  if (!out) fail(errc::io, "failed writing cache record: " + path);
  std::filesystem::rename(path + ".tmp", path);
}

std::optional<BlockEigen> load_block_eigen(int order, int E, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  std::uint32_t header[4];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || std::memcmp(magic, kMagic, 4) != 0 || header[0] != kFormatVersion ||
      header[1] != static_cast<std::uint32_t>(order) || header[2] != static_cast<std::uint32_t>(E))
    return std::nullopt;
  BlockEigen eig;
  eig.E = E;
  eig.dim = static_cast<int>(header[3]);
  eig.eigenvalues.resize(static_cast<std::size_t>(eig.dim));
  eig.eigenvectors.resize(static_cast<std::size_t>(eig.dim) * eig.dim);
  in.read(reinterpret_cast<char*>(eig.eigenvalues.data()),
          static_cast<std::streamsize>(eig.eigenvalues.size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(eig.eigenvectors.data()),
          static_cast<std::streamsize>(eig.eigenvectors.size() * sizeof(double)));
  if (!in) return std::nullopt;
  return eig;
}

std::shared_ptr<const BlockEigen> SpectralCache::get(int order, int E) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find({order, E});
    if (it != entries_.end()) return it->second;
  }
  std::shared_ptr<const BlockEigen> computed;
  if (!disk_dir_.empty()) {
    if (auto loaded = load_block_eigen(order, E, record_path(disk_dir_, order, E)))
      computed = std::make_shared<BlockEigen>(std::move(*loaded));
  }
  if (!computed) {
    ModelSpec unit{order, 1.0};
    computed = std::make_shared<BlockEigen>(diagonalize_block(build_block(E, unit)));
    if (!disk_dir_.empty()) {
      std::filesystem::create_directories(disk_dir_);
      save_block_eigen(*computed, order, record_path(disk_dir_, order, E));
    }
  }
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = entries_.emplace(std::make_pair(order, E), computed);
  return it->second;
}

std::vector<std::shared_ptr<const BlockEigen>> SpectralCache::get_range(int order, int maxE,
                                                                        int threads) {
  std::vector<std::shared_ptr<const BlockEigen>> eigs(static_cast<std::size_t>(maxE) + 1);
  parallel_for(static_cast<std::size_t>(maxE) + 1, threads,
               [&](std::size_t E) { eigs[E] = get(order, static_cast<int>(E)); });
  return eigs;
}

// ---------------------------------------------------------------------------
// Evolution
// ---------------------------------------------------------------------------

namespace {

// c(t) = V diag(e^{-i g lambda t}) V^T c(0) for one block.
void propagate_block(const BlockEigen& eig, double gt, const std::vector<Complex>& in,
                     std::vector<Complex>& out, std::vector<Complex>& work) {
  const int dim = eig.dim;
  work.assign(static_cast<std::size_t>(dim), Complex(0.0, 0.0));
  for (int row = 0; row < dim; ++row) {
    Complex amp = in[row];
    if (amp == Complex(0.0, 0.0)) continue;
    const double* vrow = &eig.eigenvectors[static_cast<std::size_t>(row) * dim];
    for (int k = 0; k < dim; ++k) work[k] += vrow[k] * amp;
  }
  for (int k = 0; k < dim; ++k) {
    double phase = -eig.eigenvalues[k] * gt;
    work[k] *= Complex(std::cos(phase), std::sin(phase));
  }
  out.assign(static_cast<std::size_t>(dim), Complex(0.0, 0.0));
  for (int row = 0; row < dim; ++row) {
    const double* vrow = &eig.eigenvectors[static_cast<std::size_t>(row) * dim];
    Complex sum(0.0, 0.0);
    for (int k = 0; k < dim; ++k) sum += vrow[k] * work[k];
    out[row] = sum;
  }
}

}  // namespace

TwoModeFockState evolve(const TwoModeFockState& state,
                        const std::vector<std::shared_ptr<const BlockEigen>>& eigs, double t) {
  if (eigs.size() < state.blocks.size())
    fail(errc::invalid_argument, "evolve: eigendecompositions do not cover all blocks");
  TwoModeFockState out = state;
  const double gt = state.model.coupling * t;
  std::vector<Complex> work;
  for (int E = 0; E <= state.cutoffE; ++E) {
    const BlockEigen& eig = *eigs[E];
    if (eig.dim != static_cast<int>(state.blocks[E].size()))
      fail(errc::invalid_argument, "evolve: block dimension mismatch at E=" + std::to_string(E));
    propagate_block(eig, gt, state.blocks[E], out.blocks[E], work);
  }
  return out;
}

std::vector<double> photon_moments(const TwoModeFockState& state, int mode, int max_order) {
  if (max_order < 1) fail(errc::invalid_argument, "photon_moments: max_order must be >= 1");
  if (mode != 1 && mode != state.model.order)
    fail(errc::invalid_argument, "photon_moments: mode must be 1 or N");
  const int N = state.model.order;
  std::vector<Accumulator> acc(static_cast<std::size_t>(max_order));
  for (int E = 0; E <= state.cutoffE; ++E) {
    const auto& block = state.blocks[E];
    for (int m = 0; m < static_cast<int>(block.size()); ++m) {
      double p = std::norm(block[m]);
      if (p == 0.0) continue;
      double n = (mode == 1) ? double(E - N * m) : double(m);
      double power = 1.0;
      for (int k = 0; k < max_order; ++k) {
        power *= n;
        acc[k].add(p * power);
      }
    }
  }
  std::vector<double> moments(static_cast<std::size_t>(max_order));
  for (int k = 0; k < max_order; ++k) moments[k] = acc[k].total();
  return moments;
}

LadderMoments ladder_moments(const TwoModeFockState& state, int mode) {
  const int N = state.model.order;
  LadderMoments out;
  out.n = photon_moments(state, mode, 1)[0];

  // Variance about the mean; summing p (n - <n>)^2 avoids the catastrophic
  // cancellation of <n^2> - <n>^2 at large occupations.
  Accumulator var_acc;
  for (int E = 0; E <= state.cutoffE; ++E) {
    const auto& block = state.blocks[E];
    for (int m = 0; m < static_cast<int>(block.size()); ++m) {
      double p = std::norm(block[m]);
      if (p == 0.0) continue;
      double occ = (mode == 1) ? double(E - N * m) : double(m);
      double dev = occ - out.n;
      var_acc.add(p * dev * dev);
    }
  }
  out.var = var_acc.total();
  out.n2 = out.var + out.n * out.n;

  // <a> couples block E to E-step, <a^2> to E-2*step, where lowering the mode
  // by one photon removes `step` quanta from the block index.
  const int step = (mode == 1) ? 1 : N;
  Complex a(0.0, 0.0), a2(0.0, 0.0);
  for (int E = 0; E <= state.cutoffE; ++E) {
    const auto& block = state.blocks[E];
    for (int m = 0; m < static_cast<int>(block.size()); ++m) {
      Complex amp = block[m];
      if (amp == Complex(0.0, 0.0)) continue;
      int n1 = E - N * m;
      int occ = (mode == 1) ? n1 : m;
      if (occ >= 1 && E - step >= 0) {
        int target_m = (mode == 1) ? m : m - 1;
        const auto& lower = state.blocks[E - step];
        if (target_m >= 0 && target_m < static_cast<int>(lower.size()))
          a += std::conj(lower[target_m]) * std::sqrt(double(occ)) * amp;
      }
      if (occ >= 2 && E - 2 * step >= 0) {
        int target_m = (mode == 1) ? m : m - 2;
        const auto& lower = state.blocks[E - 2 * step];
        if (target_m >= 0 && target_m < static_cast<int>(lower.size()))
          a2 += std::conj(lower[target_m]) * std::sqrt(double(occ) * double(occ - 1)) * amp;
      }
    }
  }
  out.a = a;
  out.a_squared = a2;
  return out;
}

double DensityMatrix::trace_real() const {
  double tr = 0.0;
  for (int i = 0; i < dim; ++i) tr += at(i, i).real();
  return tr;
}

double DensityMatrix::purity() const {
  double p = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) p += std::norm(at(i, j));
  return p;
}

DensityMatrix reduced_density(const TwoModeFockState& state, int mode) {
  const int N = state.model.order;
  DensityMatrix rho;
  rho.dim = (mode == 1) ? state.cutoffE + 1 : state.cutoffE / N + 1;
  rho.elems.assign(static_cast<std::size_t>(rho.dim) * rho.dim, Complex(0.0, 0.0));
  if (mode == 1) {
    // rho(n, n') = sum_m c(n + N m, m) conj(c(n' + N m, m))
    for (int m = 0; m <= state.cutoffE / N; ++m) {
      for (int n = 0; n + N * m <= state.cutoffE; ++n) {
        Complex cn = state.blocks[n + N * m][m];
        if (cn == Complex(0.0, 0.0)) continue;
        for (int np = 0; np + N * m <= state.cutoffE; ++np) {
          Complex cnp = state.blocks[np + N * m][m];
          rho.elems[static_cast<std::size_t>(n) * rho.dim + np] += cn * std::conj(cnp);
        }
      }
    }
  } else {
    // rho(m, m') = sum_n1 c(n1 + N m, m) conj(c(n1 + N m', m'))
    for (int n1 = 0; n1 <= state.cutoffE; ++n1) {
      for (int m = 0; n1 + N * m <= state.cutoffE; ++m) {
        Complex cm = state.blocks[n1 + N * m][m];
        if (cm == Complex(0.0, 0.0)) continue;
        for (int mp = 0; n1 + N * mp <= state.cutoffE; ++mp) {
          Complex cmp = state.blocks[n1 + N * mp][mp];
          rho.elems[static_cast<std::size_t>(m) * rho.dim + mp] += cm * std::conj(cmp);
        }
      }
    }
  }
  return rho;
}

DensityMatrix trim_density(const DensityMatrix& rho, double tail_mass) {
  double kept = 0.0;
  int dim = rho.dim;
  for (int i = 0; i < rho.dim; ++i) {
    kept += rho.at(i, i).real();
    if (kept >= 1.0 - tail_mass) {
      dim = i + 1;
      break;
    }
  }
  DensityMatrix out;
  out.dim = dim;
  out.elems.resize(static_cast<std::size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out.elems[static_cast<std::size_t>(i) * dim + j] = rho.at(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Time-series driver
// ---------------------------------------------------------------------------

namespace {

std::size_t eigen_storage_bytes(int order, int maxE) {
  std::size_t doubles = 0;
  for (int E = 0; E <= maxE; ++E) {
    std::size_t dim = static_cast<std::size_t>(E / order) + 1;
    doubles += dim * dim + dim;
  }
  return doubles * sizeof(double);
}

}  // namespace

QuantumRun run_quantum_series(const CoherentInput& input, double tail_tol,
                              const std::vector<double>& gt_times, double quadrature_angle,
                              int threads, SpectralCache& cache, const MemoryBudget& budget) {
  TwoModeFockState initial = prepare_product_state(input, tail_tol, budget);
  if (eigen_storage_bytes(input.model.order, initial.cutoffE) > budget.max_bytes)
    fail(errc::memory_bound,
         "run_quantum_series: eigenvector storage for cutoffE=" +
             std::to_string(initial.cutoffE) + " exceeds the memory budget");

  auto eigs = cache.get_range(input.model.order, initial.cutoffE, threads);

  // Project the initial state once: d_E = V^T c_E(0).
  std::vector<std::vector<Complex>> projected(initial.blocks.size());
  for (int E = 0; E <= initial.cutoffE; ++E) {
    const BlockEigen& eig = *eigs[E];
    const auto& block = initial.blocks[E];
    auto& d = projected[E];
    d.assign(block.size(), Complex(0.0, 0.0));
    for (int row = 0; row < eig.dim; ++row) {
      Complex amp = block[row];
      if (amp == Complex(0.0, 0.0)) continue;
      const double* vrow = &eig.eigenvectors[static_cast<std::size_t>(row) * eig.dim];
      for (int k = 0; k < eig.dim; ++k) d[k] += vrow[k] * amp;
    }
  }

  QuantumRun run;
  run.cutoffs = {initial.cutoff1, initial.cutoffN, initial.cutoffE};
  run.points.resize(gt_times.size());

  const Complex rot1(std::cos(-quadrature_angle), std::sin(-quadrature_angle));
  const Complex rot2 = rot1 * rot1;

  parallel_for(gt_times.size(), threads, [&](std::size_t idx) {
    const double gt = gt_times[idx];
    TwoModeFockState snapshot = initial;  // reuse block layout
    std::vector<Complex> phases;
    for (int E = 0; E <= initial.cutoffE; ++E) {
      const BlockEigen& eig = *eigs[E];
      const auto& d = projected[E];
      phases.assign(static_cast<std::size_t>(eig.dim), Complex(0.0, 0.0));
      for (int k = 0; k < eig.dim; ++k) {
        double phase = -eig.eigenvalues[k] * gt;
        phases[k] = d[k] * Complex(std::cos(phase), std::sin(phase));
      }
      auto& block = snapshot.blocks[E];
      for (int row = 0; row < eig.dim; ++row) {
        const double* vrow = &eig.eigenvectors[static_cast<std::size_t>(row) * eig.dim];
        Complex sum(0.0, 0.0);
        for (int k = 0; k < eig.dim; ++k) sum += vrow[k] * phases[k];
        block[row] = sum;
      }
    }

    QuantumSeriesPoint& pt = run.points[idx];
    pt.gt = gt;
    LadderMoments m1 = ladder_moments(snapshot, 1);
    LadderMoments mN = ladder_moments(snapshot, input.model.order);
    pt.n1_mean = m1.n;
    pt.n1_second = m1.n2;
    pt.n1_var = m1.var;
    pt.nN_mean = mN.n;
    pt.nN_second = mN.n2;
    pt.nN_var = mN.var;
    auto quad = [&](const LadderMoments& m) {
      Complex mean_a = m.a * rot1;
      Complex mean_a2 = m.a_squared * rot2;
      return 2.0 * (mean_a2 - mean_a * mean_a).real() + 2.0 * (m.n - std::norm(m.a)) + 1.0;
    };
    pt.s1 = quad(m1);
    pt.sN = quad(mN);
    double norm2 = 0.0;
    for (const auto& block : snapshot.blocks)
      for (Complex amp : block) norm2 += std::norm(amp);
    pt.norm_error = std::abs(1.0 - norm2);
  });

  return run;
}

TwoModeFockState evolve_to(const CoherentInput& input, double tail_tol, double gt,
                           SpectralCache& cache, const MemoryBudget& budget) {
  TwoModeFockState initial = prepare_product_state(input, tail_tol, budget);
  auto eigs = cache.get_range(input.model.order, initial.cutoffE, 0);
  double t = gt / input.model.coupling;
  return evolve(initial, eigs, t);
}

}  // namespace hgsim
