#ifndef HGSIM_QUANTUM_HPP
#define HGSIM_QUANTUM_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hgsim/fock.hpp"
#include "hgsim/types.hpp"

namespace hgsim {

/// One conserved-quanta block of the interaction Hamiltonian
/// g (a1^N aN^dag + a1^dag^N aN). In the ordered basis m = nN the matrix is
/// real symmetric tridiagonal with zero diagonal.
struct TridiagonalBlockHamiltonian {
  int E = 0;
  int dim = 1;
  double coupling = 1.0;
  std::vector<double> offdiag;  // entry m couples m and m+1
};

/// offdiag[m] = g sqrt(m+1) sqrt((E-Nm)(E-Nm-1)...(E-Nm-N+1)).
TridiagonalBlockHamiltonian build_block(int E, const ModelSpec& model);

/// Spectral decomposition of a block at unit coupling; eigenvalues scale
/// linearly with g, eigenvectors do not depend on it.
struct BlockEigen {
  int E = 0;
  int dim = 1;
  std::vector<double> eigenvalues;   // ascending, unit coupling
  std::vector<double> eigenvectors;  // row-major dim x dim, column k for eigenvalue k

  double vec(int row, int col) const {
    return eigenvectors[static_cast<std::size_t>(row) * dim + col];
  }
};

/// Full orthonormal eigendecomposition of a block (implicit-shift QL).
/// Reported eigenvalues are for unit coupling; H.coupling is recorded only
/// to keep evolve() scale-aware.
BlockEigen diagonalize_block(const TridiagonalBlockHamiltonian& H);

/// Versioned on-disk record of a BlockEigen, stable across runs on the same
/// platform.
void save_block_eigen(const BlockEigen& eig, int order, const std::string& path);
std::optional<BlockEigen> load_block_eigen(int order, int E, const std::string& path);

/// Thread-safe insert-or-get cache of block decompositions keyed by (N, E),
/// optionally mirrored to a directory of binary records.
class SpectralCache {
public:
  SpectralCache() = default;
  explicit SpectralCache(std::string disk_dir) : disk_dir_(std::move(disk_dir)) {}

  std::shared_ptr<const BlockEigen> get(int order, int E);

  /// Decompositions for every block E = 0..maxE, computed in parallel.
  std::vector<std::shared_ptr<const BlockEigen>> get_range(int order, int maxE, int threads);

private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, std::shared_ptr<const BlockEigen>> entries_;
  std::string disk_dir_;
};

/// |psi(t)> = sum_k e^{-i g lambda_k t} <v_k|psi(0)> |v_k> applied per block.
/// eigs must cover every block of the state (indexable by E).
TwoModeFockState evolve(const TwoModeFockState& state,
                        const std::vector<std::shared_ptr<const BlockEigen>>& eigs, double t);

/// <n^k> for k = 1..max_order of one mode (1 or N).
std::vector<double> photon_moments(const TwoModeFockState& state, int mode, int max_order);

/// First and second ladder-operator moments of one mode. The photon-number
/// variance is accumulated about the mean (shifted central moment), which
/// keeps it exact to rounding even when <n^2> dwarfs it.
struct LadderMoments {
  Complex a{};          // <a>
  Complex a_squared{};  // <a^2>
  double n = 0.0;       // <n>
  double n2 = 0.0;      // <n^2>
  double var = 0.0;     // <n^2> - <n>^2, cancellation-free
};
LadderMoments ladder_moments(const TwoModeFockState& state, int mode);

/// Single-mode reduced density matrix (partial trace over the other mode).
struct DensityMatrix {
  int dim = 0;
  std::vector<Complex> elems;  // row-major

  Complex at(int row, int col) const { return elems[static_cast<std::size_t>(row) * dim + col]; }
  double trace_real() const;
  double purity() const;
};
DensityMatrix reduced_density(const TwoModeFockState& state, int mode);

/// Drops trailing rows/columns whose diagonal weight is below tail_mass.
DensityMatrix trim_density(const DensityMatrix& rho, double tail_mass);

/// Time series of photon and ladder moments on a gt grid, computed from one
/// spectral decomposition. Samples are independent tasks, so the result does
/// not depend on the worker count.
struct QuantumSeriesPoint {
  double gt = 0.0;
  double n1_mean = 0.0, n1_second = 0.0, n1_var = 0.0;
  double nN_mean = 0.0, nN_second = 0.0, nN_var = 0.0;
  double s1 = 0.0, sN = 0.0;  // quadrature variances at the requested angle
  double norm_error = 0.0;    // |1 - <psi|psi>|

  double f1() const { return n1_var / n1_mean; }
  double fN() const { return nN_var / nN_mean; }
};

struct QuantumRun {
  Cutoffs cutoffs;
  std::vector<QuantumSeriesPoint> points;
};

QuantumRun run_quantum_series(const CoherentInput& input, double tail_tol,
                              const std::vector<double>& gt_times, double quadrature_angle,
                              int threads, SpectralCache& cache, const MemoryBudget& budget = {});

/// State at a single dimensionless time gt (used for Q-function snapshots).
TwoModeFockState evolve_to(const CoherentInput& input, double tail_tol, double gt,
                           SpectralCache& cache, const MemoryBudget& budget = {});

}  // namespace hgsim

#endif
