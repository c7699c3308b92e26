#ifndef HGSIM_TRIDIAG_HPP
#define HGSIM_TRIDIAG_HPP

#include <vector>

namespace hgsim {

/// Full eigendecomposition of a real symmetric tridiagonal matrix.
/// Eigenvalues ascending; vectors row-major, column k is the unit
/// eigenvector of values[k].
struct TridiagEigen {
  std::vector<double> values;
  std::vector<double> vectors;
  int dim = 0;

  double vec(int row, int col) const { return vectors[static_cast<std::size_t>(row) * dim + col]; }
};

/// Implicit-shift QL for a symmetric tridiagonal matrix with diagonal `diag`
/// (size n) and off-diagonal `offdiag` (size n-1, entry i couples i and i+1).
/// Throws Error(errc::numerical) if any eigenvalue fails to converge within
/// `max_iter_per_eigenvalue * n` rotations sweeps.
TridiagEigen tridiag_eigen(const std::vector<double>& diag, const std::vector<double>& offdiag,
                           int max_iter_per_eigenvalue = 30);

}  // namespace hgsim

#endif
