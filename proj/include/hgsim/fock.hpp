#ifndef HGSIM_FOCK_HPP
#define HGSIM_FOCK_HPP

#include <cstddef>
#include <vector>

#include "hgsim/types.hpp"

namespace hgsim {

/// Coherent-state Fock expansion c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!)
/// for n = 0..cutoff, computed by the stable recurrence
/// c_{n+1} = c_n alpha / sqrt(n+1).
std::vector<Complex> coherent_amplitudes(Complex alpha, int cutoff);

/// Smallest c such that the Poisson(mean) upper-tail mass P(X > c) < tail_tol.
int poisson_tail_cutoff(double mean, double tail_tol);

struct Cutoffs {
  int mode1 = 0;
  int modeN = 0;
  int total = 0;  // total-quanta cutoff: mode1 + N * modeN
};

/// Per-mode Fock cutoffs bounding the discarded Poissonian tail mass by
/// tail_tol in each mode.
Cutoffs choose_cutoffs(const CoherentInput& input, double tail_tol);

/// Hard resource bounds for state preparation and block diagonalization.
struct MemoryBudget {
  int max_block_dim = 4096;
  std::size_t max_bytes = 6ull << 30;
};

/// Two-mode state in the conserved-quanta block basis. Block E holds the
/// amplitudes of the Fock pairs (n1, nN) = (E - N*m, m), m = 0..floor(E/N),
/// so the total quanta n1 + N*nN = E are fixed within a block.
struct TwoModeFockState {
  ModelSpec model{};
  int cutoff1 = 0;
  int cutoffN = 0;
  int cutoffE = 0;
  std::vector<std::vector<Complex>> blocks;  // blocks[E], E = 0..cutoffE

  int block_dim(int E) const { return E / model.order + 1; }
  std::size_t amplitude_count() const;
  double norm() const;
};

/// Product of two coherent states, distributed over the blocks and globally
/// renormalized to unit norm. Fails when the implied storage exceeds the
/// budget.
TwoModeFockState prepare_product_state(const CoherentInput& input, double tail_tol,
                                       const MemoryBudget& budget = {});

/// Marginal photon-number distribution of one mode (1 or N), length chosen
/// to cover every occupation reachable within the retained blocks.
std::vector<double> marginal_distribution(const TwoModeFockState& state, int mode);

}  // namespace hgsim

#endif
