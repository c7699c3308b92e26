#include "hgsim/fock.hpp"

#include <algorithm>
#include <cmath>

#include "hgsim/parallel.hpp"

namespace hgsim {

std::vector<Complex> coherent_amplitudes(Complex alpha, int cutoff) {
  if (cutoff < 0) fail(errc::invalid_argument, "coherent_amplitudes: cutoff must be >= 0");
  if (!is_finite(alpha)) fail(errc::invalid_argument, "coherent_amplitudes: alpha must be finite");
  std::vector<Complex> c(static_cast<std::size_t>(cutoff) + 1);
  c[0] = Complex(std::exp(-0.5 * std::norm(alpha)), 0.0);
  for (int n = 0; n < cutoff; ++n) c[n + 1] = c[n] * alpha / std::sqrt(double(n + 1));
  return c;
}

int poisson_tail_cutoff(double mean, double tail_tol) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    fail(errc::invalid_argument, "poisson_tail_cutoff: mean must be finite and >= 0");
  if (!(tail_tol > 0.0 && tail_tol < 1.0))
    fail(errc::invalid_argument, "poisson_tail_cutoff: tail_tol must lie in (0,1)");
  if (mean == 0.0) return 0;

  // Weights relative to the mode avoid exp(-mean) underflow for large mean.
  int mode = static_cast<int>(mean);
  int n_max = mode + static_cast<int>(20.0 * std::sqrt(mean) + 60.0);
  std::vector<double> w(static_cast<std::size_t>(n_max) + 1, 0.0);
  w[mode] = 1.0;
  for (int n = mode; n > 0; --n) w[n - 1] = w[n] * n / mean;
  for (int n = mode; n < n_max; ++n) w[n + 1] = w[n] * mean / (n + 1);

  double total = 0.0;
  for (double x : w) total += x;
  // Walking down, tail holds P(X >= n); the first n where it reaches the
  // tolerance is the smallest cutoff with P(X > n) still below it.
  double tail = 0.0;
  for (int n = n_max; n >= 0; --n) {
    tail += w[n];
    if (tail >= tail_tol * total) return n;
  }
  return 0;
}

Cutoffs choose_cutoffs(const CoherentInput& input, double tail_tol) {
  input.validate();
  if (!(tail_tol > 0.0 && tail_tol < 1.0))
    fail(errc::invalid_argument, "tail_tol: must lie in (0,1)");
  Cutoffs c;
  c.mode1 = poisson_tail_cutoff(std::norm(input.alpha1), tail_tol);
  c.modeN = poisson_tail_cutoff(std::norm(input.alphaN), tail_tol);
  c.total = c.mode1 + input.model.order * c.modeN;
  return c;
}

std::size_t TwoModeFockState::amplitude_count() const {
  std::size_t count = 0;
  for (const auto& b : blocks) count += b.size();
  return count;
}

double TwoModeFockState::norm() const {
  Accumulator acc;
  for (const auto& block : blocks)
    for (Complex amp : block) acc.add(std::norm(amp));
  return std::sqrt(acc.total());
}

TwoModeFockState prepare_product_state(const CoherentInput& input, double tail_tol,
                                       const MemoryBudget& budget) {
  Cutoffs cut = choose_cutoffs(input, tail_tol);
  const int N = input.model.order;

  TwoModeFockState state;
  state.model = input.model;
  state.cutoff1 = cut.mode1;
  state.cutoffN = cut.modeN;
  state.cutoffE = cut.total;

  if (cut.total / N + 1 > budget.max_block_dim)
    fail(errc::memory_bound, "prepare_product_state: block dimension " +
                                 std::to_string(cut.total / N + 1) + " exceeds limit " +
                                 std::to_string(budget.max_block_dim));
  std::size_t amplitudes = 0;
  for (int E = 0; E <= cut.total; ++E) amplitudes += static_cast<std::size_t>(E / N) + 1;
  if (amplitudes * sizeof(Complex) > budget.max_bytes)
    fail(errc::memory_bound, "prepare_product_state: state of " + std::to_string(amplitudes) +
                                 " amplitudes exceeds the memory budget");

  std::vector<Complex> c1 = coherent_amplitudes(input.alpha1, cut.mode1);
  std::vector<Complex> cN = coherent_amplitudes(input.alphaN, cut.modeN);

  state.blocks.resize(static_cast<std::size_t>(cut.total) + 1);
  Accumulator norm2;
  for (int E = 0; E <= cut.total; ++E) {
    auto& block = state.blocks[E];
    block.assign(static_cast<std::size_t>(E / N) + 1, Complex(0.0, 0.0));
    for (int m = 0; m <= E / N; ++m) {
      int n1 = E - N * m;
      if (n1 > cut.mode1 || m > cut.modeN) continue;
      Complex amp = c1[n1] * cN[m];
      block[m] = amp;
      norm2.add(std::norm(amp));
    }
  }

  double raw_norm2 = norm2.total();
  if (std::abs(1.0 - raw_norm2) > 10.0 * tail_tol)
    fail(errc::numerical, "prepare_product_state: truncated norm deficit " +
                              std::to_string(1.0 - raw_norm2) + " exceeds 10*tail_tol");
  double scale = 1.0 / std::sqrt(raw_norm2);
  for (auto& block : state.blocks)
    for (auto& amp : block) amp *= scale;
  return state;
}

std::vector<double> marginal_distribution(const TwoModeFockState& state, int mode) {
  const int N = state.model.order;
  int size = (mode == 1) ? state.cutoffE + 1 : state.cutoffE / N + 1;
  std::vector<double> p(static_cast<std::size_t>(size), 0.0);
  for (int E = 0; E <= state.cutoffE; ++E) {
    const auto& block = state.blocks[E];
    for (int m = 0; m < static_cast<int>(block.size()); ++m) {
      int n = (mode == 1) ? E - N * m : m;
      p[n] += std::norm(block[m]);
    }
  }
  return p;
}

}  // namespace hgsim
