#include "hgsim/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

#include "hgsim/types.hpp"

namespace hgsim {

namespace {

// Givens rotations applied right-to-left with a Wilkinson-style shift; the
// rotation product is accumulated into v so columns end up as eigenvectors.
void ql_implicit_shift(std::vector<double>& d, std::vector<double>& e, std::vector<double>& v,
                       int n, int max_iter_per_eigenvalue) {
  if (n <= 1) return;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double scale = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * scale) break;
      }
      if (m != l) {
        if (iter++ >= max_iter_per_eigenvalue * n)
          fail(errc::numerical, "tridiagonal QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            std::size_t row = static_cast<std::size_t>(k) * n;
            f = v[row + i + 1];
            v[row + i + 1] = s * v[row + i] + c * f;
            v[row + i] = c * v[row + i] - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

TridiagEigen tridiag_eigen(const std::vector<double>& diag, const std::vector<double>& offdiag,
                           int max_iter_per_eigenvalue) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) fail(errc::invalid_argument, "tridiag_eigen: empty matrix");
  if (offdiag.size() + 1 != diag.size())
    fail(errc::invalid_argument, "tridiag_eigen: offdiag size must be dim-1");

  TridiagEigen out;
  out.dim = n;
  out.values = diag;
  std::vector<double> e(offdiag);
  e.push_back(0.0);
  out.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) out.vectors[static_cast<std::size_t>(i) * n + i] = 1.0;

  ql_implicit_shift(out.values, e, out.vectors, n, max_iter_per_eigenvalue);

  // Sort eigenpairs ascending.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return out.values[a] < out.values[b]; });
  std::vector<double> sorted_values(n);
  std::vector<double> sorted_vectors(out.vectors.size());
  for (int k = 0; k < n; ++k) {
    sorted_values[k] = out.values[order[k]];
    for (int row = 0; row < n; ++row)
      sorted_vectors[static_cast<std::size_t>(row) * n + k] =
          out.vectors[static_cast<std::size_t>(row) * n + order[k]];
  }
  out.values = std::move(sorted_values);
  out.vectors = std::move(sorted_vectors);
  return out;
}

}  // namespace hgsim
