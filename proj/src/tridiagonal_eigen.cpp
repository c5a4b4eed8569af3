#include "xxchain/tridiagonal_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "xxchain/error.hpp"

namespace xxchain {

namespace {

// Applies the plane rotation (c, s) to eigenvector rows i and i+1.
void rotate_rows(std::vector<double>& z, std::size_t n, std::size_t i, double c, double s) {
  double* zi = z.data() + i * n;
  double* zi1 = zi + n;
  for (std::size_t k = 0; k < n; ++k) {
    const double h = zi1[k];
    zi1[k] = s * zi[k] + c * h;
    zi[k] = c * zi[k] - s * h;
  }
}

}  // namespace

TridiagonalEigenResult symmetric_tridiagonal_eigen(std::span<const double> diag,
                                                   std::span<const double> offdiag) {
  const std::size_t n = diag.size();
  if (n == 0 || offdiag.size() + 1 != n) {
    throw Error(ErrorCode::ConvergenceFailure, "tridiagonal dimensions are inconsistent");
  }

  std::vector<double> d(diag.begin(), diag.end());
  // e[i] couples rows i and i+1; e[n-1] is a zero sentinel.
  std::vector<double> e(n, 0.0);
  std::copy(offdiag.begin(), offdiag.end(), e.begin());

  std::vector<double> z(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const int max_sweeps = 30 * static_cast<int>(n);
  int total_sweeps = 0;
  double shift_acc = 0.0;
  double tst = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    tst = std::max(tst, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst) ++m;

    if (m > l) {
      int sweeps = 0;
      do {
        if (++sweeps > max_sweeps) {
          throw Error(ErrorCode::ConvergenceFailure,
                      "implicit QL did not deflate eigenvalue " + std::to_string(l));
        }
        ++total_sweeps;

        // Shift from the leading 2x2 block.
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        shift_acc += h;

        // Chase the bulge from m back to l.
        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          rotate_rows(z, n, ii, c, s);
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst);
    }
    d[l] += shift_acc;
    e[l] = 0.0;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  TridiagonalEigenResult out;
  out.values.resize(n);
  out.vectors.resize(n * n);
  out.sweeps = total_sweeps;
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    std::copy_n(z.begin() + static_cast<std::ptrdiff_t>(order[j] * n), n,
                out.vectors.begin() + static_cast<std::ptrdiff_t>(j * n));
  }
  return out;
}

}  // namespace xxchain
