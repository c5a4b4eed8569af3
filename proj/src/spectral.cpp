#include "xxchain/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "xxchain/error.hpp"
#include "xxchain/tridiagonal_eigen.hpp"

namespace xxchain {

namespace {

constexpr double kSignThreshold = 1e-12;
constexpr double kOrthoTol = 1e-10;
constexpr double kResidualTol = 1e-10;
constexpr double kBandEdgeTol = 1e-9;
// Relative eigenvalue gap above which the eigenvector is recomputed from a
// twisted factorization.
constexpr double kTwistGap = 1e-3;

void fix_sign(std::span<double> v) {
  for (double x : v) {
    if (std::abs(x) > kSignThreshold) {
      if (x < 0) {
        for (double& y : v) y = -y;
      }
      return;
    }
  }
}

// Eigenvector of a well-separated eigenvalue from a twisted factorization
// T - lambda = N_r Delta N_r^T. The components away from the twist index are
// products of pivots, so exponentially small tails keep full relative
// accuracy instead of sinking into the absolute rounding floor of QL.
void twisted_eigenvector(const TridiagonalHamiltonian& h, double lambda, double tiny, std::span<double> out) {
  const std::size_t n = h.size();
  const auto nonzero = [tiny](double x) { return x == 0.0 ? tiny : x; };
  std::vector<double> top(n), bottom(n);
  top[0] = nonzero(h.diag[0] - lambda);
  for (std::size_t i = 1; i < n; ++i) {
    top[i] = nonzero(h.diag[i] - lambda - h.offdiag[i - 1] * h.offdiag[i - 1] / top[i - 1]);
  }
  bottom[n - 1] = nonzero(h.diag[n - 1] - lambda);
  for (std::size_t i = n - 1; i-- > 0;) {
    bottom[i] = nonzero(h.diag[i] - lambda - h.offdiag[i] * h.offdiag[i] / bottom[i + 1]);
  }
  std::size_t twist = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double gamma = std::abs(top[k] + bottom[k] - (h.diag[k] - lambda));
    if (gamma < best) {
      best = gamma;
      twist = k;
    }
  }
  out[twist] = 1.0;
  for (std::size_t i = twist; i-- > 0;) out[i] = -h.offdiag[i] / top[i] * out[i + 1];
  for (std::size_t i = twist; i + 1 < n; ++i) out[i + 1] = -h.offdiag[i] / bottom[i + 1] * out[i];
  double norm = 0.0;
  for (double x : out) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : out) x /= norm;
}

double lowest_energy(const ChainSpec& tmpl, double alpha) {
  auto spec = tmpl;
  spec.impurities = {{1, alpha}};
  return eigendecompose(spec).energies.front();
}

}  // namespace

SpectralDecomposition eigendecompose(const TridiagonalHamiltonian& h) {
  const std::size_t n = h.size();
  auto raw = symmetric_tridiagonal_eigen(h.diag, h.offdiag);

  SpectralDecomposition dec;
  dec.energies = std::move(raw.values);
  dec.eigvecs = std::move(raw.vectors);

  double scale = 1.0;
  for (double e : dec.energies) scale = std::max(scale, std::abs(e) + 1.0);

  for (std::size_t j = 0; j < n && n > 1; ++j) {
    double gap = std::numeric_limits<double>::infinity();
    if (j > 0) gap = std::min(gap, dec.energies[j] - dec.energies[j - 1]);
    if (j + 1 < n) gap = std::min(gap, dec.energies[j + 1] - dec.energies[j]);
    if (gap >= kTwistGap * scale) {
      twisted_eigenvector(h, dec.energies[j], 1e-200 * scale, {dec.eigvecs.data() + j * n, n});
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    fix_sign({dec.eigvecs.data() + j * n, n});
  }

  double residual = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto v = dec.eigvec(j);
    const auto hv = h.apply(v);
    double r2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = hv[k] - dec.energies[j] * v[k];
      r2 += d * d;
    }
    residual = std::max(residual, std::sqrt(r2));
  }
  dec.residual_bound = residual;
  if (residual > kResidualTol * scale) {
    throw Error(ErrorCode::ConvergenceFailure,
                "eigen residual " + std::to_string(residual) + " exceeds bound");
  }

  for (std::size_t j = 0; j < n; ++j) {
    const auto vj = dec.eigvec(j);
    for (std::size_t k = j; k < n; ++k) {
      const auto vk = dec.eigvec(k);
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += vj[i] * vk[i];
      const double expected = (j == k) ? 1.0 : 0.0;
      if (std::abs(dot - expected) > kOrthoTol) {
        throw Error(ErrorCode::ConvergenceFailure, "eigenvectors " + std::to_string(j) + "," +
                                                       std::to_string(k) + " not orthonormal");
      }
    }
  }
  return dec;
}

SpectralDecomposition eigendecompose(const ChainSpec& spec) {
  return eigendecompose(build_hamiltonian(spec));
}

const char* to_string(BandLabel label) {
  switch (label) {
    case BandLabel::InBand: return "InBand";
    case BandLabel::IsolatedBelow: return "IsolatedBelow";
    case BandLabel::IsolatedAbove: return "IsolatedAbove";
  }
  return "?";
}

std::vector<BandLabel> classify_band(const SpectralDecomposition& dec, double exchange_j,
                                     double field_h) {
  const double edge = 2.0 * std::abs(exchange_j);
  std::vector<BandLabel> labels;
  labels.reserve(dec.size());
  for (double e : dec.energies) {
    const double x = e - field_h;
    if (x < -edge - kBandEdgeTol) {
      labels.push_back(BandLabel::IsolatedBelow);
    } else if (x > edge + kBandEdgeTol) {
      labels.push_back(BandLabel::IsolatedAbove);
    } else {
      labels.push_back(BandLabel::InBand);
    }
  }
  return labels;
}

double estimate_alpha_c(const ChainSpec& tmpl, std::pair<double, double> alpha_range, double tol) {
  if (tmpl.n_sites < 10) {
    throw Error(ErrorCode::TooSmallN, "alpha_c estimation needs n_sites >= 10");
  }
  auto [lo, hi] = alpha_range;
  if (!(lo < hi) || !(tol > 0.0)) {
    throw Error(ErrorCode::NoBracket, "need lo < hi and tol > 0");
  }
  const double edge = tmpl.field_h - 2.0 * std::abs(tmpl.exchange_j);
  double e_lo = lowest_energy(tmpl, lo);
  double e_hi = lowest_energy(tmpl, hi);
  if (!(e_hi < edge)) {
    throw Error(ErrorCode::NoBracket, "E_1(" + std::to_string(hi) + ") is not below the band");
  }
  if (e_lo < edge) {
    throw Error(ErrorCode::NoBracket, "E_1(" + std::to_string(lo) + ") is already below the band");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double e_mid = lowest_energy(tmpl, mid);
    // E_1 decreases strictly with alpha; any violation means the bracket is unusable.
    if (e_mid > e_lo || e_mid < e_hi) {
      throw Error(ErrorCode::NotMonotone, "E_1(alpha) is not monotone near alpha=" + std::to_string(mid));
    }
    if (e_mid < edge) {
      hi = mid;
      e_hi = e_mid;
    } else {
      lo = mid;
      e_lo = e_mid;
    }
  }
  return hi;
}

double denergy_dalpha(const ChainSpec& spec, const SpectralDecomposition& dec, std::size_t j) {
  if (!spec.is_single_edge_impurity()) {
    throw Error(ErrorCode::WrongConfiguration,
                "Hellmann-Feynman derivative needs exactly one impurity, on bond 1");
  }
  if (j >= dec.size()) {
    throw Error(ErrorCode::BadSite, "state index " + std::to_string(j) + " out of range");
  }
  return 2.0 * spec.exchange_j * dec.coeff(j, 0) * dec.coeff(j, 1);
}

double denergy_dalpha(const ChainSpec& spec, std::size_t j) {
  if (!spec.is_single_edge_impurity()) {
    throw Error(ErrorCode::WrongConfiguration,
                "Hellmann-Feynman derivative needs exactly one impurity, on bond 1");
  }
  return denergy_dalpha(spec, eigendecompose(spec), j);
}

}  // namespace xxchain
