#include "xxchain/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "xxchain/error.hpp"
#include "xxchain/parallel.hpp"

namespace xxchain {

namespace {

constexpr double kNormTol = 1e-9;
constexpr double kDensityTol = 1e-10;
// Eigenvalues of rho below this (relative) level are treated as exact zeros.
constexpr double kRankCutoff = 1e-13;

double ipr_from_probabilities(const std::vector<double>& p) {
  double s2 = 0.0, s4 = 0.0;
  for (double x : p) {
    s2 += x;
    s4 += x * x;
  }
  if (std::abs(s2 - 1.0) > kNormTol) {
    throw Error(ErrorCode::NotNormalized, "state norm^2 = " + std::to_string(s2));
  }
  return s2 * s2 / s4;
}

const Eigen::Matrix4cd& spin_flip() {
  static const Eigen::Matrix4cd yy = [] {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 3) = -1.0;
    m(1, 2) = 1.0;
    m(2, 1) = 1.0;
    m(3, 0) = -1.0;
    return m;
  }();
  return yy;
}

}  // namespace

AmplitudeVector AmplitudeVector::from_real(std::span<const double> coeffs) {
  AmplitudeVector v;
  v.amps.assign(coeffs.begin(), coeffs.end());
  return v;
}

AmplitudeVector AmplitudeVector::delta(std::size_t n_sites, std::size_t site) {
  AmplitudeVector v;
  v.amps.assign(n_sites, Complex{});
  v.amps.at(site) = 1.0;
  return v;
}

double AmplitudeVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

double ipr(const AmplitudeVector& state) {
  std::vector<double> p(state.size());
  std::transform(state.amps.begin(), state.amps.end(), p.begin(),
                 [](const Complex& a) { return std::norm(a); });
  return ipr_from_probabilities(p);
}

double ipr(std::span<const double> real_state) {
  std::vector<double> p(real_state.size());
  std::transform(real_state.begin(), real_state.end(), p.begin(), [](double a) { return a * a; });
  return ipr_from_probabilities(p);
}

TwoQubitDensity reduced_density_two_sites(const AmplitudeVector& state, std::size_t i, std::size_t j) {
  if (!(i < j) || j >= state.size()) {
    throw Error(ErrorCode::BadSitePair, "need 0 <= i < j < N, got (" + std::to_string(i) + ", " +
                                            std::to_string(j) + ")");
  }
  if (std::abs(state.norm_squared() - 1.0) > kNormTol) {
    throw Error(ErrorCode::NotNormalized, "state is not normalized");
  }
  const Complex psi_i = state.amps[i];
  const Complex psi_j = state.amps[j];
  TwoQubitDensity out;
  out.site_a = i;
  out.site_b = j;
  auto& rho = out.rho;
  rho(0, 0) = 1.0 - std::norm(psi_i) - std::norm(psi_j);
  rho(1, 1) = std::norm(psi_j);
  rho(2, 2) = std::norm(psi_i);
  rho(2, 1) = psi_i * std::conj(psi_j);
  rho(1, 2) = std::conj(rho(2, 1));
  return out;
}

void check_density(const Eigen::Matrix4cd& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kDensityTol) {
    throw Error(ErrorCode::NotDensityMatrix, "matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - Complex(1.0)) > kDensityTol) {
    throw Error(ErrorCode::NotDensityMatrix, "trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kDensityTol) {
    throw Error(ErrorCode::NotDensityMatrix, "negative eigenvalue");
  }
}

double wootters_concurrence(const Eigen::Matrix4cd& rho) {
  check_density(rho);
  const Eigen::Matrix4cd herm = 0.5 * (rho + rho.adjoint());

  // With rho = A A^dagger, the square roots of the eigenvalues of
  // rho (sy x sy) rho^* (sy x sy) are the singular values of A^T (sy x sy) A.
  // Taking singular values directly avoids the square root of eigenvalues that
  // sit at rounding level, which would otherwise leak ~1e-8 into C.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(herm);
  Eigen::Vector4d w = es.eigenvalues();
  const double cutoff = kRankCutoff * std::max(1.0, w.cwiseAbs().maxCoeff());
  for (int k = 0; k < 4; ++k) w(k) = w(k) > cutoff ? std::sqrt(w(k)) : 0.0;
  const Eigen::Matrix4cd a = es.eigenvectors() * w.cast<Complex>().asDiagonal();
  const Eigen::Matrix4cd t = a.transpose() * spin_flip() * a;

  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(t);
  std::array<double, 4> lambda{};
  for (int k = 0; k < 4; ++k) lambda[static_cast<std::size_t>(k)] = svd.singularValues()(k);
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return std::clamp(lambda[0] - lambda[1] - lambda[2] - lambda[3], 0.0, 1.0);
}

double wootters_concurrence(const TwoQubitDensity& rho) { return wootters_concurrence(rho.rho); }

double nn_concurrence_closed_form(const AmplitudeVector& state, std::size_t i) {
  if (i + 1 >= state.size()) {
    throw Error(ErrorCode::BadSite, "site " + std::to_string(i) + " has no right neighbour");
  }
  return 2.0 * std::abs(state.amps[i] * state.amps[i + 1]);
}

double nn_concurrence_closed_form(std::span<const double> eigvec, std::size_t i) {
  if (i + 1 >= eigvec.size()) {
    throw Error(ErrorCode::BadSite, "site " + std::to_string(i) + " has no right neighbour");
  }
  return 2.0 * std::abs(eigvec[i] * eigvec[i + 1]);
}

double c12_from_energy_derivative(const ChainSpec& spec, const SpectralDecomposition& dec,
                                  std::size_t j) {
  return std::abs(denergy_dalpha(spec, dec, j) / spec.exchange_j);
}

double c12_from_energy_derivative(const ChainSpec& spec, std::size_t j) {
  return std::abs(denergy_dalpha(spec, j) / spec.exchange_j);
}

std::vector<SweepRow> alpha_sweep(const ChainSpec& tmpl, std::span<const double> alpha_grid,
                                  std::span<const std::size_t> states, SweepQuantity quantity,
                                  bool mirror) {
  const auto n = static_cast<std::size_t>(tmpl.n_sites);
  std::vector<std::size_t> chosen(states.begin(), states.end());
  if (chosen.empty()) {
    for (std::size_t j = 0; j < n; ++j) chosen.push_back(j);
  }
  for (auto j : chosen) {
    if (j >= n) throw Error(ErrorCode::BadSite, "state index " + std::to_string(j) + " out of range");
  }

  std::vector<std::vector<SweepRow>> per_alpha(alpha_grid.size());
  parallel_for(alpha_grid.size(), [&](std::size_t a) {
    const double alpha = alpha_grid[a];
    const auto spec = mirror ? ChainSpec::mirror_impurities(tmpl.n_sites, alpha, tmpl.exchange_j, tmpl.field_h)
                             : ChainSpec::single_impurity(tmpl.n_sites, alpha, tmpl.exchange_j, tmpl.field_h);
    const auto dec = eigendecompose(spec);
    auto& rows = per_alpha[a];
    rows.reserve(chosen.size());
    for (auto j : chosen) {
      const double value = quantity == SweepQuantity::Ipr ? ipr(dec.eigvec(j))
                                                          : nn_concurrence_closed_form(dec.eigvec(j), 0);
      rows.push_back({alpha, j, value});
    }
  });

  std::vector<SweepRow> out;
  out.reserve(alpha_grid.size() * chosen.size());
  for (auto& rows : per_alpha) out.insert(out.end(), rows.begin(), rows.end());
  std::stable_sort(out.begin(), out.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.alpha < b.alpha || (a.alpha == b.alpha && a.state < b.state);
  });
  return out;
}

CurvePeak find_peak(std::span<const double> alpha, std::span<const double> values,
                    double exclude_below, double dominance_ratio) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (alpha[k] >= exclude_below) idx.push_back(k);
  }
  CurvePeak peak;
  if (idx.empty()) return peak;

  std::vector<double> maxima;
  std::size_t best = idx.front();
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const double v = values[idx[p]];
    const bool left_ok = p == 0 || v >= values[idx[p - 1]];
    const bool right_ok = p + 1 == idx.size() || v > values[idx[p + 1]];
    if (left_ok && right_ok) maxima.push_back(v);
    if (v > values[best]) best = idx[p];
  }
  std::sort(maxima.begin(), maxima.end(), std::greater<>());
  peak.alpha = alpha[best];
  peak.height = values[best];
  peak.dominant = maxima.size() < 2 || maxima[0] >= dominance_ratio * maxima[1];
  return peak;
}

}  // namespace xxchain
