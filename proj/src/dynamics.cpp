#include "xxchain/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "xxchain/error.hpp"

namespace xxchain {

namespace {

constexpr std::size_t kBatch = 512;

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> eigvec_matrix(const SpectralDecomposition& dec) {
  const auto n = static_cast<Eigen::Index>(dec.size());
  return {dec.eigvecs.data(), n, n};
}

// Calls sink(k, re, im) with the real and imaginary parts of psi(t_k) as
// columns, processing the grid in batches.
template <typename Sink>
void for_each_state(const SpectralDecomposition& dec, std::size_t init, std::span<const double> t_grid,
                    Sink&& sink) {
  const auto n = static_cast<Eigen::Index>(dec.size());
  const auto w = eigvec_matrix(dec);  // w(j, site)
  for (std::size_t start = 0; start < t_grid.size(); start += kBatch) {
    const auto count = static_cast<Eigen::Index>(std::min(kBatch, t_grid.size() - start));
    Eigen::MatrixXd cos_part(n, count), sin_part(n, count);
    for (Eigen::Index k = 0; k < count; ++k) {
      const double t = t_grid[start + static_cast<std::size_t>(k)];
      for (Eigen::Index j = 0; j < n; ++j) {
        const double c = w(j, static_cast<Eigen::Index>(init));
        const double phase = dec.energies[static_cast<std::size_t>(j)] * t;
        cos_part(j, k) = c * std::cos(phase);
        sin_part(j, k) = -c * std::sin(phase);
      }
    }
    Eigen::MatrixXd re = w.transpose() * cos_part;
    Eigen::MatrixXd im = w.transpose() * sin_part;
    for (Eigen::Index k = 0; k < count; ++k) {
      if (t_grid[start + static_cast<std::size_t>(k)] != 0.0) continue;
      // exp(0) is the identity; skip the rounding of V V^T.
      re.col(k).setZero();
      im.col(k).setZero();
      re(static_cast<Eigen::Index>(init), k) = 1.0;
    }
    for (Eigen::Index k = 0; k < count; ++k) {
      sink(start + static_cast<std::size_t>(k), re.col(k), im.col(k));
    }
  }
}

}  // namespace

Propagator::Propagator(const SpectralDecomposition& dec, std::size_t init_site)
    : dec_(&dec), init_(init_site) {
  if (init_site >= dec.size()) {
    throw Error(ErrorCode::BadSite, "initial site " + std::to_string(init_site) + " out of range");
  }
}

Complex Propagator::amplitude(std::size_t site, double t) const {
  if (t == 0.0) return site == init_ ? 1.0 : 0.0;
  Complex sum{};
  for (std::size_t j = 0; j < dec_->size(); ++j) {
    const double weight = dec_->coeff(j, site) * dec_->coeff(j, init_);
    sum += weight * std::polar(1.0, -dec_->energies[j] * t);
  }
  return sum;
}

AmplitudeVector Propagator::state(double t) const {
  AmplitudeVector out;
  out.amps.resize(dec_->size());
  for (std::size_t n = 0; n < dec_->size(); ++n) out.amps[n] = amplitude(n, t);
  out.time_tag = t;
  return out;
}

std::vector<AmplitudeVector> Propagator::states(std::span<const double> t_grid) const {
  std::vector<AmplitudeVector> out(t_grid.size());
  for_each_state(*dec_, init_, t_grid, [&](std::size_t k, const auto& re, const auto& im) {
    auto& v = out[k];
    v.time_tag = t_grid[k];
    v.amps.resize(static_cast<std::size_t>(re.size()));
    for (Eigen::Index n = 0; n < re.size(); ++n) v.amps[static_cast<std::size_t>(n)] = {re(n), im(n)};
  });
  return out;
}

std::vector<double> Propagator::ipr_series(std::span<const double> t_grid) const {
  std::vector<double> out(t_grid.size());
  for_each_state(*dec_, init_, t_grid, [&](std::size_t k, const auto& re, const auto& im) {
    const Eigen::VectorXd p = re.cwiseAbs2() + im.cwiseAbs2();
    const double s2 = p.sum();
    if (std::abs(s2 - 1.0) > 1e-9) {
      throw Error(ErrorCode::NotNormalized, "propagated state lost norm at t=" + std::to_string(t_grid[k]));
    }
    out[k] = s2 * s2 / p.squaredNorm();
  });
  return out;
}

AmplitudeVector propagate(const SpectralDecomposition& dec, std::size_t init_site, double t) {
  return Propagator(dec, init_site).state(t);
}

Complex transfer_amplitude(const SpectralDecomposition& dec, double t) {
  return Propagator(dec, 0).amplitude(dec.size() - 1, t);
}

double fidelity(const SpectralDecomposition& dec, double t) { return std::norm(transfer_amplitude(dec, t)); }

TwoQubitDensity ancilla_end_density(const SpectralDecomposition& dec, double t) {
  const Complex f = transfer_amplitude(dec, t);
  const double p = std::norm(f);
  TwoQubitDensity out;
  out.site_a = 0;  // ancilla
  out.site_b = dec.size() - 1;
  out.rho(0, 0) = 0.5 * (1.0 - p);
  out.rho(1, 1) = 0.5 * p;
  out.rho(2, 2) = 0.5;
  // <u_A d_N| rho |d_A u_N> with the vacuum branch carrying phase 1.
  out.rho(1, 2) = 0.5 * f;
  out.rho(2, 1) = std::conj(out.rho(1, 2));
  return out;
}

double concurrence_AN(const SpectralDecomposition& dec, double t) {
  return wootters_concurrence(ancilla_end_density(dec, t));
}

const char* to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::Ipr: return "ipr";
    case SeriesKind::Fidelity: return "fidelity";
    case SeriesKind::TransferAmplitude: return "amplitude";
    case SeriesKind::ConcurrenceAN: return "concurrence";
  }
  return "?";
}

std::vector<double> TimeSeries::real_values() const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](const Complex& c) { return c.real(); });
  return out;
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorCode::BadGrid, "grid is empty");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw Error(ErrorCode::BadGrid, "grid is not strictly ascending");
  }
}

TimeSeries time_series(const SpectralDecomposition& dec, SeriesKind kind, std::span<const double> t_grid) {
  check_grid(t_grid);
  TimeSeries out;
  out.kind = kind;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.values.resize(t_grid.size());
  switch (kind) {
    case SeriesKind::Ipr: {
      const auto values = Propagator(dec, 0).ipr_series(t_grid);
      std::copy(values.begin(), values.end(), out.values.begin());
      break;
    }
    case SeriesKind::Fidelity:
      for (std::size_t k = 0; k < t_grid.size(); ++k) out.values[k] = fidelity(dec, t_grid[k]);
      break;
    case SeriesKind::TransferAmplitude:
      for (std::size_t k = 0; k < t_grid.size(); ++k) out.values[k] = transfer_amplitude(dec, t_grid[k]);
      break;
    case SeriesKind::ConcurrenceAN:
      for (std::size_t k = 0; k < t_grid.size(); ++k) out.values[k] = concurrence_AN(dec, t_grid[k]);
      break;
  }
  return out;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::BadGrid, "need step > 0 and hi >= lo");
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = lo + static_cast<double>(k) * step;
  return grid;
}

std::optional<double> first_refocus_time(const SpectralDecomposition& dec, std::span<const double> t_grid,
                                         double rel_threshold) {
  check_grid(t_grid);
  std::vector<double> f(t_grid.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) f[k] = fidelity(dec, t_grid[k]);
  const double top = *std::max_element(f.begin(), f.end());
  if (top <= 0.0) return std::nullopt;
  for (std::size_t k = 1; k + 1 < f.size(); ++k) {
    if (f[k] >= f[k - 1] && f[k] > f[k + 1] && f[k] >= rel_threshold * top) return t_grid[k];
  }
  return std::nullopt;
}

}  // namespace xxchain
