#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "xxchain/chain_model.hpp"
#include "xxchain/spectral.hpp"

namespace xxchain {

using Complex = std::complex<double>;

/// One-excitation state: amps[n] is the amplitude of the excitation on site n.
struct AmplitudeVector {
  std::vector<Complex> amps;
  std::optional<double> time_tag;

  static AmplitudeVector from_real(std::span<const double> coeffs);
  static AmplitudeVector delta(std::size_t n_sites, std::size_t site);

  std::size_t size() const { return amps.size(); }
  double norm_squared() const;
};

/// Two-qubit density matrix in the basis {|uu>, |ud>, |du>, |dd>}, where d
/// (spin down) is the excitation and the first label is site_a.
struct TwoQubitDensity {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  std::size_t site_a = 0;
  std::size_t site_b = 1;
};

/// Participation ratio (sum |psi|^2)^2 / sum |psi|^4, in [1, N].
/// Throws Error(NotNormalized) if the norm deviates from 1 by more than 1e-9.
double ipr(const AmplitudeVector& state);
double ipr(std::span<const double> real_state);

/// Reduced state of sites i < j (0-based) for a one-excitation state.
TwoQubitDensity reduced_density_two_sites(const AmplitudeVector& state, std::size_t i, std::size_t j);

/// Throws Error(NotDensityMatrix) unless rho is Hermitian and of unit trace
/// (both to 1e-10) with eigenvalues >= -1e-10.
void check_density(const Eigen::Matrix4cd& rho);

/// C = max(0, l1 - l2 - l3 - l4), with l the descending square roots of the
/// eigenvalues of rho * (sy x sy) rho^* (sy x sy).
double wootters_concurrence(const Eigen::Matrix4cd& rho);
double wootters_concurrence(const TwoQubitDensity& rho);

/// 2 |psi_i psi_{i+1}|, the nearest-neighbour concurrence of a one-excitation state.
double nn_concurrence_closed_form(const AmplitudeVector& state, std::size_t i);
double nn_concurrence_closed_form(std::span<const double> eigvec, std::size_t i);

/// |dE_j/dalpha / J|, which equals C_12 of eigenstate j.
double c12_from_energy_derivative(const ChainSpec& spec, std::size_t j);
double c12_from_energy_derivative(const ChainSpec& spec, const SpectralDecomposition& dec,
                                  std::size_t j);

/// One sample of a per-eigenstate quantity along an alpha sweep.
struct SweepRow {
  double alpha = 0.0;
  std::size_t state = 0;  // 0-based
  double value = 0.0;
};

enum class SweepQuantity { Ipr, ConcurrenceC12 };

/// Evaluates IPR or C_12 for the requested eigenstates (all if empty) of the
/// single-impurity chain derived from `tmpl`, for every alpha in the grid.
/// Rows are ordered by alpha, then state.
std::vector<SweepRow> alpha_sweep(const ChainSpec& tmpl, std::span<const double> alpha_grid,
                                  std::span<const std::size_t> states, SweepQuantity quantity,
                                  bool mirror = false);

struct CurvePeak {
  double alpha = 0.0;
  double height = 0.0;
  bool dominant = false;  // height >= ratio * next-largest local maximum
};

/// Largest local maximum of a sampled curve, ignoring abscissas below
/// `exclude_below`.
CurvePeak find_peak(std::span<const double> alpha, std::span<const double> values,
                    double exclude_below = 0.02, double dominance_ratio = 3.0);

}  // namespace xxchain
