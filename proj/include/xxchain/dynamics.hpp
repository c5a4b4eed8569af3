#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "xxchain/measures.hpp"
#include "xxchain/spectral.hpp"

namespace xxchain {

/// Exact one-excitation evolution from a localized excitation:
/// psi_n(t) = sum_j exp(-i E_j t) Psi_n^(j) Psi_init^(j).
///
/// Holds a reference; the decomposition must outlive the propagator.
class Propagator {
 public:
  explicit Propagator(const SpectralDecomposition& dec, std::size_t init_site = 0);

  AmplitudeVector state(double t) const;
  Complex amplitude(std::size_t site, double t) const;

  /// psi(t_k) for every time in the grid, batched as dense products.
  std::vector<AmplitudeVector> states(std::span<const double> t_grid) const;
  /// IPR of psi(t_k); avoids materializing the states.
  std::vector<double> ipr_series(std::span<const double> t_grid) const;

  const SpectralDecomposition& decomposition() const { return *dec_; }
  std::size_t init_site() const { return init_; }

 private:
  const SpectralDecomposition* dec_;
  std::size_t init_;
};

AmplitudeVector propagate(const SpectralDecomposition& dec, std::size_t init_site, double t);

/// f_N(t) = <N| exp(-iHt) |1>.
Complex transfer_amplitude(const SpectralDecomposition& dec, double t);

/// |f_N(t)|^2, the excited population of the last site.
double fidelity(const SpectralDecomposition& dec, double t);

/// Reduced state of (ancilla, last site) after preparing
/// (|u_A d_1> + |d_A u_1>)/sqrt(2) and evolving the chain for time t. The
/// all-up (vacuum) phase is taken as zero.
TwoQubitDensity ancilla_end_density(const SpectralDecomposition& dec, double t);

/// Wootters concurrence of ancilla_end_density; equals |f_N(t)|.
double concurrence_AN(const SpectralDecomposition& dec, double t);

enum class SeriesKind { Ipr, Fidelity, TransferAmplitude, ConcurrenceAN };

const char* to_string(SeriesKind kind);

struct TimeSeries {
  std::vector<double> t_grid;
  std::vector<Complex> values;  // imaginary part is zero except for TransferAmplitude
  SeriesKind kind = SeriesKind::Ipr;

  std::vector<double> real_values() const;
};

/// Throws Error(BadGrid) unless the grid is nonempty and strictly ascending.
TimeSeries time_series(const SpectralDecomposition& dec, SeriesKind kind,
                       std::span<const double> t_grid);

/// lo, lo + step, ... up to hi inclusive (within 1e-9 * step). Points are
/// computed as lo + k * step so long grids do not drift.
std::vector<double> make_grid(double lo, double hi, double step);

void check_grid(std::span<const double> grid);

/// Time of the earliest local maximum of F(t) whose height is at least
/// rel_threshold times the largest F on the grid.
std::optional<double> first_refocus_time(const SpectralDecomposition& dec,
                                         std::span<const double> t_grid, double rel_threshold = 0.5);

}  // namespace xxchain
