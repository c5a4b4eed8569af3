#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "xxchain/dynamics.hpp"

namespace xxchain {

/// F(alpha, t) for the mirror-impurity chain.
struct Landscape {
  std::vector<double> alpha_grid;
  std::vector<double> t_grid;
  std::vector<double> values;  // values[ia * t_grid.size() + it]

  double at(std::size_t ia, std::size_t it) const { return values[ia * t_grid.size() + it]; }

  struct Point {
    std::size_t alpha_index = 0;
    std::size_t t_index = 0;
    double alpha = 0.0;
    double t = 0.0;
    double fidelity = 0.0;
  };
  /// First grid point (alpha-major order) holding the largest value.
  Point global_max() const;
};

Landscape fidelity_landscape(int n_sites, std::span<const double> alpha_grid, std::span<const double> t_grid,
                             double exchange_j = -1.0, double field_h = 0.0);

/// Time interval where the excitation is expected to refocus on the far end.
struct RefocusWindow {
  double lo = 0.0;
  double hi = 0.0;

  /// [N/4, 3N/4] in units of 1/|J|.
  static RefocusWindow for_chain(int n_sites, double exchange_j = -1.0);
  bool contains(double t) const { return t >= lo && t <= hi; }
};

/// Time of the deepest local minimum of an IPR series with t inside the
/// window (earliest on ties). Neighbouring samples outside the window count
/// when deciding whether a point is a local minimum. Throws
/// Error(NoMinimumInWindow) if there is none.
double detect_refocus_time(const TimeSeries& ipr_series, RefocusWindow window);

struct AlphaScan {
  double alpha = 0.0;
  std::optional<double> t_refocus;  // IPR minimum in the window, if any
  double f_window_max = 0.0;
  double t_at_max = 0.0;
};

struct TransferReport {
  int n_sites = 0;
  double alpha_opt = 0.0;
  double t_tr = 0.0;
  double f_max = 0.0;
  double c_max = 0.0;  // Wootters C_{A,N} at t_tr
  RefocusWindow window;
  std::vector<AlphaScan> per_alpha;
};

struct TransferOptions {
  double dt = 0.05;
  std::optional<RefocusWindow> window;  // default RefocusWindow::for_chain
  double exchange_j = -1.0;
  double field_h = 0.0;
  bool track_refocus = true;  // also locate the IPR minimum per alpha
};

/// Exhaustive search over the alpha grid for the largest fidelity inside the
/// refocus window (mirror impurities). The first grid point wins ties.
TransferReport optimize_alpha(int n_sites, std::span<const double> alpha_grid, const TransferOptions& options = {});

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double correlation = 0.0;
};

struct ScalingReport {
  std::vector<TransferReport> reports;
  std::optional<LinearFit> t_tr_fit;  // t_tr against N; absent for fewer than two chains
};

ScalingReport scaling_sweep(std::span<const int> n_list, std::span<const double> alpha_grid,
                            const TransferOptions& options = {});

std::optional<LinearFit> fit_line(std::span<const double> x, std::span<const double> y);

/// Default alpha grid for optimization, 0.30 to 1.00 in steps of 0.01.
std::vector<double> default_alpha_grid();

}  // namespace xxchain
