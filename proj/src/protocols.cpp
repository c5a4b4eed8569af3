#include "xxchain/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xxchain/error.hpp"
#include "xxchain/parallel.hpp"

namespace xxchain {

Landscape::Point Landscape::global_max() const {
  Point best;
  best.fidelity = -1.0;
  for (std::size_t ia = 0; ia < alpha_grid.size(); ++ia) {
    for (std::size_t it = 0; it < t_grid.size(); ++it) {
      const double v = at(ia, it);
      if (v > best.fidelity) best = {ia, it, alpha_grid[ia], t_grid[it], v};
    }
  }
  return best;
}

Landscape fidelity_landscape(int n_sites, std::span<const double> alpha_grid, std::span<const double> t_grid,
                             double exchange_j, double field_h) {
  check_grid(alpha_grid);
  check_grid(t_grid);
  Landscape out;
  out.alpha_grid.assign(alpha_grid.begin(), alpha_grid.end());
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.values.resize(alpha_grid.size() * t_grid.size());
  parallel_for(alpha_grid.size(), [&](std::size_t ia) {
    const auto dec =
        eigendecompose(ChainSpec::mirror_impurities(n_sites, alpha_grid[ia], exchange_j, field_h));
    for (std::size_t it = 0; it < t_grid.size(); ++it) {
      out.values[ia * t_grid.size() + it] = fidelity(dec, t_grid[it]);
    }
  });
  return out;
}

RefocusWindow RefocusWindow::for_chain(int n_sites, double exchange_j) {
  const double unit = 1.0 / std::abs(exchange_j);
  return {0.25 * n_sites * unit, 0.75 * n_sites * unit};
}

double detect_refocus_time(const TimeSeries& ipr_series, RefocusWindow window) {
  const auto& t = ipr_series.t_grid;
  const auto v = ipr_series.real_values();
  std::optional<std::size_t> best;
  for (std::size_t k = 1; k + 1 < t.size(); ++k) {
    if (!window.contains(t[k])) continue;
    if (v[k] < v[k - 1] && v[k] <= v[k + 1]) {
      if (!best || v[k] < v[*best]) best = k;
    }
  }
  if (!best) {
    throw Error(ErrorCode::NoMinimumInWindow, "no IPR minimum in [" + std::to_string(window.lo) + ", " +
                                                  std::to_string(window.hi) + "]");
  }
  return t[*best];
}

TransferReport optimize_alpha(int n_sites, std::span<const double> alpha_grid, const TransferOptions& options) {
  check_grid(alpha_grid);
  const auto window = options.window.value_or(RefocusWindow::for_chain(n_sites, options.exchange_j));
  const auto t_grid = make_grid(window.lo, window.hi, options.dt);
  // One extra sample on each side so minima at the window edges are detectable.
  const auto ipr_grid = make_grid(window.lo - options.dt, window.hi + options.dt, options.dt);

  TransferReport report;
  report.n_sites = n_sites;
  report.window = window;
  report.per_alpha.resize(alpha_grid.size());

  parallel_for(alpha_grid.size(), [&](std::size_t ia) {
    const double alpha = alpha_grid[ia];
    const auto dec =
        eigendecompose(ChainSpec::mirror_impurities(n_sites, alpha, options.exchange_j, options.field_h));
    AlphaScan scan;
    scan.alpha = alpha;
    scan.f_window_max = -1.0;
    for (double t : t_grid) {
      const double f = fidelity(dec, t);
      if (f > scan.f_window_max) {
        scan.f_window_max = f;
        scan.t_at_max = t;
      }
    }
    if (options.track_refocus) {
      try {
        scan.t_refocus = detect_refocus_time(time_series(dec, SeriesKind::Ipr, ipr_grid), window);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoMinimumInWindow) throw;
      }
    }
    report.per_alpha[ia] = scan;
  });

  const AlphaScan* best = &report.per_alpha.front();
  for (const auto& scan : report.per_alpha) {
    if (scan.f_window_max > best->f_window_max) best = &scan;
  }
  report.alpha_opt = best->alpha;
  report.t_tr = best->t_at_max;
  report.f_max = best->f_window_max;
  const auto dec =
      eigendecompose(ChainSpec::mirror_impurities(n_sites, report.alpha_opt, options.exchange_j, options.field_h));
  report.c_max = concurrence_AN(dec, report.t_tr);
  return report;
}

std::optional<LinearFit> fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.correlation = syy == 0.0 ? 1.0 : sxy / std::sqrt(sxx * syy);
  return fit;
}

ScalingReport scaling_sweep(std::span<const int> n_list, std::span<const double> alpha_grid,
                            const TransferOptions& options) {
  ScalingReport out;
  std::vector<double> ns, ts;
  for (int n : n_list) {
    if (n % 2 != 0) throw Error(ErrorCode::InvalidN, "scaling sweep needs even chain lengths, got " + std::to_string(n));
    out.reports.push_back(optimize_alpha(n, alpha_grid, options));
    ns.push_back(n);
    ts.push_back(out.reports.back().t_tr);
  }
  out.t_tr_fit = fit_line(ns, ts);
  return out;
}

std::vector<double> default_alpha_grid() { return make_grid(0.30, 1.00, 0.01); }

}  // namespace xxchain
