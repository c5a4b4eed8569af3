#include "xxchain/cli.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "xxchain/dynamics.hpp"
#include "xxchain/error.hpp"
#include "xxchain/io.hpp"
#include "xxchain/measures.hpp"
#include "xxchain/oracle.hpp"
#include "xxchain/protocols.hpp"
#include "xxchain/spectral.hpp"

namespace xxchain::cli {

namespace {

// Raised for bad flag values; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;

  std::vector<double> grid() const { return make_grid(lo, hi, step); }
};

struct Options {
  std::optional<int> n;
  std::optional<double> alpha;
  std::string alpha_range;
  std::string t_range;
  bool mirror = false;
  std::optional<double> h;
  std::optional<double> j;
  std::string out;
  std::string format = "csv";
  std::string config;
  bool seedless = false;

  // Subcommand-specific.
  std::string states;
  std::string eigvec;
  std::string kind = "fidelity";
  std::optional<double> t_max;
  double dt = 0.05;
  std::string n_list;
};

double parse_double(const std::string& text, const std::string& flag) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError(flag + ": cannot parse number '" + text + "'");
  }
  return v;
}

Range parse_range(const std::string& text, const std::string& flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw UsageError(flag + ": expected lo:hi:step, got '" + text + "'");
  Range r{parse_double(parts[0], flag), parse_double(parts[1], flag), parse_double(parts[2], flag)};
  if (!(r.step > 0.0) || !(r.hi >= r.lo)) throw UsageError(flag + ": need step > 0 and hi >= lo");
  return r;
}

// Comma-separated integers with optional a-b ranges, e.g. "1,3,5-9".
std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    const auto dash = item.find('-', 1);
    const auto as_int = [&](const std::string& s) {
      int v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw UsageError(flag + ": cannot parse integer '" + s + "'");
      }
      return v;
    };
    if (dash == std::string::npos) {
      out.push_back(as_int(item));
    } else {
      const int a = as_int(item.substr(0, dash));
      const int b = as_int(item.substr(dash + 1));
      if (b < a) throw UsageError(flag + ": empty range '" + item + "'");
      for (int k = a; k <= b; ++k) out.push_back(k);
    }
  }
  return out;
}

std::vector<std::size_t> parse_states(const std::string& text, int n_sites, const std::string& flag) {
  std::vector<std::size_t> out;
  for (int j : parse_int_list(text, flag)) {
    if (j < 1 || j > n_sites) throw UsageError(flag + ": state " + std::to_string(j) + " outside 1.." + std::to_string(n_sites));
    out.push_back(static_cast<std::size_t>(j - 1));
  }
  return out;
}

std::string flag_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidN: return "--n";
    case ErrorCode::BadBond: return "--mirror/impurities";
    case ErrorCode::NegativeAlpha: return "--alpha";
    case ErrorCode::ZeroCoupling: return "--j";
    default: return "config";
  }
}

// Chain parameters from the optional config file, overridden by flags.
ChainSpec base_spec(const Options& o) {
  ChainSpec spec = o.config.empty() ? ChainSpec{} : load_spec_config(o.config);
  if (o.n) spec.n_sites = *o.n;
  if (o.j) spec.exchange_j = *o.j;
  if (o.h) spec.field_h = *o.h;
  if (o.alpha) {
    spec.impurities = o.mirror ? ChainSpec::mirror_impurities(spec.n_sites, *o.alpha).impurities
                               : ChainSpec::single_impurity(spec.n_sites, *o.alpha).impurities;
  }
  if (!o.n && o.config.empty()) throw UsageError("--n is required");
  try {
    return validate_spec(spec);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BadBond && spec.n_sites < 2) throw;
    throw UsageError(flag_for(e.code()) + ": " + e.what());
  }
}

ChainSpec with_alpha(const ChainSpec& base, double alpha, bool mirror) {
  auto spec = mirror ? ChainSpec::mirror_impurities(base.n_sites, alpha, base.exchange_j, base.field_h)
                     : ChainSpec::single_impurity(base.n_sites, alpha, base.exchange_j, base.field_h);
  try {
    return validate_spec(spec);
  } catch (const Error& e) {
    throw UsageError(flag_for(e.code()) + ": " + e.what());
  }
}

std::vector<double> alpha_grid(const Options& o, const std::string& fallback) {
  if (!o.alpha_range.empty()) return parse_range(o.alpha_range, "--alpha-range").grid();
  if (o.alpha) return {*o.alpha};
  return parse_range(fallback, "--alpha-range").grid();
}

std::string render(const io::CsvTable& table) {
  std::ostringstream ss;
  io::emit_csv(ss, table);
  return ss.str();
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--n", o.n, "Number of spins N");
  app->add_option("--alpha", o.alpha, "Impurity strength alpha");
  app->add_option("--alpha-range", o.alpha_range, "Alpha grid lo:hi:step");
  app->add_option("--t-range", o.t_range, "Time grid lo:hi:step (units 1/|J|)");
  app->add_flag("--mirror", o.mirror, "Impurities on bonds 1 and N-1");
  app->add_option("--h", o.h, "Uniform field h");
  app->add_option("--j", o.j, "Exchange coupling J");
  app->add_option("--out", o.out, "Output path (stdout if omitted)");
  app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--config", o.config, "Key-value chain configuration file");
  app->add_flag("--seedless", o.seedless, "Accepted for compatibility; runs are always deterministic");
}

int cmd_spectrum(const Options& o, std::ostream& out) {
  const auto base = base_spec(o);
  const auto grid = alpha_grid(o, "0:3:0.01");
  const auto eig_states = o.eigvec.empty() ? std::vector<std::size_t>{} : parse_states(o.eigvec, base.n_sites, "--eigvec");
  io::CsvTable table;
  table.header = eig_states.empty() ? std::vector<std::string>{"alpha", "j", "energy", "label"}
                                    : std::vector<std::string>{"alpha", "j", "site", "coefficient"};
  for (double alpha : grid) {
    const auto spec = with_alpha(base, alpha, o.mirror);
    const auto dec = eigendecompose(spec);
    if (eig_states.empty()) {
      const auto labels = classify_band(dec, spec.exchange_j, spec.field_h);
      for (std::size_t j = 0; j < dec.size(); ++j) {
        table.rows.push_back({alpha, static_cast<double>(j + 1), dec.energies[j], std::string(to_string(labels[j]))});
      }
    } else {
      for (auto j : eig_states) {
        for (std::size_t n = 0; n < dec.size(); ++n) {
          table.rows.push_back({alpha, static_cast<double>(j + 1), static_cast<double>(n + 1), dec.coeff(j, n)});
        }
      }
    }
  }
  io::write_output(o.out, out, render(table));
  return 0;
}

int cmd_sweep(const Options& o, std::ostream& out, SweepQuantity quantity) {
  const auto base = base_spec(o);
  const auto grid = alpha_grid(o, quantity == SweepQuantity::Ipr ? "0:3:0.005" : "0:2:0.005");
  const auto states = o.states.empty() ? std::vector<std::size_t>{} : parse_states(o.states, base.n_sites, "--states");
  const auto rows = alpha_sweep(base, grid, states, quantity, o.mirror);
  io::CsvTable table;
  table.header = {"alpha", "j", "value"};
  for (const auto& r : rows) table.rows.push_back({r.alpha, static_cast<double>(r.state + 1), r.value});
  io::write_output(o.out, out, render(table));
  return 0;
}

SeriesKind parse_kind(const std::string& name) {
  if (name == "ipr") return SeriesKind::Ipr;
  if (name == "fidelity") return SeriesKind::Fidelity;
  if (name == "amplitude") return SeriesKind::TransferAmplitude;
  if (name == "concurrence") return SeriesKind::ConcurrenceAN;
  throw UsageError("--kind: unknown kind '" + name + "'");
}

// One kind gives t,value (t,re,im for the amplitude); several give one column
// per kind. An alpha grid prepends an alpha column.
int cmd_evolve(const Options& o, std::ostream& out) {
  const auto base = base_spec(o);
  std::vector<double> t_grid;
  if (!o.t_range.empty()) {
    t_grid = parse_range(o.t_range, "--t-range").grid();
  } else {
    if (!(o.dt > 0.0)) throw UsageError("--dt: must be positive");
    t_grid = make_grid(0.0, o.t_max.value_or(base.n_sites), o.dt);
  }
  std::vector<SeriesKind> kinds;
  std::stringstream ss(o.kind);
  for (std::string item; std::getline(ss, item, ',');) kinds.push_back(parse_kind(item));
  if (kinds.empty()) throw UsageError("--kind: empty");

  std::vector<ChainSpec> specs;
  std::vector<double> alphas;
  if (!o.alpha_range.empty()) {
    alphas = parse_range(o.alpha_range, "--alpha-range").grid();
    for (double a : alphas) specs.push_back(with_alpha(base, a, o.mirror));
  } else {
    specs.push_back(o.alpha ? with_alpha(base, *o.alpha, o.mirror) : base);
  }

  io::CsvTable table;
  if (!alphas.empty()) table.header.push_back("alpha");
  table.header.push_back("t");
  for (auto kind : kinds) {
    const bool single = kinds.size() == 1;
    if (kind == SeriesKind::TransferAmplitude) {
      table.header.push_back(single ? "re" : "amplitude_re");
      table.header.push_back(single ? "im" : "amplitude_im");
    } else {
      table.header.push_back(single ? "value" : to_string(kind));
    }
  }
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const auto dec = eigendecompose(specs[s]);
    std::vector<TimeSeries> series;
    for (auto kind : kinds) series.push_back(time_series(dec, kind, t_grid));
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
      std::vector<io::CsvCell> row;
      if (!alphas.empty()) row.push_back(alphas[s]);
      row.push_back(t_grid[k]);
      for (const auto& ts : series) {
        row.push_back(ts.values[k].real());
        if (ts.kind == SeriesKind::TransferAmplitude) row.push_back(ts.values[k].imag());
      }
      table.rows.push_back(std::move(row));
    }
  }
  io::write_output(o.out, out, render(table));
  return 0;
}

int cmd_landscape(const Options& o, std::ostream& out) {
  const auto base = base_spec(o);
  const auto grid = alpha_grid(o, "0.1:1.5:0.02");
  const auto t_grid = o.t_range.empty() ? make_grid(0.0, 1.3 * base.n_sites, 0.1) : parse_range(o.t_range, "--t-range").grid();
  for (double a : grid) with_alpha(base, a, true);
  const auto land = fidelity_landscape(base.n_sites, grid, t_grid, base.exchange_j, base.field_h);
  io::CsvTable table;
  table.header = {"alpha", "t", "fidelity"};
  for (std::size_t ia = 0; ia < grid.size(); ++ia) {
    for (std::size_t it = 0; it < t_grid.size(); ++it) table.rows.push_back({grid[ia], t_grid[it], land.at(ia, it)});
  }
  io::write_output(o.out, out, render(table));
  return 0;
}

TransferOptions transfer_options(const Options& o, const ChainSpec& base) {
  TransferOptions opts;
  if (!(o.dt > 0.0)) throw UsageError("--dt: must be positive");
  opts.dt = o.dt;
  opts.exchange_j = base.exchange_j;
  opts.field_h = base.field_h;
  if (!o.t_range.empty()) {
    const auto r = parse_range(o.t_range, "--t-range");
    opts.window = RefocusWindow{r.lo, r.hi};
    opts.dt = r.step;
  }
  return opts;
}

int cmd_optimize(const Options& o, std::ostream& out) {
  const auto base = base_spec(o);
  const auto grid = alpha_grid(o, "0.3:1.0:0.01");
  for (double a : grid) with_alpha(base, a, true);
  const auto report = optimize_alpha(base.n_sites, grid, transfer_options(o, base));
  if (o.format == "csv") {
    io::CsvTable table;
    table.header = {"alpha", "t_refocus", "f_window_max", "t_at_max"};
    for (const auto& s : report.per_alpha) {
      table.rows.push_back({s.alpha, s.t_refocus ? io::CsvCell(*s.t_refocus) : io::CsvCell(std::string()), s.f_window_max, s.t_at_max});
    }
    io::write_output(o.out, out, render(table));
  } else {
    io::write_output(o.out, out, io::to_json(report).dump(2) + "\n");
  }
  return 0;
}

int cmd_scaling(const Options& o, std::ostream& out) {
  ChainSpec base;
  if (!o.config.empty()) base = load_spec_config(o.config);
  if (o.j) base.exchange_j = *o.j;
  if (o.h) base.field_h = *o.h;
  const auto ns = parse_int_list(o.n_list.empty() ? "50,100,200,400" : o.n_list, "--n-list");
  if (ns.empty()) throw UsageError("--n-list: empty");
  for (int n : ns) {
    base.n_sites = n;
    if (n < 2) throw UsageError("--n-list: InvalidN: n_sites must be >= 2, got " + std::to_string(n));
    if (n % 2 != 0) throw UsageError("--n-list: chain lengths must be even, got " + std::to_string(n));
  }
  const auto grid = alpha_grid(o, "0.3:1.0:0.01");
  const auto report = scaling_sweep(ns, grid, transfer_options(o, base));
  io::write_output(o.out, out, io::to_json(report).dump(2) + "\n");
  return 0;
}

int cmd_oracle_check(const Options& o, std::ostream& out) {
  const auto ns = parse_int_list(o.n_list.empty() ? "2-8" : o.n_list, "--n-list");
  for (int n : ns) {
    if (n < 2 || n > oracle::kMaxSites - 1) throw UsageError("--n-list: N must lie in 2.." + std::to_string(oracle::kMaxSites - 1));
  }
  const std::vector<double> alphas = o.alpha ? std::vector<double>{*o.alpha} : std::vector<double>{0.4, 1.0, 3.0};
  const std::vector<double> times{1.0, 5.0, 20.0};
  const auto rows = oracle::equivalence_check(ns, alphas, times);
  std::ostringstream ss;
  ss << std::left << std::setw(8) << "config" << std::setw(4) << "N" << std::setw(7) << "alpha" << std::setw(20)
     << "block_err" << std::setw(20) << "amp_err" << std::setw(20) << "conc_err" << std::setw(20) << "norm_err"
     << "result\n";
  bool all = true;
  for (const auto& r : rows) {
    ss << std::left << std::setw(8) << r.configuration << std::setw(4) << r.n_sites << std::setw(7)
       << io::format_number(r.alpha) << std::setw(20) << io::format_number(r.block_error) << std::setw(20)
       << io::format_number(r.amplitude_error) << std::setw(20) << io::format_number(r.concurrence_error)
       << std::setw(20) << io::format_number(r.norm_error) << (r.passed ? "PASS" : "FAIL") << "\n";
    all = all && r.passed;
  }
  ss << (all ? "all checks passed\n" : "some checks FAILED\n");
  io::write_output(o.out, out, ss.str());
  return all ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"One-excitation dynamics of XX chains with edge bond impurities"};
  app.set_help_flag("--help", "Print help and exit");  // -h is the field
  app.require_subcommand(1);
  Options o;

  auto* spectrum = app.add_subcommand("spectrum", "Energies and band labels over an alpha grid");
  add_common(spectrum, o);
  spectrum->add_option("--eigvec", o.eigvec, "Emit coefficients of these states (1-based, e.g. 1,20)");

  auto* ipr_sweep = app.add_subcommand("ipr-sweep", "IPR of eigenstates over an alpha grid");
  add_common(ipr_sweep, o);
  ipr_sweep->add_option("--states", o.states, "States to report (1-based, e.g. 1,2,5-9)");

  auto* conc_sweep = app.add_subcommand("concurrence-sweep", "C_12 of eigenstates over an alpha grid");
  add_common(conc_sweep, o);
  conc_sweep->add_option("--states", o.states, "States to report (1-based, e.g. 1,2,5-9)");

  auto* evolve = app.add_subcommand("evolve", "Time series from an excitation on site 1");
  add_common(evolve, o);
  evolve->add_option("--kind", o.kind, "Comma-separated: ipr, fidelity, amplitude, concurrence");
  evolve->add_option("--t-max", o.t_max, "Final time (default N)");
  evolve->add_option("--dt", o.dt, "Time step");

  auto* landscape = app.add_subcommand("landscape", "Fidelity over (alpha, t) for mirror impurities");
  add_common(landscape, o);

  auto* optimize = app.add_subcommand("optimize", "alpha_opt for one chain length");
  add_common(optimize, o);
  optimize->add_option("--dt", o.dt, "Time step inside the refocus window");

  auto* scaling = app.add_subcommand("scaling", "alpha_opt and t_tr for several chain lengths");
  add_common(scaling, o);
  scaling->add_option("--n-list", o.n_list, "Chain lengths, e.g. 50,100,200,400");
  scaling->add_option("--dt", o.dt, "Time step inside the refocus window");

  auto* oracle_check = app.add_subcommand("oracle-check", "Compare against full Hilbert-space evolution");
  add_common(oracle_check, o);
  oracle_check->add_option("--n-list", o.n_list, "Chain lengths (default 2-8)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto warn = [&](const ChainSpec& s) {
      for (const auto& w : spec_warnings(s)) err << "warning: " << w << "\n";
    };
    if (o.j) warn(ChainSpec{2, *o.j, 0.0, {}});
    if (!o.config.empty() && load_spec_config(o.config).is_mirror_pair()) o.mirror = true;

    if (spectrum->parsed()) return cmd_spectrum(o, out);
    if (ipr_sweep->parsed()) return cmd_sweep(o, out, SweepQuantity::Ipr);
    if (conc_sweep->parsed()) return cmd_sweep(o, out, SweepQuantity::ConcurrenceC12);
    if (evolve->parsed()) return cmd_evolve(o, out);
    if (landscape->parsed()) return cmd_landscape(o, out);
    if (optimize->parsed()) return cmd_optimize(o, out);
    if (scaling->parsed()) return cmd_scaling(o, out);
    if (oracle_check->parsed()) return cmd_oracle_check(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::InvalidN:
      case ErrorCode::BadBond:
      case ErrorCode::NegativeAlpha:
      case ErrorCode::ZeroCoupling:
      case ErrorCode::ParseError:
      case ErrorCode::BadGrid:
        err << "usage error: " << flag_for(e.code()) << ": " << e.what() << "\n";
        return 2;
      default:
        err << "error: " << e.what() << "\n";
        return 1;
    }
  }
  return 2;
}

}  // namespace xxchain::cli
