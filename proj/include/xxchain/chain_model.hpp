#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xxchain {

/// Exchange bond with a rescaled coupling. Bond b (1-based) joins sites b and b+1.
struct Impurity {
  int bond = 1;
  double alpha = 1.0;

  bool operator==(const Impurity&) const = default;
};

/// Physical parameters of an open XX chain of spin-1/2 sites.
///
/// Defaults follow the usual units: J = -1 (so |J| = 1), h = 0, hbar = 1, and
/// times are measured in 1/|J|.
struct ChainSpec {
  int n_sites = 2;
  double exchange_j = -1.0;
  double field_h = 0.0;
  std::vector<Impurity> impurities;

  static ChainSpec homogeneous(int n, double j = -1.0, double h = 0.0);
  /// Impurity on the first bond only.
  static ChainSpec single_impurity(int n, double alpha, double j = -1.0, double h = 0.0);
  /// Impurities of equal strength on bonds 1 and N-1. For N = 2 both coincide
  /// and a single impurity is produced.
  static ChainSpec mirror_impurities(int n, double alpha, double j = -1.0, double h = 0.0);

  /// Coupling multiplier of a bond: alpha on impurity bonds, 1 elsewhere.
  double bond_strength(int bond) const;

  /// True when the only impurity sits on bond 1.
  bool is_single_edge_impurity() const;
  bool is_mirror_pair() const;

  bool operator==(const ChainSpec&) const = default;
};

/// Returns the spec unchanged, or throws Error with InvalidN, BadBond,
/// NegativeAlpha or ZeroCoupling.
ChainSpec validate_spec(ChainSpec spec);

/// Non-fatal remarks on a valid spec (currently: J > 0).
std::vector<std::string> spec_warnings(const ChainSpec& spec);

/// One-excitation Hamiltonian in compact symmetric tridiagonal form.
struct TridiagonalHamiltonian {
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t size() const { return diag.size(); }

  /// y = H x.
  std::vector<double> apply(std::span<const double> x) const;
};

TridiagonalHamiltonian build_hamiltonian(const ChainSpec& spec);

// Plain-text key/value configuration:
//
//   n_sites = 40
//   exchange_j = -1
//   field_h = 0
//   impurities = 1:0.4, 39:0.4
//
// Blank lines and lines starting with '#' are ignored. Missing keys keep the
// ChainSpec defaults. The result is not validated.
ChainSpec parse_spec_config(std::istream& in);
ChainSpec load_spec_config(const std::string& path);

/// Parses "bond:alpha" pairs separated by commas.
std::vector<Impurity> parse_impurities(std::string_view text);

}  // namespace xxchain
