#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "xxchain/chain_model.hpp"

namespace xxchain {

/// Eigenpairs of the one-excitation Hamiltonian.
///
/// State index j and site index n are 0-based here: coeff(j, n) is the
/// amplitude of eigenstate j (energies ascending) on site n. Each eigenvector
/// is normalized and its first coefficient with |x| > 1e-12 is positive.
struct SpectralDecomposition {
  std::vector<double> energies;
  std::vector<double> eigvecs;  // row-major, eigvecs[j * N + n]
  double residual_bound = 0.0;  // max_j |H v_j - E_j v_j|

  std::size_t size() const { return energies.size(); }
  double coeff(std::size_t j, std::size_t n) const { return eigvecs[j * size() + n]; }
  std::span<const double> eigvec(std::size_t j) const {
    return {eigvecs.data() + j * size(), size()};
  }
};

/// Throws Error(ConvergenceFailure) when the residual exceeds
/// 1e-10 * (max|E| + 1) or orthonormality is worse than 1e-10.
SpectralDecomposition eigendecompose(const TridiagonalHamiltonian& h);

/// Shorthand for eigendecompose(build_hamiltonian(spec)).
SpectralDecomposition eigendecompose(const ChainSpec& spec);

enum class BandLabel { InBand, IsolatedBelow, IsolatedAbove };

const char* to_string(BandLabel label);

/// Labels each energy against the infinite-chain band |E - h| <= 2|J|.
/// Energies within 1e-9 of an edge count as in band.
std::vector<BandLabel> classify_band(const SpectralDecomposition& dec, double exchange_j,
                                     double field_h = 0.0);

/// Smallest alpha (to within tol) with E_1(alpha) below the band edge, found by
/// bisection on a single impurity at bond 1. Uses n_sites, exchange_j and
/// field_h of `tmpl`; its impurity list is ignored.
double estimate_alpha_c(const ChainSpec& tmpl, std::pair<double, double> alpha_range, double tol);

/// Hellmann-Feynman derivative dE_j/dalpha = 2 J Psi_1 Psi_2 for a chain whose
/// only impurity is on bond 1. Throws Error(WrongConfiguration) otherwise.
double denergy_dalpha(const ChainSpec& spec, std::size_t j);
double denergy_dalpha(const ChainSpec& spec, const SpectralDecomposition& dec, std::size_t j);

}  // namespace xxchain
