#pragma once

// Brute-force simulator over the full 2^N (or 2^(N+1) with an ancilla) Hilbert
// space. It exists to cross-check the one-excitation machinery and favours
// obviousness over speed.
//
// Basis convention: bit value 0 is spin up (no excitation), 1 is spin down.
// Qubit 0 is the most significant bit. Chain site n (0-based) is qubit n, or
// qubit n + 1 when an ancilla is present; the ancilla is then qubit 0.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xxchain/chain_model.hpp"
#include "xxchain/measures.hpp"

namespace xxchain::oracle {

inline constexpr int kMaxSites = 12;
inline constexpr int kMaxQubits = 13;

struct FullState {
  std::vector<Complex> amps;
  int n_qubits = 0;

  double norm_squared() const;
};

/// XX Hamiltonian assembled from Pauli two-site terms: for every bond,
/// (alpha_b J / 2)(sx sx + sy sy), plus -h sz on every chain site. With
/// `with_ancilla` an uncoupled qubit is prepended. Throws Error(TooLarge) for
/// N > 12.
Eigen::MatrixXd full_hamiltonian(const ChainSpec& spec, bool with_ancilla = false);

/// The N x N block over the one-excitation states |n> (single down spin on
/// chain site n, ancilla up).
Eigen::MatrixXd one_excitation_block(const Eigen::MatrixXd& full, int n_sites, bool with_ancilla = false);

/// Exact evolution through a dense eigendecomposition of the full matrix.
class FullEvolver {
 public:
  explicit FullEvolver(const ChainSpec& spec, bool with_ancilla = false);
  FullState evolve(const FullState& initial, double t) const;
  int n_qubits() const { return n_qubits_; }

 private:
  int n_qubits_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
};

FullState full_evolve(const ChainSpec& spec, const FullState& initial, double t);

/// Embeds a one-excitation chain state (ancilla up when present).
FullState embed_one_excitation(const AmplitudeVector& state, bool with_ancilla = false);
/// (|u_A d_1> + |d_A u_1>)/sqrt(2) on ancilla and chain site 0.
FullState ancilla_bell_state(int n_sites);
/// Bell state (|ud> + |du>)/sqrt(2) of a bare two-qubit register.
FullState two_qubit_state(const Eigen::Vector4cd& amps);

/// Chain amplitudes on the states |n> (ancilla up when present).
AmplitudeVector one_excitation_amplitudes(const FullState& state, int n_sites, bool with_ancilla = false);

/// Probability of each number of down spins, 0..n_qubits.
std::vector<double> excitation_sector_probabilities(const FullState& state);

/// Reduced density matrix of qubits (a, b) in the order {|uu>,|ud>,|du>,|dd>}.
Eigen::Matrix4cd partial_trace_pair(const FullState& state, int qubit_a, int qubit_b);

/// Partial trace to the pair, then Wootters concurrence.
double oracle_concurrence(const FullState& state, int qubit_a, int qubit_b);

struct CheckRow {
  std::string configuration;  // "single" or "mirror"
  int n_sites = 0;
  double alpha = 0.0;
  double block_error = 0.0;
  double amplitude_error = 0.0;    // max over tested times and sites
  double concurrence_error = 0.0;  // max over tested times, |C_AN - |f_N||
  double norm_error = 0.0;
  bool passed = false;
};

struct CheckTolerances {
  double block = 1e-12;
  double amplitude = 1e-8;
  double concurrence = 1e-8;
  double norm = 1e-9;
};

/// Sector-versus-full-space equivalence for every (configuration, N, alpha),
/// at h = 0 and J = -1, over the given times.
std::vector<CheckRow> equivalence_check(std::span<const int> n_list, std::span<const double> alphas,
                                        std::span<const double> times, const CheckTolerances& tol = {});

}  // namespace xxchain::oracle
