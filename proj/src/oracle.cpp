#include "xxchain/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "xxchain/dynamics.hpp"
#include "xxchain/error.hpp"
#include "xxchain/spectral.hpp"

namespace xxchain::oracle {

namespace {

enum class Pauli { X, Y, Z };

struct BasisTerm {
  std::uint64_t index;
  Complex phase;
};

// sigma acting on one qubit of a computational basis state.
BasisTerm apply_pauli(Pauli p, int qubit, int n_qubits, BasisTerm in) {
  const std::uint64_t mask = std::uint64_t{1} << (n_qubits - 1 - qubit);
  const bool down = (in.index & mask) != 0;
  switch (p) {
    case Pauli::X: return {in.index ^ mask, in.phase};
    case Pauli::Y: return {in.index ^ mask, in.phase * (down ? Complex(0, -1) : Complex(0, 1))};
    case Pauli::Z: return {in.index, in.phase * (down ? -1.0 : 1.0)};
  }
  return in;
}

void check_size(int n_sites, bool with_ancilla) {
  if (n_sites > kMaxSites || n_sites + (with_ancilla ? 1 : 0) > kMaxQubits) {
    throw Error(ErrorCode::TooLarge, "full-space oracle limited to N <= " + std::to_string(kMaxSites));
  }
}

std::uint64_t site_mask(int site, int n_sites, bool with_ancilla) {
  const int n_qubits = n_sites + (with_ancilla ? 1 : 0);
  const int qubit = site + (with_ancilla ? 1 : 0);
  return std::uint64_t{1} << (n_qubits - 1 - qubit);
}

}  // namespace

double FullState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

Eigen::MatrixXd full_hamiltonian(const ChainSpec& spec_in, bool with_ancilla) {
  const auto spec = validate_spec(spec_in);
  check_size(spec.n_sites, with_ancilla);
  const int offset = with_ancilla ? 1 : 0;
  const int n_qubits = spec.n_sites + offset;
  const auto dim = std::int64_t{1} << n_qubits;

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::int64_t s = 0; s < dim; ++s) {
    const BasisTerm ket{static_cast<std::uint64_t>(s), 1.0};
    for (int bond = 1; bond < spec.n_sites; ++bond) {
      const int qa = bond - 1 + offset;
      const int qb = bond + offset;
      const double coupling = 0.5 * spec.bond_strength(bond) * spec.exchange_j;
      for (Pauli p : {Pauli::X, Pauli::Y}) {
        const auto out = apply_pauli(p, qa, n_qubits, apply_pauli(p, qb, n_qubits, ket));
        h(static_cast<Eigen::Index>(out.index), s) += coupling * out.phase;
      }
    }
    for (int site = 0; site < spec.n_sites; ++site) {
      const auto out = apply_pauli(Pauli::Z, site + offset, n_qubits, ket);
      h(static_cast<Eigen::Index>(out.index), s) += -spec.field_h * out.phase;
    }
  }
  if (h.imag().cwiseAbs().maxCoeff() > 0.0) {
    throw Error(ErrorCode::ConvergenceFailure, "XX Hamiltonian should be real in the computational basis");
  }
  return h.real();
}

Eigen::MatrixXd one_excitation_block(const Eigen::MatrixXd& full, int n_sites, bool with_ancilla) {
  Eigen::MatrixXd block(n_sites, n_sites);
  for (int a = 0; a < n_sites; ++a) {
    for (int b = 0; b < n_sites; ++b) {
      block(a, b) = full(static_cast<Eigen::Index>(site_mask(a, n_sites, with_ancilla)),
                         static_cast<Eigen::Index>(site_mask(b, n_sites, with_ancilla)));
    }
  }
  return block;
}

FullEvolver::FullEvolver(const ChainSpec& spec, bool with_ancilla)
    : n_qubits_(spec.n_sites + (with_ancilla ? 1 : 0)) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full_hamiltonian(spec, with_ancilla));
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "dense eigensolver failed");
  }
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

FullState FullEvolver::evolve(const FullState& initial, double t) const {
  if (initial.n_qubits != n_qubits_) {
    throw Error(ErrorCode::TooLarge, "state has " + std::to_string(initial.n_qubits) + " qubits, evolver " +
                                         std::to_string(n_qubits_));
  }
  const Eigen::Map<const Eigen::VectorXcd> psi0(initial.amps.data(), static_cast<Eigen::Index>(initial.amps.size()));
  Eigen::VectorXcd coeffs = vectors_.transpose().cast<Complex>() * psi0;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) *= std::polar(1.0, -energies_(k) * t);
  const Eigen::VectorXcd psi = vectors_.cast<Complex>() * coeffs;
  FullState out;
  out.n_qubits = n_qubits_;
  out.amps.assign(psi.data(), psi.data() + psi.size());
  return out;
}

FullState full_evolve(const ChainSpec& spec, const FullState& initial, double t) {
  const bool with_ancilla = initial.n_qubits == spec.n_sites + 1;
  return FullEvolver(spec, with_ancilla).evolve(initial, t);
}

FullState embed_one_excitation(const AmplitudeVector& state, bool with_ancilla) {
  const int n_sites = static_cast<int>(state.size());
  check_size(n_sites, with_ancilla);
  FullState out;
  out.n_qubits = n_sites + (with_ancilla ? 1 : 0);
  out.amps.assign(std::size_t{1} << out.n_qubits, Complex{});
  for (int n = 0; n < n_sites; ++n) {
    out.amps[site_mask(n, n_sites, with_ancilla)] = state.amps[static_cast<std::size_t>(n)];
  }
  return out;
}

FullState ancilla_bell_state(int n_sites) {
  check_size(n_sites, true);
  FullState out;
  out.n_qubits = n_sites + 1;
  out.amps.assign(std::size_t{1} << out.n_qubits, Complex{});
  const std::uint64_t ancilla_down = std::uint64_t{1} << n_sites;
  const double r = 1.0 / std::sqrt(2.0);
  out.amps[site_mask(0, n_sites, true)] = r;  // ancilla up, site 1 down
  out.amps[ancilla_down] = r;                 // ancilla down, chain all up
  return out;
}

FullState two_qubit_state(const Eigen::Vector4cd& amps) {
  FullState out;
  out.n_qubits = 2;
  out.amps.assign(amps.data(), amps.data() + 4);
  return out;
}

AmplitudeVector one_excitation_amplitudes(const FullState& state, int n_sites, bool with_ancilla) {
  AmplitudeVector out;
  out.amps.resize(static_cast<std::size_t>(n_sites));
  for (int n = 0; n < n_sites; ++n) {
    out.amps[static_cast<std::size_t>(n)] = state.amps[site_mask(n, n_sites, with_ancilla)];
  }
  return out;
}

std::vector<double> excitation_sector_probabilities(const FullState& state) {
  std::vector<double> p(static_cast<std::size_t>(state.n_qubits) + 1, 0.0);
  for (std::size_t s = 0; s < state.amps.size(); ++s) {
    p[static_cast<std::size_t>(std::popcount(s))] += std::norm(state.amps[s]);
  }
  return p;
}

Eigen::Matrix4cd partial_trace_pair(const FullState& state, int qubit_a, int qubit_b) {
  if (qubit_a == qubit_b || qubit_a < 0 || qubit_b < 0 || qubit_a >= state.n_qubits ||
      qubit_b >= state.n_qubits) {
    throw Error(ErrorCode::BadSitePair, "invalid qubit pair");
  }
  if (state.n_qubits > kMaxQubits) throw Error(ErrorCode::TooLarge, "too many qubits");
  const std::uint64_t ma = std::uint64_t{1} << (state.n_qubits - 1 - qubit_a);
  const std::uint64_t mb = std::uint64_t{1} << (state.n_qubits - 1 - qubit_b);
  const auto pair_index = [&](std::uint64_t s) { return ((s & ma) ? 2 : 0) + ((s & mb) ? 1 : 0); };

  // rho_{xy} = sum over environment e of psi(x, e) psi(y, e)^*.
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (std::uint64_t s = 0; s < state.amps.size(); ++s) {
    if (state.amps[s] == Complex{}) continue;
    const std::uint64_t env = s & ~(ma | mb);
    for (int y = 0; y < 4; ++y) {
      const std::uint64_t partner = env | ((y & 2) ? ma : 0) | ((y & 1) ? mb : 0);
      rho(pair_index(s), y) += state.amps[s] * std::conj(state.amps[partner]);
    }
  }
  return rho;
}

double oracle_concurrence(const FullState& state, int qubit_a, int qubit_b) {
  return wootters_concurrence(partial_trace_pair(state, qubit_a, qubit_b));
}

std::vector<CheckRow> equivalence_check(std::span<const int> n_list, std::span<const double> alphas,
                                        std::span<const double> times, const CheckTolerances& tol) {
  std::vector<CheckRow> rows;
  for (const char* config : {"single", "mirror"}) {
    const bool mirror = std::string(config) == "mirror";
    for (int n : n_list) {
      for (double alpha : alphas) {
        const auto spec = mirror ? ChainSpec::mirror_impurities(n, alpha) : ChainSpec::single_impurity(n, alpha);
        CheckRow row;
        row.configuration = config;
        row.n_sites = n;
        row.alpha = alpha;

        const auto chain = build_hamiltonian(spec);
        const auto block = one_excitation_block(full_hamiltonian(spec), n);
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            double expected = 0.0;
            if (a == b) expected = chain.diag[static_cast<std::size_t>(a)];
            if (b == a + 1) expected = chain.offdiag[static_cast<std::size_t>(a)];
            if (a == b + 1) expected = chain.offdiag[static_cast<std::size_t>(b)];
            row.block_error = std::max(row.block_error, std::abs(block(a, b) - expected));
          }
        }

        const auto dec = eigendecompose(spec);
        const FullEvolver plain(spec, false);
        const FullEvolver with_ancilla(spec, true);
        const auto start = embed_one_excitation(AmplitudeVector::delta(static_cast<std::size_t>(n), 0));
        const auto bell = ancilla_bell_state(n);
        for (double t : times) {
          const auto full = plain.evolve(start, t);
          const auto sector = propagate(dec, 0, t);
          const auto lifted = one_excitation_amplitudes(full, n);
          for (std::size_t k = 0; k < sector.size(); ++k) {
            row.amplitude_error = std::max(row.amplitude_error, std::abs(sector.amps[k] - lifted.amps[k]));
          }
          row.norm_error = std::max(row.norm_error, std::abs(full.norm_squared() - 1.0));
          row.norm_error = std::max(row.norm_error, std::abs(sector.norm_squared() - 1.0));

          const auto evolved = with_ancilla.evolve(bell, t);
          const double c = oracle_concurrence(evolved, 0, n);
          row.concurrence_error = std::max(row.concurrence_error, std::abs(c - std::abs(transfer_amplitude(dec, t))));
        }
        row.passed = row.block_error <= tol.block && row.amplitude_error <= tol.amplitude &&
                     row.concurrence_error <= tol.concurrence && row.norm_error <= tol.norm;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace xxchain::oracle
