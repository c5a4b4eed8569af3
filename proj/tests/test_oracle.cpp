#include <bit>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "xxchain/dynamics.hpp"
#include "xxchain/error.hpp"
#include "xxchain/oracle.hpp"

using namespace xxchain;
using namespace xxchain::oracle;

TEST_CASE("one-excitation block reproduces the tridiagonal matrix") {
  for (int n = 2; n <= 8; ++n) {
    for (double alpha : {0.4, 1.0, 3.0}) {
      for (const auto& spec : {ChainSpec::single_impurity(n, alpha), ChainSpec::mirror_impurities(n, alpha)}) {
        const auto chain = build_hamiltonian(spec);
        for (bool anc : {false, true}) {
          const auto block = one_excitation_block(full_hamiltonian(spec, anc), n, anc);
          for (int a = 0; a < n; ++a) {
            CHECK(std::abs(block(a, a) - chain.diag[static_cast<std::size_t>(a)]) <= 1e-12);
            if (a + 1 < n) {
              CHECK(std::abs(block(a, a + 1) - chain.offdiag[static_cast<std::size_t>(a)]) <= 1e-12);
              CHECK(block(a, a + 1) == block(a + 1, a));
            }
            for (int b = a + 2; b < n; ++b) CHECK(block(a, b) == 0.0);
          }
        }
      }
    }
  }
}

TEST_CASE("field adds a constant offset in the full space") {
  const int n = 5;
  const double h = 0.7;
  const auto spec = ChainSpec::single_impurity(n, 0.4, -1.0, h);
  const auto block = one_excitation_block(full_hamiltonian(spec), n);
  const auto chain = build_hamiltonian(spec);
  for (int a = 0; a < n; ++a) CHECK(block(a, a) == doctest::Approx(chain.diag[static_cast<std::size_t>(a)] - h * (n - 1)));
}

TEST_CASE("full Hamiltonian is symmetric and conserves the excitation number") {
  const auto spec = ChainSpec::mirror_impurities(6, 0.4, -1.0, 0.3);
  const auto h = full_hamiltonian(spec);
  CHECK((h - h.transpose()).norm() == 0.0);
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      if (h(r, c) != 0.0) CHECK(std::popcount(static_cast<unsigned>(r)) == std::popcount(static_cast<unsigned>(c)));
    }
  }
}

TEST_CASE("sector propagation agrees with the full space") {
  const auto spec = ChainSpec::mirror_impurities(7, 0.4);
  const auto dec = eigendecompose(spec);
  const FullEvolver evolver(spec);
  const auto start = embed_one_excitation(AmplitudeVector::delta(7, 0));
  for (double t : {1.0, 5.0, 20.0}) {
    const auto full = evolver.evolve(start, t);
    CHECK(std::abs(full.norm_squared() - 1.0) < 1e-9);
    const auto sectors = excitation_sector_probabilities(full);
    CHECK(sectors[1] == doctest::Approx(1.0).epsilon(1e-9));
    const auto lifted = one_excitation_amplitudes(full, 7);
    const auto sector = propagate(dec, 0, t);
    for (std::size_t k = 0; k < 7; ++k) CHECK(std::abs(lifted.amps[k] - sector.amps[k]) < 1e-8);
  }
}

TEST_CASE("multi-excitation states keep their sector weights") {
  const auto spec = ChainSpec::single_impurity(5, 1.7);
  FullState s;
  s.n_qubits = 5;
  s.amps.assign(32, Complex{});
  s.amps[0b00011] = 0.6;
  s.amps[0b10110] = Complex(0, 0.8);
  const auto out = full_evolve(spec, s, 3.3);
  const auto p = excitation_sector_probabilities(out);
  CHECK(p[2] == doctest::Approx(0.36).epsilon(1e-9));
  CHECK(p[3] == doctest::Approx(0.64).epsilon(1e-9));
}

TEST_CASE("ancilla concurrence equals |f_N|") {
  for (double alpha : {0.4, 1.0}) {
    const auto spec = ChainSpec::mirror_impurities(6, alpha);
    const auto dec = eigendecompose(spec);
    const auto bell = ancilla_bell_state(6);
    CHECK(oracle_concurrence(bell, 0, 1) == doctest::Approx(1.0));
    CHECK(oracle_concurrence(bell, 0, 6) < 1e-12);
    const FullEvolver evolver(spec, true);
    for (double t : {1.0, 5.0, 20.0}) {
      const auto out = evolver.evolve(bell, t);
      CHECK(std::abs(oracle_concurrence(out, 0, 6) - std::abs(transfer_amplitude(dec, t))) < 1e-8);
      // The closed-form reduced state matches the partial trace up to the vacuum phase.
      const auto rho = partial_trace_pair(out, 0, 6);
      const auto model = ancilla_end_density(dec, t).rho;
      for (int d = 0; d < 4; ++d) CHECK(std::abs(rho(d, d) - model(d, d)) < 1e-9);
      CHECK(std::abs(std::abs(rho(1, 2)) - std::abs(model(1, 2))) < 1e-9);
    }
  }
}

TEST_CASE("bare two-qubit register") {
  const double r = 1.0 / std::sqrt(2.0);
  const auto bell = two_qubit_state(Eigen::Vector4cd(0, r, r, 0));
  CHECK(oracle_concurrence(bell, 0, 1) == doctest::Approx(1.0));
  const auto product = two_qubit_state(Eigen::Vector4cd(1, 0, 0, 0));
  CHECK(oracle_concurrence(product, 0, 1) == doctest::Approx(0.0));
  // Two-site chain, half Rabi period swaps the qubits: |ud> -> -i|du>.
  const auto spec = ChainSpec::homogeneous(2);
  const auto swapped = full_evolve(spec, two_qubit_state(Eigen::Vector4cd(0, 1, 0, 0)), std::numbers::pi / 2);
  CHECK(std::norm(swapped.amps[2]) == doctest::Approx(1.0));
  CHECK_THROWS_AS(partial_trace_pair(bell, 1, 1), Error);
}

TEST_CASE("size limits") {
  CHECK_THROWS_AS(full_hamiltonian(ChainSpec::homogeneous(13)), Error);
  CHECK_THROWS_AS(ancilla_bell_state(13), Error);
  CHECK_THROWS_AS(FullEvolver(ChainSpec::homogeneous(3)).evolve(ancilla_bell_state(3), 1.0), Error);
}

TEST_CASE("equivalence table") {
  const std::vector<int> ns{2, 3, 4};
  const std::vector<double> alphas{0.4, 3.0};
  const std::vector<double> times{1.0, 5.0};
  const auto rows = equivalence_check(ns, alphas, times);
  CHECK(rows.size() == 12);
  for (const auto& r : rows) CHECK(r.passed);
}
