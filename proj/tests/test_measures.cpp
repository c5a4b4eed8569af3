#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "xxchain/error.hpp"
#include "xxchain/measures.hpp"

using namespace xxchain;

namespace {

// Textbook Wootters: square roots of the eigenvalues of rho * rho_tilde.
// Only reliable for full-rank rho, which is how the tests below use it.
double wootters_reference(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd tilde = yy * rho.conjugate() * yy;
  const Eigen::Vector4cd ev = Eigen::ComplexEigenSolver<Eigen::Matrix4cd>(rho * tilde).eigenvalues();
  std::array<double, 4> l{};
  for (int k = 0; k < 4; ++k) l[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, ev(k).real()));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

Eigen::Matrix4cd random_density(std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::Matrix4cd a;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) a(r, c) = Complex(g(rng), g(rng));
  Eigen::Matrix4cd rho = a * a.adjoint();
  return rho / rho.trace().real();
}

Eigen::Matrix4cd pure(const Eigen::Vector4cd& psi) { return psi * psi.adjoint(); }

AmplitudeVector random_state(std::mt19937& rng, std::size_t n) {
  std::normal_distribution<double> g;
  AmplitudeVector v;
  v.amps.resize(n);
  double s = 0.0;
  for (auto& a : v.amps) {
    a = Complex(g(rng), g(rng));
    s += std::norm(a);
  }
  for (auto& a : v.amps) a /= std::sqrt(s);
  return v;
}

}  // namespace

TEST_CASE("IPR limits") {
  CHECK(ipr(AmplitudeVector::delta(10, 3)) == doctest::Approx(1.0));
  std::vector<double> flat(25, 1.0 / 5.0);
  CHECK(ipr(flat) == doctest::Approx(25.0));
  std::vector<double> unnormalized(4, 1.0);
  CHECK_THROWS_AS(ipr(unnormalized), Error);
}

TEST_CASE("IPR stays within [1, N] on random states") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 60);
    const double v = ipr(random_state(rng, n));
    CHECK(v >= 1.0 - 1e-12);
    CHECK(v <= static_cast<double>(n) + 1e-12);
  }
}

TEST_CASE("homogeneous eigenstates have IPR near 2(N+1)/3") {
  const int n = 200;
  const auto dec = eigendecompose(ChainSpec::homogeneous(n));
  for (std::size_t j : {50u, 99u, 100u, 150u}) {
    // Analytic sin^4 sum for the same mode.
    const int k = static_cast<int>(j) + 1;
    double s4 = 0.0;
    for (int m = 1; m <= n; ++m) {
      const double s = std::sqrt(2.0 / (n + 1)) * std::sin(std::numbers::pi * k * m / (n + 1));
      s4 += std::pow(s, 4);
    }
    CHECK(ipr(dec.eigvec(j)) == doctest::Approx(1.0 / s4).epsilon(1e-10));
    CHECK(std::abs(ipr(dec.eigvec(j)) - 2.0 * (n + 1) / 3.0) <= 1.0);
  }
}

TEST_CASE("IPR is symmetric between j and N+1-j") {
  const auto dec = eigendecompose(ChainSpec::single_impurity(60, 0.7));
  for (std::size_t j = 0; j < dec.size(); ++j) {
    CHECK(std::abs(ipr(dec.eigvec(j)) - ipr(dec.eigvec(dec.size() - 1 - j))) < 1e-9);
  }
}

TEST_CASE("IPR regimes") {
  const auto strong = eigendecompose(ChainSpec::single_impurity(40, 3.0));
  int localized = 0;
  for (std::size_t j = 0; j < strong.size(); ++j) localized += ipr(strong.eigvec(j)) < 10.0 ? 1 : 0;
  CHECK(localized == 2);
  CHECK(ipr(strong.eigvec(0)) < 10.0);
  CHECK(ipr(strong.eigvec(39)) < 10.0);

  // Weak impurity: the in-band states closest to E = 0 are the most localized.
  const auto weak = eigendecompose(ChainSpec::single_impurity(40, 0.4));
  std::size_t best = 1;
  for (std::size_t j = 1; j + 1 < weak.size(); ++j) {
    if (ipr(weak.eigvec(j)) < ipr(weak.eigvec(best))) best = j;
  }
  CHECK(std::abs(weak.energies[best]) < 0.2);
}

TEST_CASE("two-site reduced density matrix") {
  const auto delta = reduced_density_two_sites(AmplitudeVector::delta(5, 0), 1, 2);
  Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
  expected(0, 0) = 1.0;
  CHECK((delta.rho - expected).norm() < 1e-15);

  const double r = 1.0 / std::sqrt(2.0);
  const auto pair = reduced_density_two_sites(AmplitudeVector::from_real(std::vector<double>{r, r, 0.0}), 0, 1);
  CHECK(std::abs(pair.rho(0, 0)) < 1e-15);
  CHECK(pair.rho(1, 1).real() == doctest::Approx(0.5));
  CHECK(pair.rho(2, 2).real() == doctest::Approx(0.5));
  CHECK(std::abs(pair.rho(1, 2)) == doctest::Approx(0.5));
  CHECK(wootters_concurrence(pair) == doctest::Approx(1.0));
  CHECK_NOTHROW(check_density(pair.rho));

  CHECK_THROWS_AS(reduced_density_two_sites(AmplitudeVector::delta(3, 0), 2, 1), Error);
  CHECK_THROWS_AS(reduced_density_two_sites(AmplitudeVector::delta(3, 0), 1, 3), Error);
}

TEST_CASE("reduced density matches the full-state partial trace") {
  // Direct construction: one excitation over N sites, trace out all but (i, j).
  std::mt19937 rng(5);
  const auto psi = random_state(rng, 6);
  const std::size_t i = 1, j = 4;
  const auto rho = reduced_density_two_sites(psi, i, j).rho;
  double rest = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k)
    if (k != i && k != j) rest += std::norm(psi.amps[k]);
  Eigen::Vector4cd pure_part = Eigen::Vector4cd::Zero();
  pure_part(1) = psi.amps[j];  // |u_i d_j>
  pure_part(2) = psi.amps[i];  // |d_i u_j>
  Eigen::Matrix4cd expected = pure_part * pure_part.adjoint();
  expected(0, 0) += rest;
  CHECK((rho - expected).norm() < 1e-14);
}

TEST_CASE("Wootters concurrence on known states") {
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(wootters_concurrence(pure(Eigen::Vector4cd(0, r, r, 0))) == doctest::Approx(1.0));
  CHECK(wootters_concurrence(pure(Eigen::Vector4cd(r, 0, 0, r))) == doctest::Approx(1.0));
  CHECK(wootters_concurrence(pure(Eigen::Vector4cd(1, 0, 0, 0))) == doctest::Approx(0.0));
  // Product of two single-qubit superpositions.
  const Eigen::Vector2cd a(0.6, Complex(0, 0.8));
  const Eigen::Vector2cd b(r, r);
  Eigen::Vector4cd prod;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) prod(2 * x + y) = a(x) * b(y);
  CHECK(wootters_concurrence(pure(prod)) < 1e-12);
  // Pure state concurrence is 2|ad - bc|.
  const Eigen::Vector4cd g(Complex(0.1, 0.2), 0.5, Complex(0.3, -0.4), 0.0);
  const Eigen::Vector4cd gn = g / g.norm();
  CHECK(wootters_concurrence(pure(gn)) == doctest::Approx(2.0 * std::abs(gn(0) * gn(3) - gn(1) * gn(2))).epsilon(1e-10));
  // Werner states: C = max(0, (3p - 1)/2).
  for (double p : {0.1, 0.3, 0.5, 0.8, 1.0}) {
    const Eigen::Matrix4cd w = p * pure(Eigen::Vector4cd(0, r, r, 0)) + (1 - p) / 4 * Eigen::Matrix4cd::Identity();
    CHECK(wootters_concurrence(w) == doctest::Approx(std::max(0.0, (3 * p - 1) / 2)).epsilon(1e-10));
  }
}

TEST_CASE("Wootters concurrence agrees with the textbook formula on random mixed states") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rho = random_density(rng);
    CHECK(std::abs(wootters_concurrence(rho) - wootters_reference(rho)) < 1e-9);
  }
}

TEST_CASE("closed-form nearest-neighbour concurrence") {
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(nn_concurrence_closed_form(std::vector<double>{0.0, r, r}, 1) == doctest::Approx(1.0));
  CHECK(nn_concurrence_closed_form(std::vector<double>{0.0, 1.0, 0.0}, 1) == 0.0);
  CHECK_THROWS_AS(nn_concurrence_closed_form(std::vector<double>{r, r}, 1), Error);

  std::mt19937 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto psi = random_state(rng, 8);
    const std::size_t i = static_cast<std::size_t>(trial % 7);
    const auto rho = reduced_density_two_sites(psi, i, i + 1);
    CHECK(std::abs(nn_concurrence_closed_form(psi, i) - wootters_concurrence(rho)) < 1e-9);
  }
}

TEST_CASE("C12 from the energy derivative") {
  const auto weak = ChainSpec::single_impurity(200, 1.2);
  CHECK(c12_from_energy_derivative(weak, 0) < 0.05);
  const auto strong = ChainSpec::single_impurity(200, 3.0);
  CHECK(c12_from_energy_derivative(strong, 0) == doctest::Approx(1.0).epsilon(0.05));

  const auto dec = eigendecompose(strong);
  for (std::size_t j = 0; j < dec.size(); j += 13) {
    CHECK(std::abs(c12_from_energy_derivative(strong, dec, j) - nn_concurrence_closed_form(dec.eigvec(j), 0)) < 1e-12);
  }
}

TEST_CASE("alpha sweep ordering and values") {
  const std::vector<double> grid{0.9, 0.3, 0.6};
  const std::vector<std::size_t> states{4, 0};
  const auto rows = alpha_sweep(ChainSpec::homogeneous(20), grid, states, SweepQuantity::Ipr);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].alpha == 0.3);
  CHECK(rows[0].state == 0);
  CHECK(rows[1].state == 4);
  CHECK(rows[5].alpha == 0.9);
  const auto dec = eigendecompose(ChainSpec::single_impurity(20, 0.6));
  CHECK(rows[2].value == doctest::Approx(ipr(dec.eigvec(0))));

  const auto c = alpha_sweep(ChainSpec::homogeneous(20), grid, {}, SweepQuantity::ConcurrenceC12);
  CHECK(c.size() == 60);
  const std::vector<std::size_t> bad{20};
  CHECK_THROWS_AS(alpha_sweep(ChainSpec::homogeneous(20), grid, bad, SweepQuantity::Ipr), Error);
}

TEST_CASE("peak finder") {
  std::vector<double> x, y;
  for (int k = 0; k <= 200; ++k) {
    x.push_back(k * 0.01);
    y.push_back(std::exp(-std::pow((x.back() - 1.2) / 0.1, 2)) + 0.1 * std::exp(-std::pow((x.back() - 0.4) / 0.05, 2)));
  }
  const auto p = find_peak(x, y);
  CHECK(p.alpha == doctest::Approx(1.2));
  CHECK(p.dominant);
  const auto weak = find_peak(x, y, 0.02, 20.0);
  CHECK_FALSE(weak.dominant);
  // Excluded region is ignored even when it holds the largest value.
  y[0] = 10.0;
  CHECK(find_peak(x, y).alpha == doctest::Approx(1.2));
}
