#include <cmath>
#include <numbers>

#include "doctest.h"
#include "xxchain/dynamics.hpp"
#include "xxchain/error.hpp"

using namespace xxchain;

namespace {

// Classical RK4 on i dpsi/dt = H psi, used only as an independent oracle.
std::vector<Complex> rk4(const TridiagonalHamiltonian& h, std::vector<Complex> psi, double t_end, double dt) {
  const std::size_t n = psi.size();
  const auto deriv = [&](const std::vector<Complex>& x) {
    std::vector<Complex> out(n);
    for (std::size_t r = 0; r < n; ++r) {
      Complex hx = h.diag[r] * x[r];
      if (r > 0) hx += h.offdiag[r - 1] * x[r - 1];
      if (r + 1 < n) hx += h.offdiag[r] * x[r + 1];
      out[r] = Complex(0, -1) * hx;
    }
    return out;
  };
  const auto axpy = [&](const std::vector<Complex>& x, const std::vector<Complex>& k, double s) {
    std::vector<Complex> out(n);
    for (std::size_t r = 0; r < n; ++r) out[r] = x[r] + s * k[r];
    return out;
  };
  const auto steps = static_cast<long>(std::llround(t_end / dt));
  for (long s = 0; s < steps; ++s) {
    const auto k1 = deriv(psi);
    const auto k2 = deriv(axpy(psi, k1, dt / 2));
    const auto k3 = deriv(axpy(psi, k2, dt / 2));
    const auto k4 = deriv(axpy(psi, k3, dt));
    for (std::size_t r = 0; r < n; ++r) psi[r] += dt / 6 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
  }
  return psi;
}

}  // namespace

TEST_CASE("identity at t = 0") {
  const auto dec = eigendecompose(ChainSpec::single_impurity(12, 0.4));
  const auto psi = propagate(dec, 3, 0.0);
  for (std::size_t n = 0; n < psi.size(); ++n) CHECK(std::abs(psi.amps[n] - (n == 3 ? 1.0 : 0.0)) < 1e-12);
  CHECK(std::abs(transfer_amplitude(dec, 0.0)) < 1e-12);
  CHECK(fidelity(dec, 0.0) < 1e-24);
  CHECK(concurrence_AN(dec, 0.0) < 1e-12);
  CHECK(psi.time_tag.value() == 0.0);
  CHECK_THROWS_AS(propagate(dec, 12, 0.0), Error);
}

TEST_CASE("two sites transfer completely at half a Rabi period") {
  const auto dec = eigendecompose(ChainSpec::homogeneous(2));
  CHECK(std::abs(transfer_amplitude(dec, std::numbers::pi / 2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(concurrence_AN(dec, std::numbers::pi / 2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("spectral propagation agrees with RK4 integration") {
  for (const auto& spec : {ChainSpec::single_impurity(7, 0.4), ChainSpec::mirror_impurities(20, 0.6, -1.0, 0.3),
                           ChainSpec{50, -1.0, 0.0, {{1, 2.5}}}}) {
    const auto dec = eigendecompose(spec);
    std::vector<Complex> start(dec.size());
    start[0] = 1.0;
    const double t_end = 6.0;
    const auto ref = rk4(build_hamiltonian(spec), start, t_end, 1e-3);
    const auto psi = propagate(dec, 0, t_end);
    for (std::size_t n = 0; n < psi.size(); ++n) CHECK(std::abs(psi.amps[n] - ref[n]) < 1e-6);
  }
}

TEST_CASE("unitarity over long times") {
  const auto dec = eigendecompose(ChainSpec::mirror_impurities(100, 0.3));
  const Propagator prop(dec);
  for (double t : {0.5, 13.0, 77.7, 400.0, 2500.0}) {
    CHECK(std::abs(prop.state(t).norm_squared() - 1.0) < 1e-9);
  }
}

TEST_CASE("mirror-symmetric chains transfer the same both ways") {
  const auto dec = eigendecompose(ChainSpec::mirror_impurities(15, 0.45));
  const std::size_t last = dec.size() - 1;
  for (double t : {1.0, 4.2, 9.9}) {
    const Complex forward = Propagator(dec, 0).amplitude(last, t);
    const Complex backward = Propagator(dec, last).amplitude(0, t);
    CHECK(std::abs(std::abs(forward) - std::abs(backward)) < 1e-12);
    // Site relabelling n -> N+1-n maps psi from site 1 onto psi from site N.
    const auto a = propagate(dec, 0, t);
    const auto b = propagate(dec, last, t);
    for (std::size_t n = 0; n <= last; ++n) CHECK(std::abs(std::abs(a.amps[n]) - std::abs(b.amps[last - n])) < 1e-12);
  }
}

TEST_CASE("batched evaluation matches single time points") {
  const auto dec = eigendecompose(ChainSpec::single_impurity(30, 0.8));
  const Propagator prop(dec, 2);
  const auto grid = make_grid(0.0, 60.0, 0.1);  // longer than one batch would need
  const auto states = prop.states(grid);
  const auto iprs = prop.ipr_series(grid);
  for (std::size_t k = 0; k < grid.size(); k += 37) {
    const auto direct = prop.state(grid[k]);
    for (std::size_t n = 0; n < direct.size(); ++n) CHECK(std::abs(direct.amps[n] - states[k].amps[n]) < 1e-12);
    CHECK(iprs[k] == doctest::Approx(ipr(direct)).epsilon(1e-10));
  }
  const auto many = make_grid(0.0, 120.0, 0.05);
  CHECK(prop.ipr_series(many).size() == many.size());
}

TEST_CASE("ancilla protocol") {
  const auto dec = eigendecompose(ChainSpec::mirror_impurities(31, 0.6));
  for (double t : make_grid(0.0, 40.0, 0.7)) {
    const auto rho = ancilla_end_density(dec, t);
    CHECK_NOTHROW(check_density(rho.rho));
    CHECK(std::abs(concurrence_AN(dec, t) - std::sqrt(fidelity(dec, t))) < 1e-9);
  }
}

TEST_CASE("time series kinds") {
  const auto dec = eigendecompose(ChainSpec::single_impurity(10, 0.5));
  const std::vector<double> zero{0.0};
  CHECK(time_series(dec, SeriesKind::Fidelity, zero).real_values() == std::vector<double>{0.0});
  const auto grid = make_grid(0.0, 5.0, 0.5);
  const auto amp = time_series(dec, SeriesKind::TransferAmplitude, grid);
  const auto fid = time_series(dec, SeriesKind::Fidelity, grid);
  const auto conc = time_series(dec, SeriesKind::ConcurrenceAN, grid);
  const auto ip = time_series(dec, SeriesKind::Ipr, grid);
  CHECK(ip.values[0].real() == doctest::Approx(1.0));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(fid.values[k].real() == doctest::Approx(std::norm(amp.values[k])));
    CHECK(conc.values[k].real() == doctest::Approx(std::abs(amp.values[k])).epsilon(1e-9));
    CHECK(fid.values[k].imag() == 0.0);
  }
  CHECK(std::string(to_string(SeriesKind::ConcurrenceAN)) == "concurrence");
  const std::vector<double> unsorted{1.0, 0.5};
  CHECK_THROWS_AS(time_series(dec, SeriesKind::Ipr, unsorted), Error);
  CHECK_THROWS_AS(time_series(dec, SeriesKind::Ipr, std::vector<double>{}), Error);
}

TEST_CASE("grid construction") {
  const auto g = make_grid(0.3, 1.0, 0.01);
  CHECK(g.size() == 71);
  CHECK(g.back() == doctest::Approx(1.0));
  CHECK(make_grid(2.0, 2.0, 0.1).size() == 1);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(make_grid(1.0, 0.0, 0.1), Error);
}

TEST_CASE("first refocus time grows as the end couplings weaken") {
  const auto grid = make_grid(0.0, 600.0, 0.05);
  for (int n : {20, 31, 50}) {
    std::vector<double> times;
    for (double alpha : {0.1, 0.2, 0.3}) {
      const auto t = first_refocus_time(eigendecompose(ChainSpec::mirror_impurities(n, alpha)), grid);
      REQUIRE(t.has_value());
      times.push_back(*t);
    }
    CHECK(times[0] > times[1]);
    CHECK(times[1] > times[2]);
  }
}
