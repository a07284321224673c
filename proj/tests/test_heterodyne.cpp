#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qtransduce/errors.hpp"
#include "qtransduce/heterodyne.hpp"
#include "qtransduce/qubit.hpp"
#include "test_models.hpp"

using namespace qtr;

namespace {

TransferRow hand_row(Sideband sb, std::vector<cd> u, std::vector<cd> v) {
  TransferRow r;
  r.omega = sb == Sideband::upper ? 1e3 : -1e3;
  r.sideband = sb;
  for (std::size_t i = 0; i < u.size(); ++i) {
    r.port_names.push_back("p" + std::to_string(i));
    r.temperatures.push_back(0.0);
    r.u_lab_frequency.push_back(1e9);
    r.v_lab_frequency.push_back(1e9);
  }
  r.u = std::move(u);
  r.v = std::move(v);
  return r;
}

// amplifying pair: a pumped two-mode squeezer with warm ports
DoubledDynamics warm_squeezer(double g, double t_in, double t_out) {
  auto m = qtr::testing::two_mode(g, CouplingForm::two_mode_squeezing);
  m.ports[0].temperature = t_in;
  m.ports[1].temperature = t_out;
  return assemble_dynamics(m);
}

}  // namespace

TEST_CASE("ideal converter reaches the vacuum floor of one") {
  const auto up = hand_row(Sideband::upper, {1.0, 0.0}, {0.0, 0.0});
  const auto dn = hand_row(Sideband::lower, {0.0, 1.0}, {0.0, 0.0});
  const auto r = heterodyne_sensitivity(up, dn, 0.0);
  CHECK(r.p_s == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(r.f_corr) == 0.0);
  CHECK(r.bound == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(heterodyne_bound(1.0, 0.0, 0.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("symmetric sidebands give 1.5 and respect the bound") {
  const double h = std::sqrt(0.5);
  const auto up = hand_row(Sideband::upper, {h, 0.0}, {0.0, h});
  const auto dn = hand_row(Sideband::lower, {0.0, 0.0}, {h, h});
  const auto r = heterodyne_sensitivity(up, dn, 0.0);
  CHECK(r.eta_up == doctest::Approx(0.5));
  CHECK(r.eta_dn == doctest::Approx(0.5));
  CHECK(r.flux_up / r.eta_up == doctest::Approx(1.0));
  CHECK(r.flux_dn / r.eta_dn == doctest::Approx(1.0));
  CHECK(std::abs(r.f_corr) == 0.0);
  CHECK(r.p_s == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(r.bound >= 1.5);
}

TEST_CASE("LO phase sweep swings by 2|f|/|t|^2") {
  // V_s(-W) = 0 keeps |t| fixed while the phase turns
  const auto up = hand_row(Sideband::upper, {0.8, 0.3}, {0.0, 0.2});
  const auto dn = hand_row(Sideband::lower, {0.0, 0.1}, {0.0, 0.4});
  double lo = 1e300, hi = -1e300;
  for (int k = 0; k < 720; ++k) {
    const double th = std::numbers::pi * k / 720.0;
    const double p = heterodyne_sensitivity(up, dn, th).p_s;
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  const auto r = heterodyne_sensitivity(up, dn, 0.0);
  REQUIRE(std::abs(r.f_corr) > 0.0);
  CHECK(hi - lo == doctest::Approx(2.0 * std::abs(r.f_corr) / std::norm(r.t_lo)).epsilon(1e-4));
}

TEST_CASE("nulled transfer throws") {
  const double h = std::sqrt(0.5);
  const auto up = hand_row(Sideband::upper, {h, 0.0}, {0.0, 0.0});
  const auto dn = hand_row(Sideband::lower, {0.0, 0.0}, {-h, 0.0});
  // t = e^{-i th} h - e^{i th} h vanishes at th = 0
  CHECK_THROWS_AS(heterodyne_sensitivity(up, dn, 0.0), SignalNulledError);
  CHECK_NOTHROW(heterodyne_sensitivity(up, dn, 0.5));
}

TEST_CASE("rows must pair up") {
  const auto up = hand_row(Sideband::upper, {1.0, 0.0}, {0.0, 0.0});
  CHECK_THROWS_AS(heterodyne_sensitivity(up, up, 0.0), DomainError);
  auto dn = hand_row(Sideband::lower, {0.0, 1.0}, {0.0, 0.0});
  dn.omega = -2e3;
  CHECK_THROWS_AS(heterodyne_sensitivity(up, dn, 0.0), DomainError);
  CHECK_THROWS_AS(heterodyne_bound(0.0, 0.0, 0.0, 0.0), DomainError);
}

TEST_CASE("bound grows like the weighted noise for large N") {
  const double n = 1e8;
  const double b = heterodyne_bound(0.5, 0.5 * n, 0.2, 0.2 * n);
  const double w = (std::sqrt(0.5 * n) + std::sqrt(0.2 * n)) / (std::sqrt(0.5) + std::sqrt(0.2));
  CHECK(b / (w * w) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("coefficient route and direct quadrature route agree on a model") {
  const auto dyn = warm_squeezer(3e4, 0.05, 0.2);
  for (double w : {0.0 + 1e2, 2e4, 8e4, 3e5}) {
    const auto up = transfer_row(dyn, w, Sideband::upper);
    const auto dn = transfer_row(dyn, w, Sideband::lower);
    for (double th : {0.0, 0.4, 1.3, 2.9}) {
      const double a = heterodyne_sensitivity(up, dn, th).p_s;
      const double b = heterodyne_sensitivity_direct(up, dn, th);
      CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
  }
}

TEST_CASE("sensitivity stays between the vacuum floor and the bound") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lg(std::log(2e3), std::log(4.5e4)), om(-3e5, 3e5), th(0.0, std::numbers::pi),
      temp(0.0, 0.5);
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    const auto dyn = warm_squeezer(std::exp(lg(rng)), temp(rng), temp(rng));
    const double w = std::abs(om(rng)) + 1.0;
    const auto up = transfer_row(dyn, w, Sideband::upper);
    const auto dn = transfer_row(dyn, w, Sideband::lower);
    const auto r = heterodyne_sensitivity(up, dn, th(rng));
    CHECK(r.p_s >= 0.5);
    // the bound assumes constructive interference, |t| = sqrt(eta+) + sqrt(eta-)
    const auto best = heterodyne_sensitivity(up, dn, constructive_lo_phase(up, dn));
    CHECK(std::abs(best.t_lo) == doctest::Approx(std::sqrt(best.eta_up) + std::sqrt(best.eta_dn)));
    CHECK(best.p_s <= best.bound + 1e-9);
    CHECK(best.p_s <= r.p_s + 1e-9 * r.p_s);
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("qubit fidelity") {
  CHECK(qubit_fidelity(1.0, 0.0).fidelity == 1.0);
  CHECK(qubit_fidelity(1.0, 0.06).fidelity == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(qubit_fidelity(0.96, 0.0).fidelity == doctest::Approx(0.9865986).epsilon(1e-7));
  CHECK(qubit_fidelity(0.96, 0.0).warnings.empty());
  CHECK(qubit_fidelity(0.5, 0.0).warnings.size() == 1);
  CHECK(qubit_fidelity(1.0, 0.5).warnings.size() == 1);
  CHECK_THROWS_AS(qubit_fidelity(-0.1, 0.0), DomainError);
}
