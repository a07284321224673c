#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qtransduce/counting.hpp"
#include "qtransduce/errors.hpp"
#include "qtransduce/units.hpp"

using namespace qtr;

namespace {

// Lorentzian efficiency of FWHM kappa on a sinh-mapped grid out to 1e6 kappa, constant N
SpectralProfile lorentzian(double eta0, double kappa, double n, std::size_t points = 20001) {
  SpectralProfile p;
  const double edge = std::asinh(2e6);
  for (std::size_t i = 0; i < points; ++i) {
    const double u = -edge + 2.0 * edge * static_cast<double>(i) / static_cast<double>(points - 1);
    const double w = 0.5 * kappa * std::sinh(u);
    const double e = eta0 / (1.0 + 4.0 * w * w / (kappa * kappa));
    p.omegas.push_back(w);
    p.eta.push_back(e);
    p.flux.push_back(e * n);
  }
  return p;
}

SpectralProfile flat(double eta0, double n, double width, std::size_t points = 101) {
  SpectralProfile p;
  for (std::size_t i = 0; i < points; ++i) {
    p.omegas.push_back(-0.5 * width + width * static_cast<double>(i) / static_cast<double>(points - 1));
    p.eta.push_back(eta0);
    p.flux.push_back(eta0 * n);
  }
  return p;
}

}  // namespace

TEST_CASE("flat band: B = W / 2pi and r_N = eta N B") {
  const auto p = flat(0.5, 0.2, kTwoPi * 1e6);
  const auto d = dark_count_rate(p, 0.0);
  CHECK(d.eta_plus == doctest::Approx(0.5));
  CHECK(d.n_plus == doctest::Approx(0.2));
  CHECK(d.bandwidth_hz == doctest::Approx(1e6).epsilon(1e-12));
  CHECK(d.rate == doctest::Approx(1e5).epsilon(1e-12));
}

TEST_CASE("Lorentzian efficiency: B = kappa / 4") {
  const double kappa = kTwoPi * 2e5;
  const auto d = dark_count_rate(lorentzian(0.8, kappa, 0.3), 0.0);
  CHECK(d.bandwidth_hz == doctest::Approx(kappa / 4.0).epsilon(1e-6));
}

TEST_CASE("under-resolved spectrum fails the convergence check") {
  SpectralProfile p;  // unit FWHM sampled every 7.3
  for (int i = -3; i <= 3; ++i) {
    const double w = 7.3 * i;
    p.omegas.push_back(w);
    p.eta.push_back(1.0 / (1.0 + 4.0 * w * w));
    p.flux.push_back(p.eta.back());
  }
  CHECK_THROWS_AS(dark_count_rate(p, 0.0), QuadratureError);
}

TEST_CASE("dark count errors") {
  auto p = flat(0.5, 0.2, 10.0);
  CHECK_THROWS_AS(dark_count_rate(p, 100.0), DomainError);
  auto dead = p;
  for (auto& e : dead.eta) e = 0.0;
  CHECK_THROWS_AS(dark_count_rate(dead, 0.0), DomainError);
  auto quiet = p;
  for (auto& f : quiet.flux) f = 0.0;
  CHECK_THROWS_AS(dark_count_rate(quiet, 0.0), UndefinedNoiseError);
}

TEST_CASE("delta input, full capture, no noise counts eta+") {
  auto p = flat(0.7, 0.0, 10.0);
  const InputMode in{InputMode::Shape::delta, 0.0, 0.0, 1.0};
  const OutputMode out{OutputMode::Shape::flat, 1e-6, 0.0};
  const auto r = counting_yield(p, 0.0, in, out, 2e-6);
  CHECK(r.captured == 1.0);
  CHECK(r.n_out_mean == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("noise term alone: N+ B T = 1 counts eta+") {
  auto p = flat(0.4, 0.25, kTwoPi * 1e6);
  p.eta.front() = 0.0;  // input parked where nothing converts
  const InputMode in{InputMode::Shape::delta, p.omegas.front(), 0.0, 1.0};
  const OutputMode out{OutputMode::Shape::exponential, 1e-6, 0.0};
  const auto d = dark_count_rate(p, 0.0);
  const double window = 1.0 / (d.n_plus * d.bandwidth_hz);
  const auto r = counting_yield(p, 0.0, in, out, window);
  CHECK(r.eta_h == 0.0);
  CHECK(r.n_out_mean == doctest::Approx(0.4).epsilon(1e-3));
}

TEST_CASE("broad input against a narrow converter loses efficiency") {
  const double kappa = 1e5;
  const auto p = lorentzian(0.9, kappa, 0.01);
  const InputMode narrow{InputMode::Shape::delta, 0.0, 0.0, 1.0};
  const InputMode wide{InputMode::Shape::gaussian, 0.0, 3.0 * kappa, 1.0};
  const OutputMode out{OutputMode::Shape::gaussian, 1e-6, 5e-6};
  const auto a = counting_yield(p, 0.0, narrow, out, 1e-5);
  const auto b = counting_yield(p, 0.0, wide, out, 1e-5);
  CHECK(a.eta_h == doctest::Approx(0.9));
  CHECK(b.eta_h < a.eta_h);
  CHECK(b.eta_h > 0.0);
  // first term bounded by sup eta / eta+
  CHECK(b.eta_h / b.dark.eta_plus * b.captured <= 1.0);
  CHECK(b.n_out_mean >= 0.0);
}

TEST_CASE("unnormalized input mode is rejected") {
  const auto p = flat(0.5, 0.2, 10.0);
  const OutputMode out{OutputMode::Shape::flat, 1.0, 0.0};
  CHECK_THROWS_AS(counting_yield(p, 0.0, {InputMode::Shape::delta, 0.0, 0.0, 1.1}, out, 1.0), DomainError);
  CHECK_THROWS_AS(counting_yield(p, 0.0, {InputMode::Shape::gaussian, 0.0, 0.0, 1.0}, out, 1.0), DomainError);
  CHECK_THROWS_AS(counting_yield(p, 0.0, {InputMode::Shape::delta, 0.0, 0.0, 1.0}, out, 0.0), DomainError);
}

TEST_CASE("output mode capture fractions") {
  CHECK(OutputMode{OutputMode::Shape::flat, 2.0, 0.0}.captured(1.0) == doctest::Approx(0.5));
  CHECK(OutputMode{OutputMode::Shape::exponential, 1.0, 0.0}.captured(1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(OutputMode{OutputMode::Shape::gaussian, 1.0, 10.0}.captured(10.0) == doctest::Approx(0.5).epsilon(1e-12));
}
