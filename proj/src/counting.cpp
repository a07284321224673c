#include "qtransduce/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qtransduce/errors.hpp"
#include "qtransduce/units.hpp"

namespace qtr {

SpectralProfile upper_profile(const SpectrumGrid& grid) {
  SpectralProfile p;
  for (const auto& r : grid.records) {
    if (!r.upper) throw DomainError("spectrum has a failed point at omega = " + std::to_string(r.omega));
    p.omegas.push_back(r.omega);
    p.eta.push_back(r.upper->eta);
    p.flux.push_back(r.upper->noise_flux);
  }
  return p;
}

namespace {

void check_profile(const SpectralProfile& p) {
  if (p.omegas.size() < 3 || p.eta.size() != p.omegas.size() || p.flux.size() != p.omegas.size())
    throw DomainError("spectral profile needs at least 3 points of matching length");
  for (std::size_t i = 1; i < p.omegas.size(); ++i)
    if (!(p.omegas[i] > p.omegas[i - 1])) throw DomainError("spectral profile grid must be strictly ascending");
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (at < x.front() || at > x.back()) throw DomainError("frequency outside the spectral grid");
  auto it = std::upper_bound(x.begin(), x.end(), at);
  if (it == x.end()) return y.back();
  const auto i = static_cast<std::size_t>(it - x.begin());
  const double t = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + t * (y[i] - y[i - 1]);
}

// trapezoid over the full grid and over every other point
template <class F>
std::pair<double, double> trapezoid_pair(const std::vector<double>& x, F f) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(i);
  double full = 0.0, half = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) full += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  std::size_t last = 0;
  for (std::size_t i = 2; i < x.size(); i += 2) {
    half += 0.5 * (x[i] - x[i - 2]) * (y[i] + y[i - 2]);
    last = i;
  }
  if (last + 1 < x.size()) half += 0.5 * (x.back() - x[last]) * (y.back() + y[last]);
  return {full, half};
}

void check_converged(std::pair<double, double> v, double tol, const char* what) {
  const double scale = std::max(std::abs(v.first), std::abs(v.second));
  if (scale > 0.0 && std::abs(v.first - v.second) > tol * scale)
    throw QuadratureError(std::string(what) + " not converged: relative change " +
                          std::to_string(std::abs(v.first - v.second) / scale) + " under grid halving");
}

// a noiseless point has no dark counts; B is left at 0 then
DarkCount dark_count(const SpectralProfile& profile, double omega_sig, const QuadratureOptions& options) {
  check_profile(profile);
  DarkCount d;
  d.eta_plus = interpolate(profile.omegas, profile.eta, omega_sig);
  if (!(d.eta_plus > 0.0)) throw DomainError("dark count rate needs eta > 0 at the signal frequency");
  const double flux_plus = interpolate(profile.omegas, profile.flux, omega_sig);
  d.n_plus = flux_plus / d.eta_plus;
  if (!(flux_plus > 0.0)) return d;

  const auto b = trapezoid_pair(profile.omegas, [&](std::size_t i) { return profile.flux[i] / flux_plus; });
  check_converged(b, options.rel_tol, "noise bandwidth integral");
  d.bandwidth_hz = b.first / kTwoPi;
  d.rate = flux_plus * d.bandwidth_hz;
  return d;
}

}  // namespace

DarkCount dark_count_rate(const SpectralProfile& profile, double omega_sig, const QuadratureOptions& options) {
  auto d = dark_count(profile, omega_sig, options);
  if (!(d.n_plus > 0.0)) throw UndefinedNoiseError("noise bandwidth undefined: N vanishes at the signal frequency");
  return d;
}

double InputMode::density(double omega) const {
  const double s2 = scale * scale;
  switch (shape) {
    case Shape::delta: return 0.0;
    case Shape::gaussian: {
      const double z = (omega - center) / width;
      return s2 * std::exp(-0.5 * z * z) / (width * std::sqrt(2.0 * std::numbers::pi));
    }
    case Shape::lorentzian: {
      const double h = 0.5 * width;
      return s2 * h / (std::numbers::pi * ((omega - center) * (omega - center) + h * h));
    }
  }
  return 0.0;
}

double OutputMode::captured(double window) const {
  if (!(window > 0.0)) throw DomainError("detection window must be positive");
  if (!(duration > 0.0)) throw DomainError("output mode duration must be positive");
  switch (shape) {
    case Shape::flat: return std::min(window, duration) / duration;
    case Shape::exponential: return -std::expm1(-window / duration);
    case Shape::gaussian: {
      auto cdf = [&](double t) { return 0.5 * std::erfc(-(t - delay) / (duration * std::numbers::sqrt2)); };
      return cdf(window) - cdf(0.0);
    }
  }
  return 0.0;
}

CountingResult counting_yield(const SpectralProfile& profile, double omega_sig, const InputMode& h_in,
                              const OutputMode& h_out, double window, const QuadratureOptions& options) {
  if (std::abs(h_in.mass() - 1.0) > 1e-6) throw DomainError("input mode is not normalized: |h_in|^2 integrates to " +
                                                           std::to_string(h_in.mass()));
  if (h_in.shape != InputMode::Shape::delta && !(h_in.width > 0.0))
    throw DomainError("input mode width must be positive");

  CountingResult r;
  r.window = window;
  r.captured = h_out.captured(window);
  r.dark = dark_count(profile, omega_sig, options);
  if (h_in.shape == InputMode::Shape::delta) {
    r.eta_h = h_in.mass() * interpolate(profile.omegas, profile.eta, h_in.center);
  } else {
    const auto v = trapezoid_pair(profile.omegas, [&](std::size_t i) { return profile.eta[i] * h_in.density(profile.omegas[i]); });
    check_converged(v, options.rel_tol, "mode-weighted efficiency integral");
    r.eta_h = v.first;
  }
  const double nbt = r.dark.n_plus * r.dark.bandwidth_hz * window;
  r.n_out_mean = r.dark.eta_plus * ((r.eta_h / r.dark.eta_plus) * r.captured + nbt);
  return r;
}

}  // namespace qtr
