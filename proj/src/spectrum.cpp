#include "qtransduce/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qtransduce/errors.hpp"

namespace qtr {

SidebandFigures sideband_figures(const TransferRow& row) {
  SidebandFigures f;
  f.eta = eta(row);
  f.noise_flux = noise_flux(row);
  if (f.eta > 0.0) f.added_noise = f.noise_flux / f.eta;
  f.sum_rule_residual = sum_rule_residual(row);
  f.commutator_residual = noise_commutator_residual(row);
  f.row = row;
  return f;
}

std::size_t SpectrumGrid::failures() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.ok(); }));
}

namespace {

SpectrumRecord evaluate_point(const DoubledDynamics& dyn, double omega, const ScatteringOptions& opts) {
  SpectrumRecord rec;
  rec.omega = omega;
  for (Sideband sb : {Sideband::upper, Sideband::lower}) {
    const char* tag = sb == Sideband::upper ? "upper: " : "lower: ";
    // no itinerant exit field there: the sideband is absent, not failed
    if (!(dyn.port_band_center[dyn.exit_port] + sign(sb) * omega > 0.0)) continue;
    try {
      const ScatteringMatrix s = scattering_matrix(dyn, sign(sb) * omega, opts);
      if (sb == Sideband::upper) rec.symplectic_residual = s.physical_symplectic_residual;
      auto fig = sideband_figures(transfer_row(dyn, s));
      (sb == Sideband::upper ? rec.upper : rec.lower) = std::move(fig);
    } catch (const Error& e) {
      rec.errors.push_back(tag + std::string(e.what()));
    }
  }
  return rec;
}

}  // namespace

SpectrumGrid spectrum_sweep(const DoubledDynamics& dyn, const std::vector<double>& omegas,
                            const SweepOptions& options) {
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (!(omegas[i] > 0.0) || !std::isfinite(omegas[i])) throw DomainError("sweep grid must be positive and finite");
    if (i > 0 && !(omegas[i] > omegas[i - 1])) throw DomainError("sweep grid must be strictly ascending");
  }
  SpectrumGrid grid;
  grid.records.resize(omegas.size());

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, omegas.size() / 64)));
  // each worker owns a fixed strided slice, so the output does not depend on scheduling
  auto work = [&](unsigned t) {
    for (std::size_t i = t; i < omegas.size(); i += threads)
      grid.records[i] = evaluate_point(dyn, omegas[i], options.scattering);
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  return grid;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0 || !(hi >= lo)) throw DomainError("grid needs hi >= lo and at least one point");
  if (points == 1) return {lo};
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0)) throw DomainError("log grid needs a positive lower bound");
  auto g = linear_grid(std::log(lo), std::log(hi), points);
  for (auto& x : g) x = std::exp(x);
  return g;
}

EtaPeak find_eta_peak(const DoubledDynamics& dyn, double lo, double hi, Sideband sideband, std::size_t scan_points,
                      double rel_tol) {
  if (!(hi > lo) || scan_points < 3) throw DomainError("find_eta_peak needs hi > lo and at least 3 scan points");
  auto f = [&](double w) { return eta(transfer_row(dyn, w, sideband)); };
  const auto grid = linear_grid(lo, hi, scan_points);
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v > best_val) best_val = v, best = i;
  }
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > rel_tol * std::abs(b) && b - a > 0.0) {
    if (f1 < f2) {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + phi * (b - a), f2 = f(x2);
    } else {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - phi * (b - a), f1 = f(x1);
    }
    if (x1 >= x2) break;
  }
  EtaPeak peak{0.5 * (a + b), f(0.5 * (a + b))};
  if (best_val > peak.eta) peak = {grid[best], best_val};
  return peak;
}

}  // namespace qtr
