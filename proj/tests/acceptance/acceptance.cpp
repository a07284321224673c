// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qtransduce/counting.hpp"
#include "qtransduce/dynamics.hpp"
#include "qtransduce/electromech.hpp"
#include "qtransduce/entanglement.hpp"
#include "qtransduce/errors.hpp"
#include "qtransduce/harness.hpp"
#include "qtransduce/heterodyne.hpp"
#include "qtransduce/qubit.hpp"
#include "qtransduce/random_models.hpp"
#include "qtransduce/spectrum.hpp"
#include "qtransduce/units.hpp"

using namespace qtr;
namespace em = qtr::electromech;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1, 2: random ensemble

struct Ensemble {
  double symplectic = 0.0, sum_rule = 0.0, commutator = 0.0, seconds = 0.0;
  std::size_t rows = 0;
};

const Ensemble& ensemble() {
  static const Ensemble e = [] {
    Ensemble out;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    for (const auto& m : random_models(100, 1)) {
      const auto dyn = assemble_dynamics(m);
      const double hi = std::min(3.0 * characteristic_rate(m), 1.5e10);
      std::uniform_real_distribution<double> logw(std::log(1e-3 * hi), std::log(hi));
      for (int k = 0; k < 50; ++k) {
        const double w = std::exp(logw(rng)) * (k % 2 ? -1.0 : 1.0);
        out.symplectic = std::max(out.symplectic, scattering_matrix(dyn, w).symplectic_residual);
        for (Sideband sb : {Sideband::upper, Sideband::lower}) {
          const auto row = transfer_row(dyn, std::abs(w), sb);
          out.sum_rule = std::max(out.sum_rule, sum_rule_residual(row));
          out.commutator = std::max(out.commutator, noise_commutator_residual(row));
          ++out.rows;
        }
      }
    }
    out.seconds = seconds_since(t0);
    return out;
  }();
  return e;
}

Outcome quasi_unitarity() {
  const auto& e = ensemble();
  return {e.symplectic < 1e-9 && e.seconds < 30.0,
          fmt("max |S K S^dag - K| = %.2e over 100 models x 50 frequencies, %.2f s", e.symplectic, e.seconds)};
}

Outcome sum_rule() {
  const auto& e = ensemble();
  return {e.sum_rule < 1e-9 && e.commutator < 1e-9,
          fmt("sum rule %.2e, commutator %.2e over %zu rows", e.sum_rule, e.commutator, e.rows)};
}

// ---- 3: electromech oracle

double rel_diff(const TransferRow& a, const TransferRow& b) {
  double scale = 0.0, diff = 0.0;
  for (std::size_t m = 0; m < b.u.size(); ++m) {
    if (a.u_physical(m)) {
      scale = std::max(scale, std::abs(b.u[m]));
      diff = std::max(diff, std::abs(a.u[m] - b.u[m]));
    }
    if (a.v_physical(m)) {
      scale = std::max(scale, std::abs(b.v[m]));
      diff = std::max(diff, std::abs(a.v[m] - b.v[m]));
    }
  }
  return diff / scale;
}

Outcome oracle() {
  std::vector<em::Params> sets{em::defaults()};
  auto b = em::defaults();
  b.g *= 3.0;
  b.gamma_tx *= 0.5;
  b.gamma_m = hz_to_angular(1e3);
  b.omega_m = hz_to_angular(8e6);
  b.omega_drive = b.omega_lc - b.omega_m;
  sets.push_back(b);
  auto c = em::defaults();
  c.gamma_wg *= 4.0;
  c.T_tx = 0.0;
  c.T_wg = 2.0;
  sets.push_back(c);

  double worst = 0.0, spread = 0.0;
  std::complex<double> first;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& p = sets[i];
    const auto k = em::fit_convention_constant(p, {0.9 * p.omega_m, p.omega_m, 1.1 * p.omega_m});
    if (i == 0) first = k;
    spread = std::max(spread, std::abs(k - first));
    const auto dyn = assemble_dynamics(em::build_model(p));
    for (double w : linear_grid(0.5 * p.omega_m, 1.5 * p.omega_m, 1000))
      worst = std::max(worst, rel_diff(transfer_row(dyn, w, Sideband::upper), em::closed_form_row(p, w, em::CircuitResponse::rotating_frame, k)));
  }
  return {worst < 1e-8 && spread < 1e-9,
          fmt("constant = %.12f%+.1ei, spread %.1e over %zu sets, max rel diff %.2e at 1e3 frequencies", first.real(),
              first.imag(), spread, sets.size(), worst)};
}

// ---- 4: peak formulas

em::Params scaled(double s, double T) {
  auto p = em::defaults();
  p.omega_m *= s;
  p.gamma_tx *= s;
  p.gamma_wg *= s * s;
  p.gamma_m *= s * s;
  p.g *= std::pow(s, 1.5);
  p.omega_drive = p.omega_lc - p.omega_m;
  p.T_tx = T;
  p.T_wg = p.T_m = T * s;  // fixed occupancies
  return p;
}

bool decreasing(const std::vector<double>& e, double floor) {
  for (std::size_t i = 1; i < e.size(); ++i)
    if (!(e[i] < e[i - 1] || (e[i] < floor && e[i - 1] < floor))) return false;
  return true;
}

Outcome peaks() {
  Outcome o;
  const std::vector<double> steps{1.0, 0.5, 0.25};
  std::vector<double> eta_err;
  for (double s : steps) {
    const auto p = scaled(s, 0.03);
    const auto dyn = assemble_dynamics(em::build_model(p));
    const double lw = p.gamma_wg + p.gamma_m + p.g * p.g / p.gamma_tx;
    const auto pk = find_eta_peak(dyn, p.omega_m - 10.0 * lw, p.omega_m + 10.0 * lw);
    const double want = em::peak_eta(p).value;
    eta_err.push_back(std::abs(pk.eta - want) / want);
  }
  o.pass = eta_err[0] < 1e-2 && decreasing(eta_err, 0.0);
  o.detail = fmt("eta rel err %.1e %.1e %.1e", eta_err[0], eta_err[1], eta_err[2]);
  for (double T : {0.0, 0.03, 4.0}) {
    std::vector<double> n_err;
    for (double s : steps) {
      const auto p = scaled(s, T);
      const auto dyn = assemble_dynamics(em::build_model(em::absorb_spring_shift(p)));
      const double got = added_noise(transfer_row(dyn, p.omega_m, Sideband::upper));
      const double want = em::peak_N(p).value;
      n_err.push_back(std::abs(got - want) / want);
    }
    o.pass = o.pass && n_err[0] < 1e-2 && decreasing(n_err, 1e-10);
    o.detail += fmt("; N(T=%g) %.1e %.1e %.1e", T, n_err[0], n_err[1], n_err[2]);
  }
  const auto p = em::defaults();
  o.detail += fmt(" (gamma_tx/w_lc %.0e, 2w_m/w_lc %.0e)", p.gamma_tx / p.omega_lc, 2.0 * p.omega_m / p.omega_lc);
  return o;
}

// ---- 5: ideal limit

Outcome ideal() {
  auto p = em::defaults();
  p.gamma_m = 0.0;
  p.T_tx = p.T_wg = p.T_m = 0.0;
  p.gamma_tx = 1e-3 * p.omega_m;
  p.g = 0.2 * p.gamma_tx;
  p.gamma_wg = p.g * p.g / p.gamma_tx;
  const auto dyn = assemble_dynamics(em::build_model(p));
  const double lw = p.gamma_wg + p.g * p.g / p.gamma_tx;
  const auto pk = find_eta_peak(dyn, p.omega_m - 10.0 * lw, p.omega_m + 10.0 * lw);
  const double n = added_noise(transfer_row(dyn, pk.omega, Sideband::upper));
  const double e1 = em::peak_eta(1.0, 0.0, 0.0);
  const double e49 = std::abs(em::peak_eta(1.0, 1.0, 0.0) - 4.0 / 9.0);
  const double e169 = std::abs(em::peak_eta(1.0, 0.0, 0.5) - 16.0 / 9.0);
  return {pk.eta >= 0.99 && pk.eta <= 1.01 && n < 1e-2 && e1 == 1.0 && e49 < 1e-12 && e169 < 1e-12,
          fmt("eta %.6f, N %.2e; closed form 1 -> %.17g, 4/9 err %.1e, 16/9 err %.1e", pk.eta, n, e1, e49, e169)};
}

// ---- 6: heterodyne

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

Outcome heterodyne() {
  std::mt19937_64 rng(77);
  std::size_t tried = 0, used = 0;
  double worst = -1e300;
  RandomModelOptions opts;
  while (used < 1000 && tried < 5000) {
    ++tried;
    const auto m = random_model(rng, opts);
    const auto dyn = assemble_dynamics(m);
    const double hi = std::min(3.0 * characteristic_rate(m), 1.5e10);
    std::uniform_real_distribution<double> logw(std::log(1e-3 * hi), std::log(hi));
    const double w = std::exp(logw(rng));
    const auto up = transfer_row(dyn, w, Sideband::upper);
    const auto dn = transfer_row(dyn, w, Sideband::lower);
    try {
      const auto r = heterodyne_sensitivity(up, dn, constructive_lo_phase(up, dn));
      worst = std::max(worst, (r.p_s - r.bound) / std::max(1.0, r.bound));
      ++used;
    } catch (const SignalNulledError&) {
    } catch (const DomainError&) {
    }
  }
  const double h = std::sqrt(0.5);
  const double ideal =
      heterodyne_sensitivity(hand_row(Sideband::upper, {1.0, 0.0}, {0.0, 0.0}), hand_row(Sideband::lower, {0.0, 1.0}, {0.0, 0.0}), 0.0).p_s;
  const double sym =
      heterodyne_sensitivity(hand_row(Sideband::upper, {h, 0.0}, {0.0, h}), hand_row(Sideband::lower, {0.0, 0.0}, {h, h}), 0.0).p_s;
  double last = 0.0;
  bool monotone = true;
  double prev = INFINITY;
  for (int k = 2; k <= 16; ++k) {
    last = heterodyne_bound(1.0, 0.0, std::pow(10.0, -k), 0.0);
    monotone = monotone && std::abs(last - 1.0) < prev;
    prev = std::abs(last - 1.0);
  }
  return {used == 1000 && worst <= 1e-9 && std::abs(ideal - 1.0) < 1e-12 && std::abs(sym - 1.5) < 1e-12 &&
              std::abs(last - 1.0) < 1e-6 && monotone,
          fmt("max (P_s - bound)/max(1, bound) = %.2e over %zu configurations (%zu drawn); ideal %.15f, symmetric "
              "%.15f; bound at eta- = 1e-16: %.9f",
              worst, used, tried, ideal, sym, last)};
}

// ---- 7: qubit

Outcome qubit() {
  const double a = qubit_fidelity(1.0, 0.0).fidelity;
  const double b = qubit_fidelity(1.0, 0.06).fidelity;
  const double c = qubit_fidelity(0.96, 0.0).fidelity;
  return {a == 1.0 && std::abs(b - 0.9) < 1e-12 && std::abs(c - 0.986599) < 1e-5,
          fmt("F(1,0) = %.17g, F(1,0.06) = %.15f, F(0.96,0) = %.7f", a, b, c)};
}

// ---- 8: counting

SpectralProfile lorentzian(double kappa, std::size_t points) {
  SpectralProfile p;
  const double edge = std::asinh(2e6);
  for (std::size_t i = 0; i < points; ++i) {
    const double u = -edge + 2.0 * edge * static_cast<double>(i) / static_cast<double>(points - 1);
    const double w = 0.5 * kappa * std::sinh(u);
    p.omegas.push_back(w);
    p.eta.push_back(0.8 / (1.0 + 4.0 * w * w / (kappa * kappa)));
    p.flux.push_back(p.eta.back() * 0.3);
  }
  return p;
}

Outcome counting() {
  const double kappa = kTwoPi * 2e5;
  const double b1 = dark_count_rate(lorentzian(kappa, 10001), 0.0).bandwidth_hz;
  const double b2 = dark_count_rate(lorentzian(kappa, 20001), 0.0).bandwidth_hz;
  SpectralProfile flat;
  const double width = kTwoPi * 1e6;
  for (int i = 0; i <= 100; ++i) {
    flat.omegas.push_back(-0.5 * width + width * i / 100.0);
    flat.eta.push_back(0.5);
    flat.flux.push_back(0.1);
  }
  const double bf = dark_count_rate(flat, 0.0).bandwidth_hz;
  const double want = kappa / 4.0;
  const double e1 = std::abs(b1 / want - 1.0), e2 = std::abs(b2 / want - 1.0), ef = std::abs(bf / 1e6 - 1.0);
  return {e1 < 1e-3 && e2 < 1e-3 && std::abs(b2 / b1 - 1.0) < 1e-3 && ef < 1e-6,
          fmt("Lorentzian B/(kappa/4) - 1: %.1e, doubled grid %.1e; flat band %.1e", e1, e2, ef)};
}

// ---- 9: entanglement

Outcome entanglement() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (Scheme s : {Scheme::one_click, Scheme::two_click})
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        for (int k = 0; k < 10; ++k) {
          const ProtocolParams setup{s, 0.05 + 0.1 * i, 1e-4 * std::pow(10.0, 0.4 * j) * (j ? 1.0 : 0.0), 0.05 + 0.105 * k};
          try {
            const auto a = entangle_fidelity_exact(setup);
            const auto b = protocol_enumerate(setup);
            worst = std::max({worst, std::abs(a.fidelity - b.fidelity),
                              std::abs(a.success_probability - b.success_probability)});
            for (std::size_t q = 0; q < n_populations; ++q)
              worst = std::max(worst, std::abs(a.populations[q] - b.populations[q]));
          } catch (const NoHeraldError&) {
          }
        }
  bool ok = worst < 1e-12;
  std::string d = fmt("exact vs enumeration %.1e on 2 x 10^3 grid", worst);

  const double f2 = two_click_fidelity(0.0, 0.37);
  const double f1 = one_click_fidelity(0.1, 0.0, 1.0);
  ok = ok && f2 == 1.0 && std::abs(f1 - 1.8 / 1.9) < 1e-12;
  d += fmt("; F2c(P_d=0) = %.17g; F1c - 1.8/1.9 = %.1e", f2, f1 - 1.8 / 1.9);

  const auto as = entangle_fidelity_asymptotic({Scheme::one_click, 0.01, 1e-6, 0.01});
  const double exact_opt = one_click_fidelity(as.p_e_opt, 1e-6, 0.01);
  ok = ok && std::abs(as.fidelity_opt - 0.98005) < 1e-5 && std::abs(as.fidelity_opt - exact_opt) < 1e-3;
  d += fmt("; F1c_opt %.7f (exact at P_e_opt %.7f)", as.fidelity_opt, exact_opt);

  double worst_z = 0.0;
  for (const ProtocolParams setup : {ProtocolParams{Scheme::one_click, 0.1, 1e-3, 0.5}, ProtocolParams{Scheme::two_click, 0.5, 1e-2, 0.3}}) {
    const auto en = protocol_enumerate(setup);
    const auto mc = protocol_montecarlo(setup, 1000000, 12345);
    worst_z = std::max(worst_z, std::abs(mc.fidelity - en.fidelity) / mc.fidelity_stderr);
    worst_z = std::max(worst_z, std::abs(mc.success_probability - en.success_probability) / mc.success_stderr);
  }
  const double secs = seconds_since(t0);
  ok = ok && worst_z < 3.0 && secs < 60.0;
  d += fmt("; Monte Carlo 1e6 trials worst |z| %.2f; %.1f s", worst_z, secs);
  return {ok, d};
}

// ---- 10: optimizer

Outcome optimizer() {
  RunConfig c;
  c.source.builtin = "electromech";
  OptimizeJob setup;
  setup.variables = {parse_variable("gamma_wg_hz:1e3:3e5:log")};
  const auto run = run_optimize(c, setup);
  const auto p = em::defaults();
  const double matched = angular_to_hz(p.g * p.g / p.gamma_tx);
  const double err = std::abs(run.result.best_x[0] / matched - 1.0);
  return {err < 1e-2 && run.result.evaluations < 200,
          fmt("gamma_wg = %.2f Hz vs g^2/gamma_tx = %.2f Hz (rel %.1e) in %d evaluations", run.result.best_x[0], matched,
              err, run.result.evaluations)};
}

// ---- 11: performance

Outcome performance() {
  const auto p = em::defaults();
  const auto dyn = assemble_dynamics(em::build_model(p));
  SweepOptions o;
  o.threads = 1;
  const auto grid = linear_grid(0.9 * p.omega_m, 1.1 * p.omega_m, 10000);
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = spectrum_sweep(dyn, grid, o);
  const double secs = seconds_since(t0);
  return {secs < 5.0 && g.failures() == 0 && g.records.size() == 10000,
          fmt("10^4 points single-threaded in %.3f s", secs)};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{quasi_unitarity, sum_rule, oracle,    peaks,     ideal,      heterodyne,
                                                       qubit,           counting, entanglement, optimizer, performance};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("criterion %2zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
