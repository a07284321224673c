#include "qtransduce/electromech.hpp"

#include <cmath>
#include <sstream>

#include "qtransduce/dynamics.hpp"
#include "qtransduce/errors.hpp"
#include "qtransduce/thermal.hpp"
#include "qtransduce/units.hpp"

namespace qtr::electromech {

namespace {
constexpr cd kI{0.0, 1.0};

cd invert(cd x, const char* what, double omega) {
  if (x == cd(0.0, 0.0)) {
    std::ostringstream os;
    os << what << " has an undamped pole at omega = " << omega << " rad/s";
    throw PoleError(os.str());
  }
  return 1.0 / x;
}
}  // namespace

Params defaults() {
  Params p;
  p.omega_lc = hz_to_angular(5e9);
  p.omega_m = hz_to_angular(5e6);
  p.omega_drive = p.omega_lc - p.omega_m;
  p.gamma_tx = hz_to_angular(100e3);
  p.g = hz_to_angular(50e3);
  p.gamma_wg = p.g * p.g / p.gamma_tx;
  p.gamma_m = hz_to_angular(10.0);
  p.T_tx = p.T_wg = p.T_m = 0.030;
  return p;
}

void check(const Params& p) {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!(p.omega_m > 0.0) || !finite(p.omega_m)) throw ConfigurationError("omega_m must be positive");
  if (!(p.omega_lc > p.omega_m) || !finite(p.omega_lc)) throw ConfigurationError("omega_lc must exceed omega_m");
  if (!(p.omega_drive > 0.0) || !finite(p.omega_drive)) throw ConfigurationError("drive frequency must be positive");
  if (!(p.g >= 0.0) || !finite(p.g)) throw ConfigurationError("g must be non-negative");
  if (!(p.gamma_tx > 0.0) || !finite(p.gamma_tx)) throw ConfigurationError("gamma_tx must be positive");
  if (!(p.gamma_wg > 0.0) || !finite(p.gamma_wg)) throw ConfigurationError("gamma_wg must be positive");
  if (!(p.gamma_m >= 0.0) || !finite(p.gamma_m)) throw ConfigurationError("gamma_m must be non-negative");
  for (double t : {p.T_tx, p.T_wg, p.T_m})
    if (!(t >= 0.0) || !finite(t)) throw ConfigurationError("temperatures must be non-negative");
}

TransducerModel build_model(const Params& p) {
  check(p);
  TransducerModel m;
  m.bands = {{"mechanical", 0.0}, {"electrical", p.omega_drive}};
  m.modes = {{"mechanics", "mechanical", Frame::lab_quadrature, p.omega_m},
             {"circuit", "electrical", Frame::rotating, p.omega_lc}};
  m.drives = {{"pump", p.omega_drive}};
  m.couplings = {{"mechanics", "circuit", p.g, "pump", 1, CouplingForm::quadrature_position}};
  m.ports = {{kSignalPort, "circuit", p.gamma_tx, p.T_tx, PortRole::signal, Frame::rotating},
             {kExitPort, "mechanics", p.gamma_wg, p.T_wg, PortRole::exit, Frame::lab_quadrature}};
  if (p.gamma_m > 0.0)
    m.ports.push_back({kLossPort, "mechanics", p.gamma_m, p.T_m, PortRole::loss, Frame::lab_quadrature});
  return m;
}

Susceptibilities susceptibilities(const Params& p, double omega, CircuitResponse response) {
  Susceptibilities s;
  const double gm = p.gamma_m + p.gamma_wg;
  s.chi_m0 = p.omega_m * invert(cd(p.omega_m * p.omega_m - omega * omega, -omega * gm), "bare mechanical response", omega);
  if (response == CircuitResponse::rotating_frame) {
    const double delta = p.omega_lc - p.omega_drive;
    s.chi_lc_plus = invert(cd(2.0 * (delta - omega), -p.gamma_tx), "circuit response", omega);
    s.chi_lc_minus = invert(cd(2.0 * (delta + omega), p.gamma_tx), "circuit response", omega);
  } else {
    const double wp = p.omega_drive + omega;
    const double wn = p.omega_drive - omega;
    const double w2 = p.omega_lc * p.omega_lc;
    s.chi_lc_plus = p.omega_lc * invert(cd(w2 - wp * wp, -wp * p.gamma_tx), "circuit response", omega);
    s.chi_lc_minus = p.omega_lc * invert(cd(w2 - wn * wn, wn * p.gamma_tx), "circuit response", omega);
  }
  s.chi_m = invert(1.0 / s.chi_m0 - p.g * p.g * (s.chi_lc_plus + s.chi_lc_minus), "effective mechanical response",
                   omega);
  return s;
}

TransferRow closed_form_row(const Params& p, double omega, CircuitResponse response, cd convention) {
  if (!(omega > 0.0)) throw DomainError("closed-form row needs omega > 0");
  check(p);
  const auto s = susceptibilities(p, omega, response);
  const cd k = convention * kI * std::sqrt(2.0 * p.gamma_wg) * s.chi_m;
  const double root_tx = std::sqrt(2.0 * p.gamma_tx);

  TransferRow row;
  row.omega = omega;
  row.sideband = Sideband::upper;
  row.signal_port = 0;
  row.exit_port = 1;
  row.port_names = {kSignalPort, kExitPort};
  row.temperatures = {p.T_tx, p.T_wg};
  row.u = {-k * p.g * root_tx * s.chi_lc_plus, 1.0 + k * std::sqrt(2.0 * p.gamma_wg)};
  row.v = {-k * p.g * root_tx * s.chi_lc_minus, 0.0};
  row.u_lab_frequency = {omega + p.omega_drive, omega};
  row.v_lab_frequency = {-omega + p.omega_drive, -omega};
  if (p.gamma_m > 0.0) {
    row.port_names.push_back(kLossPort);
    row.temperatures.push_back(p.T_m);
    row.u.push_back(k * std::sqrt(2.0 * p.gamma_m));
    row.v.push_back(0.0);
    row.u_lab_frequency.push_back(omega);
    row.v_lab_frequency.push_back(-omega);
  }
  return row;
}

cd fit_convention_constant(const Params& p, const std::vector<double>& omegas) {
  const auto dyn = assemble_dynamics(build_model(p));
  cd num = 0.0;
  double den = 0.0;
  for (double w : omegas) {
    const auto engine = transfer_row(dyn, w, Sideband::upper);
    const auto base = closed_form_row(p, w, CircuitResponse::rotating_frame, 0.0);
    const auto unit = closed_form_row(p, w, CircuitResponse::rotating_frame, 1.0);
    for (std::size_t m = 0; m < base.u.size(); ++m) {
      if (engine.u_physical(m)) {
        const cd x = unit.u[m] - base.u[m];
        num += std::conj(x) * (engine.u[m] - base.u[m]);
        den += std::norm(x);
      }
      if (engine.v_physical(m)) {
        const cd x = unit.v[m] - base.v[m];
        num += std::conj(x) * (engine.v[m] - base.v[m]);
        den += std::norm(x);
      }
    }
  }
  if (!(den > 0.0)) throw DomainError("convention fit is degenerate (g = 0?)");
  return num / den;
}

Params absorb_spring_shift(const Params& p) {
  check(p);
  const auto s = susceptibilities(p, p.omega_m);
  // (w_b^2 - w_m^2) / w_b = g^2 Re(chi_+ + chi_-) at Omega = w_m; chi_LC does not depend on w_b
  const double r = p.g * p.g * (s.chi_lc_plus + s.chi_lc_minus).real();
  Params q = p;
  q.omega_m = 0.5 * (r + std::sqrt(r * r + 4.0 * p.omega_m * p.omega_m));
  return q;
}

double leakage(const Params& p) {
  const double h = p.gamma_tx / 2.0;
  return h * h / (4.0 * p.omega_m * p.omega_m + h * h);
}

double peak_eta(double wg_ratio, double m_ratio, double leak) {
  const double d = m_ratio + wg_ratio + (1.0 - leak);
  return 4.0 * wg_ratio / (d * d);
}

namespace {
std::vector<std::string> regime_warnings(const Params& p) {
  std::vector<std::string> w;
  const double detune = p.omega_lc - p.omega_m;
  if (std::abs(p.omega_drive - detune) > 1e-9 * p.omega_drive)
    w.push_back("drive is not tuned to omega_lc - omega_m; peak formulas assume it is");
  if (p.gamma_tx > 0.1 * p.omega_lc || 2.0 * p.omega_m > 0.1 * p.omega_lc)
    w.push_back("circuit response is far from Lorentzian (gamma_tx or 2 omega_m not << omega_lc)");
  if (p.gamma_wg + p.gamma_m > 0.1 * p.omega_m)
    w.push_back("mechanical linewidth is not small compared to omega_m");
  return w;
}
}  // namespace

PeakValue peak_eta(const Params& p) {
  check(p);
  const double G = p.g * p.g / p.gamma_tx;
  if (G == 0.0) return {0.0, regime_warnings(p)};
  return {peak_eta(p.gamma_wg / G, p.gamma_m / G, leakage(p)), regime_warnings(p)};
}

double peak_N(double leak, double n_tx, double m_ratio, double n_m, double wg_ratio, double eta, double n_wg) {
  if (!(eta > 0.0)) throw UndefinedNoiseError("peak added noise undefined: peak efficiency is zero");
  const double reflect = std::sqrt(wg_ratio) - 1.0 / std::sqrt(eta);
  return leak * (n_tx + 1.0) + m_ratio * n_m + reflect * reflect * n_wg;
}

PeakValue peak_N(const Params& p) {
  auto e = peak_eta(p);
  const double G = p.g * p.g / p.gamma_tx;
  const double n_tx = bose_occupancy(p.omega_lc - 2.0 * p.omega_m, p.T_tx);
  const double n_m = bose_occupancy(p.omega_m, p.T_m);
  const double n_wg = bose_occupancy(p.omega_m, p.T_wg);
  return {peak_N(leakage(p), n_tx, p.gamma_m / G, n_m, p.gamma_wg / G, e.value, n_wg), std::move(e.warnings)};
}

}  // namespace qtr::electromech
