#include "qtransduce/heterodyne.hpp"

#include <cmath>

#include "qtransduce/errors.hpp"
#include "qtransduce/thermal.hpp"

namespace qtr {

namespace {

using cd = std::complex<double>;

void check_pair(const TransferRow& up, const TransferRow& dn) {
  if (up.sideband != Sideband::upper || dn.sideband != Sideband::lower)
    throw DomainError("heterodyne needs an upper and a lower sideband row");
  if (std::abs(up.omega + dn.omega) > 1e-12 * std::abs(up.omega) || up.u.size() != dn.u.size() ||
      up.exit_port != dn.exit_port || up.signal_port != dn.signal_port)
    throw DomainError("heterodyne rows must belong to the same exit at +Omega and -Omega");
}

// symmetrized occupancy n + 1/2 at a lab frequency
double sym_occ(double lab, double temperature) { return bose_occupancy(lab, temperature) + 0.5; }

}  // namespace

cd sideband_correlation(const TransferRow& up, const TransferRow& dn) {
  check_pair(up, dn);
  cd f = 0.0;
  for (std::size_t m = 0; m < up.u.size(); ++m) {
    // U_m(W) and V_m(-W) both multiply a_m(W)
    if (up.u_physical(m) && m != up.signal_port)
      f += up.u[m] * dn.v[m] * (2.0 * sym_occ(up.u_lab_frequency[m], up.temperatures[m]));
    if (up.v_physical(m)) f += up.v[m] * dn.u[m] * (2.0 * sym_occ(up.v_lab_frequency[m], up.temperatures[m]));
  }
  return f;
}

double constructive_lo_phase(const TransferRow& up, const TransferRow& dn) {
  check_pair(up, dn);
  return 0.5 * (std::arg(up.u[up.signal_port]) + std::arg(dn.v[dn.signal_port]));
}

HeterodyneResult heterodyne_sensitivity(const TransferRow& up, const TransferRow& dn, double theta_lo) {
  check_pair(up, dn);
  HeterodyneResult r;
  r.omega = up.omega;
  r.theta_lo = theta_lo;
  const cd phase = std::polar(1.0, -theta_lo);
  r.t_lo = phase * up.u[up.signal_port] + std::conj(phase) * std::conj(dn.v[dn.signal_port]);
  const double t2 = std::norm(r.t_lo);
  if (!(t2 > 0.0)) throw SignalNulledError("LO phase cancels the signal transfer (|t| = 0)");
  r.f_corr = sideband_correlation(up, dn);
  r.eta_up = eta(up);
  r.eta_dn = eta(dn);
  r.flux_up = noise_flux(up);
  r.flux_dn = noise_flux(dn);
  const double numer = r.flux_up + r.flux_dn + 0.5 + 0.5 * (1.0 - r.eta_up + r.eta_dn) +
                       std::real(phase * phase * r.f_corr);
  r.p_s = 0.5 + numer / t2;
  r.bound = heterodyne_bound(r.eta_up, r.flux_up, r.eta_dn, r.flux_dn);
  return r;
}

double heterodyne_sensitivity_direct(const TransferRow& up, const TransferRow& dn, double theta_lo) {
  check_pair(up, dn);
  const cd phase = std::polar(1.0, -theta_lo);
  cd t = 0.0;
  double noise = 0.0;
  for (std::size_t m = 0; m < up.u.size(); ++m) {
    // X(W) = sum_m A_m a_m(W) + B_m a_m^dag(-W)
    const cd a = phase * up.u[m] + std::conj(phase) * std::conj(dn.v[m]);
    const cd b = phase * up.v[m] + std::conj(phase) * std::conj(dn.u[m]);
    if (m == up.signal_port)
      t = a;
    else if (up.u_physical(m))
      noise += std::norm(a) * sym_occ(up.u_lab_frequency[m], up.temperatures[m]);
    if (up.v_physical(m)) noise += std::norm(b) * sym_occ(up.v_lab_frequency[m], up.temperatures[m]);
  }
  if (!(std::norm(t) > 0.0)) throw SignalNulledError("LO phase cancels the signal transfer (|t| = 0)");
  return 0.5 + noise / std::norm(t);
}

double heterodyne_bound(double eta_up, double flux_up, double eta_dn, double flux_dn) {
  if (!(eta_up >= 0.0) || !(eta_dn >= 0.0) || !(flux_up >= 0.0) || !(flux_dn >= 0.0))
    throw DomainError("heterodyne bound needs non-negative efficiencies and fluxes");
  const double s = std::sqrt(eta_up) + std::sqrt(eta_dn);
  if (!(s > 0.0)) throw DomainError("heterodyne bound undefined: both sideband efficiencies are zero");
  // w_+- sqrt(N +- (1/eta -+ 1)/2) with the 1/eta absorbed
  const double up = std::sqrt(std::max(0.0, flux_up - 0.5 * eta_up + 0.5));
  const double dn = std::sqrt(flux_dn + 0.5 * eta_dn + 0.5);
  const double sum = (up + dn) / s;
  return 0.5 + sum * sum;
}

}  // namespace qtr
