#pragma once

// Heterodyne detection of the exit field with a local oscillator at the exit
// band centre. Needs the exit rows at +Omega and -Omega.

#include <complex>

#include "qtransduce/scattering.hpp"

namespace qtr {

struct HeterodyneResult {
  double omega = 0.0;
  double theta_lo = 0.0;
  std::complex<double> t_lo;    // e^{-i theta} U_s(Omega) + e^{i theta} V_s^*(-Omega)
  std::complex<double> f_corr;  // cross-sideband correlation
  double eta_up = 0.0;
  double eta_dn = 0.0;
  double flux_up = 0.0;  // eta N on each sideband
  double flux_dn = 0.0;
  double p_s = 0.0;
  double bound = 0.0;
};

/// Correlation between the two sidebands of the noise operator:
///   f = sum_{m != s} U_m(W) V_m(-W) (2 n_m(W + w0) + 1) + sum_m V_m(W) U_m(-W) (2 n_m(-W + w0) + 1)
std::complex<double> sideband_correlation(const TransferRow& up, const TransferRow& dn);

/// Sensitivity P_s relative to the input, for LO phase theta.
/// Throws SignalNulledError when |t| vanishes and DomainError for mismatched rows.
HeterodyneResult heterodyne_sensitivity(const TransferRow& up, const TransferRow& dn, double theta_lo);

/// P_s from the symmetrized photocurrent noise, summed port by port.
/// Independent of heterodyne_sensitivity; used to cross-check it.
double heterodyne_sensitivity_direct(const TransferRow& up, const TransferRow& dn, double theta_lo);

/// LO phase that adds the two signal paths in phase, (arg U_s(W) + arg V_s(-W)) / 2.
double constructive_lo_phase(const TransferRow& up, const TransferRow& dn);

/// Cauchy-Schwarz upper bound on P_s at the constructive phase.
/// Takes the noise flux eta N of each sideband so eta -> 0 is continuous.
/// Throws DomainError when both efficiencies vanish.
double heterodyne_bound(double eta_up, double flux_up, double eta_dn, double flux_dn);

}  // namespace qtr
