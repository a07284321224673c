#pragma once

// Driven LC circuit capacitively coupled to a mechanical mode that radiates
// into a phononic waveguide. Serves as a built-in model and as an analytic
// reference for the generic engine.

#include <complex>
#include <string>
#include <vector>

#include "qtransduce/model.hpp"
#include "qtransduce/scattering.hpp"

namespace qtr::electromech {

using cd = std::complex<double>;

/// All frequencies and rates angular [rad/s], temperatures in K.
struct Params {
  double omega_m = 0.0;
  double omega_lc = 0.0;
  double omega_drive = 0.0;
  double g = 0.0;
  double gamma_tx = 0.0;
  double gamma_wg = 0.0;
  double gamma_m = 0.0;
  double T_tx = 0.0;
  double T_wg = 0.0;
  double T_m = 0.0;
};

/// 5 GHz circuit, 5 MHz mechanics, 100 kHz circuit linewidth, 50 kHz coupling,
/// matched waveguide, 10 Hz intrinsic damping, 30 mK everywhere.
Params defaults();

/// Throws ConfigurationError if rates or frequencies are inadmissible.
void check(const Params& p);

inline constexpr const char* kSignalPort = "transmission_line";
inline constexpr const char* kExitPort = "waveguide";
inline constexpr const char* kLossPort = "intrinsic_loss";

/// Two-mode network: lab-quadrature mechanics (band centre 0) and rotating
/// circuit (band centre omega_drive) joined by a quadrature coupling.
/// The loss port is omitted when gamma_m = 0.
TransducerModel build_model(const Params& p);

/// How the circuit response enters the closed form.
/// rotating_frame: Lorentzian about the drive, the response the engine realizes.
/// lab_frame: full lab-frame oscillator response, off by O(omega_m / omega_lc).
enum class CircuitResponse { rotating_frame, lab_frame };

struct Susceptibilities {
  cd chi_m0;
  cd chi_lc_plus;
  cd chi_lc_minus;
  cd chi_m;
};

/// Throws PoleError on an exact undamped pole.
Susceptibilities susceptibilities(const Params& p, double omega,
                                  CircuitResponse response = CircuitResponse::rotating_frame);

/// Complex scalar multiplying every chi_m term of the closed form.
/// Fitted once against the engine (see fit_convention_constant); it comes out as 1.
inline constexpr std::complex<double> kConventionConstant{1.0, 0.0};

/// Upper-sideband waveguide row at Omega > 0, port order as in build_model.
/// Creation columns of the mechanical-side ports are non-physical at Omega > 0
/// and are reported as zero. Throws DomainError for Omega <= 0.
TransferRow closed_form_row(const Params& p, double omega, CircuitResponse response = CircuitResponse::rotating_frame,
                            cd convention = kConventionConstant);

/// Least-squares estimate of the convention constant from engine rows at the given frequencies.
cd fit_convention_constant(const Params& p, const std::vector<double>& omegas);

/// Copy of p whose bare mechanical frequency is raised so that the loaded
/// resonance (zero of Re 1/chi_m with the rotating-frame circuit response)
/// sits at p.omega_m. Drive and all rates are unchanged. The peak formulas
/// take omega_m to be this loaded resonance.
Params absorb_spring_shift(const Params& p);

/// Sideband leakage factor (gamma_tx/2)^2 / ((2 omega_m)^2 + (gamma_tx/2)^2).
double leakage(const Params& p);

struct PeakValue {
  double value = 0.0;
  std::vector<std::string> warnings;
};

/// Peak efficiency 4 gamma_wg G / (gamma_m + gamma_wg + G (1 - L))^2 with G = g^2 / gamma_tx.
PeakValue peak_eta(const Params& p);

/// Same formula in ratios: wg_ratio = gamma_wg / G, m_ratio = gamma_m / G.
double peak_eta(double wg_ratio, double m_ratio, double leak);

/// Peak added noise: leakage term + intrinsic term + reflected waveguide term.
/// Throws UndefinedNoiseError when the peak efficiency is zero.
PeakValue peak_N(const Params& p);

/// Same three terms from precomputed occupancies and ratios.
double peak_N(double leak, double n_tx, double m_ratio, double n_m, double wg_ratio, double eta, double n_wg);

}  // namespace qtr::electromech
