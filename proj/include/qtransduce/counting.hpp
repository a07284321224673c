#pragma once

// Photon counting at the exit: dark-count rate, noise bandwidth and the
// expected number of counts in a detection window.

#include <vector>

#include "qtransduce/spectrum.hpp"

namespace qtr {

/// Upper-sideband efficiency and noise flux (eta N) sampled on an ascending grid [rad/s].
struct SpectralProfile {
  std::vector<double> omegas;
  std::vector<double> eta;
  std::vector<double> flux;
};

/// Throws DomainError if the grid has failed points.
SpectralProfile upper_profile(const SpectrumGrid& grid);

struct DarkCount {
  double eta_plus = 0.0;
  double n_plus = 0.0;
  double bandwidth_hz = 0.0;  // integral (dOmega / 2pi) (eta / eta+) (N / N+)
  double rate = 0.0;          // r_N = eta+ N+ B [1/s]
};

struct QuadratureOptions {
  double rel_tol = 1e-3;  // allowed change between the grid and its every-other-point subgrid
};

/// Evaluates at omega_sig by linear interpolation. Throws DomainError if eta(omega_sig) = 0
/// or omega_sig is outside the grid, UndefinedNoiseError if N+ = 0 (B is then undefined),
/// QuadratureError if the bandwidth integral is not converged. counting_yield accepts N+ = 0
/// and then counts no dark photons.
DarkCount dark_count_rate(const SpectralProfile& profile, double omega_sig, const QuadratureOptions& options = {});

/// Normalized input spectrum |h_in(Omega)|^2, integral 1 over Omega for scale = 1.
struct InputMode {
  enum class Shape { delta, gaussian, lorentzian };
  Shape shape = Shape::delta;
  double center = 0.0;  // rad/s
  double width = 0.0;   // gaussian: std dev of |h|^2; lorentzian: FWHM [rad/s]
  double scale = 1.0;   // amplitude factor; the total weight is scale^2

  double density(double omega) const;
  double mass() const { return scale * scale; }
};

/// Output temporal mode h_out(t) for t >= 0.
struct OutputMode {
  enum class Shape { flat, exponential, gaussian };
  Shape shape = Shape::flat;
  double duration = 0.0;  // flat: length; exponential: 1/e time of |h|^2; gaussian: std dev of |h|^2
  double delay = 0.0;     // gaussian centre [s]

  /// integral over [0, T] of |h_out|^2
  double captured(double window) const;
};

struct CountingResult {
  DarkCount dark;
  double eta_h = 0.0;
  double captured = 0.0;
  double window = 0.0;
  double n_out_mean = 0.0;  // eta+ [ (eta_h / eta+) captured + N+ B T ]
};

/// Throws DomainError when |h_in|^2 does not integrate to 1 within 1e-6, or the window is not positive.
CountingResult counting_yield(const SpectralProfile& profile, double omega_sig, const InputMode& h_in,
                              const OutputMode& h_out, double window, const QuadratureOptions& options = {});

}  // namespace qtr
