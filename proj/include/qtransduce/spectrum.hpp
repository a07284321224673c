#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtransduce/scattering.hpp"

namespace qtr {

/// Figures of merit of one sideband at one frequency.
struct SidebandFigures {
  double eta = 0.0;
  double noise_flux = 0.0;          // eta * N
  std::optional<double> added_noise;  // empty when eta = 0
  double sum_rule_residual = 0.0;
  double commutator_residual = 0.0;
  TransferRow row;
};

SidebandFigures sideband_figures(const TransferRow& row);

/// A sideband whose exit field would sit at non-positive lab frequency is left
/// empty without an error (the mechanical exit of a lab-quadrature model).
struct SpectrumRecord {
  double omega = 0.0;
  std::optional<SidebandFigures> upper;
  std::optional<SidebandFigures> lower;
  std::optional<double> symplectic_residual;  // physical block of S(+Omega)
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

struct SpectrumGrid {
  std::vector<SpectrumRecord> records;
  std::size_t failures() const;
};

struct SweepOptions {
  ScatteringOptions scattering;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Evaluates both sidebands on an ascending grid of positive frequencies.
/// Per-point failures are recorded in SpectrumRecord::errors, the rest of the
/// grid is still filled. Throws DomainError for a grid that is not ascending and positive.
SpectrumGrid spectrum_sweep(const DoubledDynamics& dyn, const std::vector<double>& omegas,
                            const SweepOptions& options = {});

std::vector<double> linear_grid(double lo, double hi, std::size_t points);
std::vector<double> log_grid(double lo, double hi, std::size_t points);

struct EtaPeak {
  double omega = 0.0;
  double eta = 0.0;
};

/// Maximum of eta on [lo, hi]: coarse scan then golden-section refinement.
EtaPeak find_eta_peak(const DoubledDynamics& dyn, double lo, double hi, Sideband sideband = Sideband::upper,
                      std::size_t scan_points = 401, double rel_tol = 1e-12);

}  // namespace qtr
