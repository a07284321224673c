#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qtransduce/dynamics.hpp"

namespace qtr {

struct ScatteringMatrix {
  double omega = 0.0;
  Eigen::MatrixXcd matrix;   // 2P x 2P on the doubled port basis
  double symplectic_residual = 0.0;  // max |S K S^dag - K|
  // same on the slots at positive lab frequency; for lab-quadrature ports this
  // is the meaningful one and it is exact only at the bare lab resonance
  double physical_symplectic_residual = 0.0;
  double condition = 0.0;            // 1 / rcond of (i Omega + M)
};

struct ScatteringOptions {
  double max_condition = 1e12;
};

/// S(Omega) = 1 + Gamma' (i Omega + M)^-1 Gamma.
/// Throws NearSingularError when the condition estimate exceeds max_condition.
ScatteringMatrix scattering_matrix(const DoubledDynamics& dyn, double omega, const ScatteringOptions& options = {});

/// max |S(w)_creation-block - conj(S(-w)_annihilation-block)| with slots exchanged.
double particle_hole_residual(const DoubledDynamics& dyn, double omega);

enum class Sideband { upper, lower };

inline double sign(Sideband s) { return s == Sideband::upper ? 1.0 : -1.0; }

/// Exit-port row of S at w = +Omega (upper) or -Omega (lower):
///   a_out,e(w) = sum_m U_m a_m(w) + V_m a_m^dag(-w)
/// Columns whose lab frequency (w + w0 for U, -w + w0 for V) is not positive
/// describe no itinerant mode; they are kept but flagged non-physical.
struct TransferRow {
  double omega = 0.0;  // w, signed
  Sideband sideband = Sideband::upper;
  std::size_t exit_port = 0;
  std::size_t signal_port = 0;
  std::vector<std::string> port_names;
  std::vector<double> temperatures;
  std::vector<cd> u;
  std::vector<cd> v;
  std::vector<double> u_lab_frequency;
  std::vector<double> v_lab_frequency;

  bool u_physical(std::size_t m) const { return u_lab_frequency[m] > 0.0; }
  bool v_physical(std::size_t m) const { return v_lab_frequency[m] > 0.0; }
  /// U_s on the upper sideband, V_s on the lower.
  cd signal_coefficient() const { return sideband == Sideband::upper ? u[signal_port] : v[signal_port]; }
};

/// Reads the exit row out of S. The sideband follows the sign of S.omega.
/// Throws DomainError if the exit field itself sits at non-positive lab frequency.
TransferRow transfer_row(const DoubledDynamics& dyn, const ScatteringMatrix& s,
                         std::optional<std::size_t> exit_port = std::nullopt);

/// Convenience: evaluates S at sign(sideband) * omega and extracts the exit row.
TransferRow transfer_row(const DoubledDynamics& dyn, double omega, Sideband sideband,
                         const ScatteringOptions& options = {});

double eta(const TransferRow& row);

/// Thermal plus vacuum-amplification photon flux reaching the exit from every
/// physical column except the signal one.
double noise_flux(const TransferRow& row);

/// Input-referred added noise N = noise_flux / eta. Throws UndefinedNoiseError when eta = 0.
double added_noise(const TransferRow& row);

/// |1 - (sum |U|^2 - sum |V|^2)| over physical columns.
double sum_rule_residual(const TransferRow& row);

/// |[F, F^dag] - (1 -+ eta)| for the upper / lower sideband.
double noise_commutator_residual(const TransferRow& row);

}  // namespace qtr
