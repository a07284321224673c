#pragma once

// Linearized input-output dynamics in the doubled (annihilation, creation) basis.
//
//   dB/dt = M B - Gamma A_in,     A_out = A_in + Gamma' B
//
// Internal slots are [a_1..a_n, a_1^dag..a_n^dag], port slots are
// [p_1..p_P, p_1^dag..p_P^dag]. The creation slot of port p at sideband
// frequency Omega carries p^dag(-Omega).

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qtransduce/model.hpp"

namespace qtr {

using cd = std::complex<double>;

struct PortSlot {
  std::size_t port = 0;
  bool creation = false;
};

struct DoubledDynamics {
  std::size_t n_modes = 0;
  std::size_t n_ports = 0;
  Eigen::MatrixXcd dyn_matrix;    // M, 2n x 2n
  Eigen::MatrixXcd in_coupling;   // Gamma, 2n x 2P
  Eigen::MatrixXcd out_coupling;  // Gamma', 2P x 2n
  std::vector<std::string> mode_names;
  std::vector<Port> ports;
  std::vector<double> port_band_center;  // omega_0 of the band each port's mode sits in
  std::size_t signal_port = 0;
  std::size_t exit_port = 0;
  double max_real_eigenvalue = 0.0;

  std::size_t dimension() const { return 2 * n_modes; }
  std::size_t port_slot(std::size_t port, bool creation) const { return creation ? port + n_ports : port; }
  PortSlot slot_info(std::size_t slot) const {
    return slot < n_ports ? PortSlot{slot, false} : PortSlot{slot - n_ports, true};
  }
  std::size_t port_index(std::string_view name) const;
  /// Port metric K = diag(I, -I).
  Eigen::VectorXd metric() const;
};

struct AssembleOptions {
  ValidationOptions validation;
  bool check_stability = true;
  // Eigenvalues with Re > tol * ||M||_max are treated as unstable.
  double stability_tolerance = 1e-12;
};

/// Builds M, Gamma and Gamma' for a validated model.
/// Throws ConfigurationError (listing every problem) when validation fails and
/// UnstableModelError when M has an eigenvalue in the right half plane.
DoubledDynamics assemble_dynamics(const TransducerModel& model, const AssembleOptions& options = {});

/// Largest real part among the eigenvalues of M.
double max_real_eigenvalue(const Eigen::MatrixXcd& m);

/// max |M_ph - conj(X M X)| where X swaps annihilation and creation slots.
double particle_hole_residual(const DoubledDynamics& dyn);

}  // namespace qtr
