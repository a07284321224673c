#include "qtransduce/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "qtransduce/errors.hpp"
#include "qtransduce/thermal.hpp"

namespace qtr {

ScatteringMatrix scattering_matrix(const DoubledDynamics& dyn, double omega, const ScatteringOptions& options) {
  Eigen::MatrixXcd a = dyn.dyn_matrix;
  a.diagonal().array() += cd(0.0, omega);

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  // rcond() reports 1 for an exactly zero pivot, so the pivot spread is checked too
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double spread = pivots.minCoeff() > 0.0 ? pivots.maxCoeff() / pivots.minCoeff() : INFINITY;
  const double rcond = lu.rcond();
  const double condition = std::max(rcond > 0.0 ? 1.0 / rcond : INFINITY, spread);
  if (!(condition <= options.max_condition)) throw NearSingularError(omega, condition);

  ScatteringMatrix s;
  s.omega = omega;
  s.condition = condition;
  const auto P2 = static_cast<Eigen::Index>(2 * dyn.n_ports);
  s.matrix = Eigen::MatrixXcd::Identity(P2, P2) + dyn.out_coupling * lu.solve(dyn.in_coupling);

  const Eigen::VectorXd k = dyn.metric();
  const Eigen::MatrixXcd kk = k.cast<cd>().asDiagonal();
  s.symplectic_residual = (s.matrix * kk * s.matrix.adjoint() - kk).cwiseAbs().maxCoeff();

  std::vector<Eigen::Index> phys;
  for (std::size_t slot = 0; slot < 2 * dyn.n_ports; ++slot) {
    const auto info = dyn.slot_info(slot);
    if (dyn.port_band_center[info.port] + (info.creation ? -omega : omega) > 0.0)
      phys.push_back(static_cast<Eigen::Index>(slot));
  }
  const auto np = static_cast<Eigen::Index>(phys.size());
  if (np == P2) {
    s.physical_symplectic_residual = s.symplectic_residual;
  } else if (np > 0) {
    Eigen::MatrixXcd sp(np, np);
    Eigen::VectorXcd kp(np);
    for (Eigen::Index i = 0; i < np; ++i) {
      kp(i) = k(phys[i]);
      for (Eigen::Index j = 0; j < np; ++j) sp(i, j) = s.matrix(phys[i], phys[j]);
    }
    const Eigen::MatrixXcd kd = kp.asDiagonal();
    s.physical_symplectic_residual = (sp * kd * sp.adjoint() - kd).cwiseAbs().maxCoeff();
  }
  return s;
}

double particle_hole_residual(const DoubledDynamics& dyn, double omega) {
  const auto plus = scattering_matrix(dyn, omega).matrix;
  const auto minus = scattering_matrix(dyn, -omega).matrix;
  const auto P = static_cast<Eigen::Index>(dyn.n_ports);
  Eigen::MatrixXcd swapped(2 * P, 2 * P);
  swapped.block(0, 0, P, P) = minus.block(P, P, P, P);
  swapped.block(P, P, P, P) = minus.block(0, 0, P, P);
  swapped.block(0, P, P, P) = minus.block(P, 0, P, P);
  swapped.block(P, 0, P, P) = minus.block(0, P, P, P);
  return (plus - swapped.conjugate()).cwiseAbs().maxCoeff();
}

TransferRow transfer_row(const DoubledDynamics& dyn, const ScatteringMatrix& s,
                         std::optional<std::size_t> exit_port) {
  TransferRow row;
  row.omega = s.omega;
  row.sideband = s.omega >= 0.0 ? Sideband::upper : Sideband::lower;
  row.exit_port = exit_port.value_or(dyn.exit_port);
  row.signal_port = dyn.signal_port;
  if (row.exit_port >= dyn.n_ports) throw ConfigurationError("exit port index out of range");

  const double exit_lab = s.omega + dyn.port_band_center[row.exit_port];
  if (!(exit_lab > 0.0))
    throw DomainError("exit port '" + dyn.ports[row.exit_port].name + "' has no field at lab frequency " +
                      std::to_string(exit_lab) + " rad/s");

  const auto P = dyn.n_ports;
  const auto r = static_cast<Eigen::Index>(row.exit_port);
  for (std::size_t m = 0; m < P; ++m) {
    row.port_names.push_back(dyn.ports[m].name);
    row.temperatures.push_back(dyn.ports[m].temperature);
    row.u.push_back(s.matrix(r, static_cast<Eigen::Index>(m)));
    row.v.push_back(s.matrix(r, static_cast<Eigen::Index>(m + P)));
    row.u_lab_frequency.push_back(s.omega + dyn.port_band_center[m]);
    row.v_lab_frequency.push_back(-s.omega + dyn.port_band_center[m]);
  }
  return row;
}

TransferRow transfer_row(const DoubledDynamics& dyn, double omega, Sideband sideband,
                         const ScatteringOptions& options) {
  return transfer_row(dyn, scattering_matrix(dyn, sign(sideband) * omega, options));
}

double eta(const TransferRow& row) { return std::norm(row.signal_coefficient()); }

namespace {

bool is_signal_column(const TransferRow& row, std::size_t m, bool creation) {
  if (m != row.signal_port) return false;
  return creation == (row.sideband == Sideband::lower);
}

}  // namespace

double noise_flux(const TransferRow& row) {
  double flux = 0.0;
  for (std::size_t m = 0; m < row.u.size(); ++m) {
    if (row.u_physical(m) && !is_signal_column(row, m, false))
      flux += std::norm(row.u[m]) * bose_occupancy(row.u_lab_frequency[m], row.temperatures[m]);
    if (row.v_physical(m) && !is_signal_column(row, m, true))
      flux += std::norm(row.v[m]) * (bose_occupancy(row.v_lab_frequency[m], row.temperatures[m]) + 1.0);
  }
  return flux;
}

double added_noise(const TransferRow& row) {
  const double e = eta(row);
  if (!(e > 0.0)) throw UndefinedNoiseError("added noise undefined at omega = " + std::to_string(row.omega) +
                                            " rad/s: signal efficiency is zero");
  return noise_flux(row) / e;
}

namespace {

// sum |U|^2 - sum |V|^2 over physical columns, optionally skipping the signal column
double row_norm(const TransferRow& row, bool skip_signal) {
  double acc = 0.0;
  for (std::size_t m = 0; m < row.u.size(); ++m) {
    if (row.u_physical(m) && !(skip_signal && is_signal_column(row, m, false))) acc += std::norm(row.u[m]);
    if (row.v_physical(m) && !(skip_signal && is_signal_column(row, m, true))) acc -= std::norm(row.v[m]);
  }
  return acc;
}

}  // namespace

double sum_rule_residual(const TransferRow& row) { return std::abs(1.0 - row_norm(row, false)); }

double noise_commutator_residual(const TransferRow& row) {
  const double e = eta(row);
  const double expected = row.sideband == Sideband::upper ? 1.0 - e : 1.0 + e;
  return std::abs(row_norm(row, true) - expected);
}

}  // namespace qtr
