#include "qtransduce/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "qtransduce/errors.hpp"

namespace qtr {

namespace {

constexpr cd kI{0.0, 1.0};

Eigen::MatrixXcd swap_blocks(const Eigen::MatrixXcd& a, std::size_t n_rows, std::size_t n_cols) {
  // X_r a X_c with X exchanging the two halves of each index
  Eigen::MatrixXcd out(a.rows(), a.cols());
  const auto R = static_cast<Eigen::Index>(n_rows);
  const auto C = static_cast<Eigen::Index>(n_cols);
  out.block(0, 0, R, C) = a.block(R, C, R, C);
  out.block(R, C, R, C) = a.block(0, 0, R, C);
  out.block(0, C, R, C) = a.block(R, 0, R, C);
  out.block(R, 0, R, C) = a.block(0, C, R, C);
  return out;
}

}  // namespace

std::size_t DoubledDynamics::port_index(std::string_view name) const {
  for (std::size_t i = 0; i < ports.size(); ++i)
    if (ports[i].name == name) return i;
  throw ConfigurationError("unknown port '" + std::string(name) + "'");
}

Eigen::VectorXd DoubledDynamics::metric() const {
  Eigen::VectorXd k(2 * n_ports);
  k.head(static_cast<Eigen::Index>(n_ports)).setOnes();
  k.tail(static_cast<Eigen::Index>(n_ports)).setConstant(-1.0);
  return k;
}

double max_real_eigenvalue(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  if (es.info() != Eigen::Success) throw UnstableModelError("eigenvalue solver failed on dynamical matrix");
  return es.eigenvalues().real().maxCoeff();
}

double particle_hole_residual(const DoubledDynamics& dyn) {
  const auto n = dyn.n_modes;
  const auto p = dyn.n_ports;
  double r = (dyn.dyn_matrix - swap_blocks(dyn.dyn_matrix, n, n).conjugate()).cwiseAbs().maxCoeff();
  r = std::max(r, (dyn.in_coupling - swap_blocks(dyn.in_coupling, n, p).conjugate()).cwiseAbs().maxCoeff());
  r = std::max(r, (dyn.out_coupling - swap_blocks(dyn.out_coupling, p, n).conjugate()).cwiseAbs().maxCoeff());
  return r;
}

DoubledDynamics assemble_dynamics(const TransducerModel& model, const AssembleOptions& options) {
  const ValidationReport report = validate_model(model, options.validation);
  if (report.has_errors()) throw ConfigurationError("invalid model:\n" + report.to_string());

  DoubledDynamics d;
  const std::size_t n = model.modes.size();
  const std::size_t P = model.ports.size();
  d.n_modes = n;
  d.n_ports = P;
  d.dyn_matrix = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  d.in_coupling = Eigen::MatrixXcd::Zero(2 * n, 2 * P);
  d.out_coupling = Eigen::MatrixXcd::Zero(2 * P, 2 * n);
  auto& M = d.dyn_matrix;

  for (std::size_t i = 0; i < n; ++i) {
    const auto& mode = model.modes[i];
    d.mode_names.push_back(mode.name);
    const double delta = mode.resonance_frequency - model.mode_band_center(mode.name);
    M(i, i) += -kI * delta;
    M(i + n, i + n) += kI * delta;
  }

  for (const auto& c : model.couplings) {
    const std::size_t a = *model.mode_index(c.mode_a);
    const std::size_t b = *model.mode_index(c.mode_b);
    const double g = c.rate;
    switch (c.form) {
      case CouplingForm::beam_splitter:
        M(a, b) += -kI * g;
        M(b, a) += -kI * g;
        M(a + n, b + n) += kI * g;
        M(b + n, a + n) += kI * g;
        break;
      case CouplingForm::two_mode_squeezing:
        M(a, b + n) += -kI * g;
        M(b, a + n) += -kI * g;
        M(a + n, b) += kI * g;
        M(b + n, a) += kI * g;
        break;
      case CouplingForm::quadrature_position:
        // (g/2)(a + a^dag)(b + b^dag)
        for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
          M(x, y) += -kI * g / 2.0;
          M(x, y + n) += -kI * g / 2.0;
          M(x + n, y) += kI * g / 2.0;
          M(x + n, y + n) += kI * g / 2.0;
        }
        break;
    }
  }

  int signals = 0;
  for (std::size_t p = 0; p < P; ++p) {
    const auto& port = model.ports[p];
    const std::size_t m = *model.mode_index(port.mode);
    const double gamma = port.rate;
    const double s = std::sqrt(gamma);
    d.ports.push_back(port);
    d.port_band_center.push_back(model.mode_band_center(port.mode));
    if (port.is_signal()) d.signal_port = p, ++signals;
    if (port.is_exit()) d.exit_port = p;

    auto& G = d.in_coupling;
    auto& Go = d.out_coupling;
    if (port.flavor == Frame::rotating) {
      M(m, m) -= gamma / 2.0;
      M(m + n, m + n) -= gamma / 2.0;
      G(m, p) = kI * s;
      G(m + n, p + P) = -kI * s;
      Go(p, m) = -kI * s;
      Go(p + P, m + n) = kI * s;
    } else {
      // damping of the momentum-like combination a - a^dag
      M(m, m) -= gamma / 2.0;
      M(m, m + n) += gamma / 2.0;
      M(m + n, m + n) -= gamma / 2.0;
      M(m + n, m) += gamma / 2.0;
      G(m, p) = G(m, p + P) = kI * s;
      G(m + n, p) = G(m + n, p + P) = -kI * s;
      Go(p, m) = Go(p, m + n) = -kI * s;
      Go(p + P, m) = Go(p + P, m + n) = kI * s;
    }
  }

  if (options.check_stability) {
    d.max_real_eigenvalue = max_real_eigenvalue(M);
    const double scale = M.cwiseAbs().maxCoeff();
    if (d.max_real_eigenvalue > options.stability_tolerance * scale)
      throw UnstableModelError("dynamical matrix has an eigenvalue with real part " +
                               std::to_string(d.max_real_eigenvalue) + " rad/s");
  }
  return d;
}

}  // namespace qtr
