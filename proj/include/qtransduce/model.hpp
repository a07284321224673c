#pragma once

// Transducer description as a network of frequency bands, internal modes,
// drives, couplings and ports. All frequencies and rates are angular [rad/s].

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qtr {

/// Reference frame an internal mode (or a port) is written in.
///
/// `rotating` modes are slowly-varying operators about their band centre.
/// `lab_quadrature` modes live in a band of centre 0 and are damped and
/// driven through their position quadrature, as the mechanical element of
/// a driven electromechanical circuit.
enum class Frame { rotating, lab_quadrature };

enum class CouplingForm { beam_splitter, two_mode_squeezing, quadrature_position };

/// `signal_exit` marks a loopback port that is both the signal input and the exit.
enum class PortRole { signal, exit, loss, signal_exit };

struct Band {
  std::string name;
  double center_frequency = 0.0;
  bool operator==(const Band&) const = default;
};

struct Drive {
  std::string name;
  double frequency = 0.0;
  bool operator==(const Drive&) const = default;
};

struct InternalMode {
  std::string name;
  std::string band;
  Frame frame = Frame::rotating;
  double resonance_frequency = 0.0;
  bool operator==(const InternalMode&) const = default;
};

struct Coupling {
  std::string mode_a;
  std::string mode_b;
  double rate = 0.0;
  std::optional<std::string> drive;
  int order = 0;
  CouplingForm form = CouplingForm::beam_splitter;
  bool operator==(const Coupling&) const = default;
};

struct Port {
  std::string name;
  std::string mode;
  double rate = 0.0;
  double temperature = 0.0;  // K
  PortRole role = PortRole::loss;
  Frame flavor = Frame::rotating;
  bool operator==(const Port&) const = default;

  bool is_signal() const { return role == PortRole::signal || role == PortRole::signal_exit; }
  bool is_exit() const { return role == PortRole::exit || role == PortRole::signal_exit; }
};

struct TransducerModel {
  std::vector<Band> bands;
  std::vector<InternalMode> modes;
  std::vector<Drive> drives;
  std::vector<Coupling> couplings;
  std::vector<Port> ports;
  bool operator==(const TransducerModel&) const = default;

  const Band* find_band(std::string_view name) const;
  const Drive* find_drive(std::string_view name) const;
  std::optional<std::size_t> mode_index(std::string_view name) const;
  /// Centre frequency of the band the named mode sits in.
  double mode_band_center(std::string_view mode) const;
  /// Sum of the rates of all ports attached to the named mode.
  double mode_total_rate(std::string_view mode) const;
};

struct ValidationOptions {
  double separation_factor = 10.0;
  double drive_match_tolerance = 1e-9;  // relative to the drive frequency
};

struct ValidationIssue {
  enum class Severity { warning, error };
  Severity severity = Severity::error;
  std::string path;  // e.g. "couplings[0].drive"
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool has_errors() const;
  bool has_warnings() const;
  bool empty() const { return issues.empty(); }
  std::string to_string() const;
};

/// Checks every model invariant and returns the list of violations.
/// Stability is not checked here; see assemble_dynamics.
ValidationReport validate_model(const TransducerModel& model, const ValidationOptions& options = {});

/// Gap-to-linewidth ratio of one drive-bridged coupling.
struct RwaRatio {
  std::size_t coupling = 0;
  std::string mode_a;
  std::string mode_b;
  double band_gap = 0.0;
  double linewidth = 0.0;
  std::optional<double> ratio;  // empty for DC and same-band couplings
};

std::vector<RwaRatio> rwa_report(const TransducerModel& model);

std::string_view to_string(Frame f);
std::string_view to_string(CouplingForm f);
std::string_view to_string(PortRole r);
Frame frame_from_string(std::string_view s);
CouplingForm coupling_form_from_string(std::string_view s);
PortRole port_role_from_string(std::string_view s);

}  // namespace qtr
