#pragma once

// Run plumbing behind the command-line tool: sweeps, application figures of
// merit, parameter optimization, invariant checks and protocol simulation.
// Frequencies in a RunConfig are in Hz; everything handed to the library is
// converted to rad/s here.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtransduce/builtins.hpp"
#include "qtransduce/counting.hpp"
#include "qtransduce/entanglement.hpp"
#include "qtransduce/optimizer.hpp"
#include "qtransduce/spectrum.hpp"

namespace qtr {

using report_json = nlohmann::ordered_json;

struct SweepRange {
  std::optional<double> min_hz;  // default: signal frequency -+ the builtin's span, clipped > 0
  std::optional<double> max_hz;
  std::size_t points = 1001;
  bool log = false;
};

enum class Format { csv, json };
Format format_from_string(const std::string& s);

/// Shape of |h_in|^2 around the signal frequency. Width in Hz.
struct InputShape {
  InputMode::Shape shape = InputMode::Shape::delta;
  double width_hz = 0.0;
};

/// h_out over the detection window. Times in s.
struct OutputShape {
  OutputMode::Shape shape = OutputMode::Shape::flat;
  double duration = 0.0;  // 0 = the whole window
  double delay = 0.0;
};

struct AppParams {
  std::optional<double> omega_sig_hz;  // default: the builtin's suggestion
  std::optional<double> theta_lo;      // default: constructive phase
  double window = 1e-6;                // detection window T [s]
  InputShape h_in;
  OutputShape h_out;
  double p_e = 0.01;
  Scheme scheme = Scheme::one_click;
  std::optional<double> p_d;  // override the dark-count probability from r_N T
  std::optional<double> eta;  // override eta+ from the model
};

struct RunConfig {
  ModelSource source;
  SweepRange sweep;
  AppParams app;
  std::optional<std::string> out;
  Format format = Format::csv;
  unsigned threads = 0;
};

/// Loads and validates. Throws ConfigurationError listing every validation error.
LoadedModel load_checked(const ModelSource& source);

/// Signal frequency [rad/s]. Throws ConfigurationError when neither the config nor the model gives one.
double signal_frequency(const RunConfig& config, const LoadedModel& model);

/// Sweep bounds [rad/s]. File models without a suggestion need explicit bounds.
std::pair<double, double> sweep_bounds(const RunConfig& config, const LoadedModel& model);

/// Throws ConfigurationError for points = 0, non-positive or reversed bounds.
std::vector<double> sweep_grid(const RunConfig& config, const LoadedModel& model);

// ---- spectra

struct SpectraSummary {
  std::size_t points = 0;
  std::size_t failures = 0;
  std::optional<double> peak_omega;  // upper sideband
  double peak_eta = 0.0;
  std::optional<double> n_at_peak;
  double max_sum_rule_residual = 0.0;
  double max_symplectic_residual = 0.0;
};

struct SpectraRun {
  SpectrumGrid grid;
  SpectraSummary summary;
};

SpectraRun run_spectra(const RunConfig& config);
SpectraSummary summarize(const SpectrumGrid& grid);

inline constexpr const char* kSpectraColumns = "omega_hz,eta_up,eta_dn,N_up,N_dn,sumrule_resid,symplectic_resid";

/// Failed points are left out of the table and listed by errors_json.
void write_spectra_csv(std::ostream& os, const SpectrumGrid& grid);
report_json spectra_json(const SpectrumGrid& grid);
report_json errors_json(const SpectrumGrid& grid);
report_json summary_json(const SpectraSummary& s);

/// Writes the table to config.out and the failures next to it as <stem>.errors.json.
void export_spectra(const RunConfig& config, const SpectrumGrid& grid);

// ---- figures of merit

enum class App { heterodyne, qubit, counting, entangle };
App app_from_string(const std::string& s);

report_json run_fom(const RunConfig& config, App app);

// ---- optimization

enum class Objective { max_eta, min_n, max_fq, max_f1c, max_f2c, min_ps };
Objective objective_from_string(const std::string& s);
std::string to_string(Objective o);

/// A builtin override key (e.g. gamma_wg_hz) or a model path (e.g. ports.fiber.rate_hz).
struct Variable {
  std::string key;
  Bound bound;
};

/// Parses "key:lo:hi" or "key:lo:hi:log".
Variable parse_variable(const std::string& text);

struct OptimizeJob {
  std::vector<Variable> variables;
  Objective objective = Objective::max_eta;
  bool at_peak = true;  // operate at the eta peak in the sweep window, else at the signal frequency
  NelderMeadOptions options;
};

struct OptimizeRun {
  OptimizeJob setup;
  OptimizeResult result;
  double best_objective = 0.0;  // in the objective's own sign (eta, not -eta)
};

/// Objective value at one parameter point, in its own sign. Throws qtr::Error where undefined.
double objective_value(const RunConfig& config, const OptimizeJob& setup, const std::vector<double>& x);

/// Throws ConfigurationError for an empty or malformed setup, NoFeasiblePointError.
OptimizeRun run_optimize(const RunConfig& config, const OptimizeJob& setup);
void write_trace_csv(std::ostream& os, const OptimizeRun& run);
report_json optimize_json(const OptimizeRun& run);

// ---- validation

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct ValidationRun {
  std::vector<Check> checks;
  bool passed() const;
  report_json to_json() const;
};

/// Symplectic (physical block), sum-rule, commutator and particle-hole checks on a frequency grid.
/// Lab-quadrature damping is only symplectic at the bare lab resonance: when exact_at is given,
/// the three unitarity checks must hold there and the grid maximum is reported as
/// "quasi_unitarity_defect" without failing.
ValidationRun check_dynamics(const DoubledDynamics& dyn, const std::vector<double>& omegas, double tolerance = 1e-9,
                             const std::vector<double>& exact_at = {});

/// Bare resonances [rad/s, sideband frame] of the lab-quadrature modes.
std::vector<double> lab_resonances(const TransducerModel& model);

/// Loads the model, runs check_dynamics on the sweep grid, and for the
/// electromech builtin compares the engine with the closed form.
ValidationRun run_validate(const RunConfig& config);

/// check_dynamics over random stable models at probe frequencies up to their characteristic rate.
ValidationRun validate_random(std::size_t models, std::size_t frequencies, std::uint64_t seed, double tolerance = 1e-9);

// ---- protocol simulation

struct ProtocolRun {
  ProtocolParams setup;
  ProtocolResult montecarlo;
  ProtocolResult enumerated;
};

/// eta and P_d come from the model at the signal frequency unless given in config.app.
ProtocolParams protocol_params(const RunConfig& config);
ProtocolRun run_protocol(const RunConfig& config, long long trials, std::uint64_t seed);
report_json protocol_json(const ProtocolRun& run);

}  // namespace qtr
