#pragma once

// Named models available without a file.
//
// electromech: the driven LC circuit and mechanical resonator of
//   electromech.hpp. Overrides: omega_m_hz, omega_lc_hz, drive_hz, g_hz,
//   gamma_tx_hz, gamma_wg_hz, gamma_m_hz, T_tx, T_wg, T_m, T (all three).
//   Unless drive_hz is given the drive follows omega_lc - omega_m.
// converter: microwave-to-optical beam-splitter converter, rotating modes
//   only, so both sidebands of the exit are defined.
//
// Any key containing a dot is a model parameter path (see model_io.hpp),
// applied after the model is built.

#include <optional>
#include <string>
#include <vector>

#include "qtransduce/electromech.hpp"
#include "qtransduce/model.hpp"

namespace qtr {

struct ModelSource {
  std::optional<std::string> path;     // JSON model file
  std::optional<std::string> builtin;  // or a builtin name
  std::vector<std::string> overrides;  // key=value
};

struct LoadedModel {
  TransducerModel model;
  std::optional<electromech::Params> electromech;  // set for the electromech builtin
  std::optional<double> omega_sig;                 // suggested signal frequency [rad/s]
  std::optional<double> span;                      // suggested sweep half-width [rad/s]
};

std::vector<std::string> builtin_names();

/// Throws ConfigurationError for unknown names or keys, ParseError for bad files.
/// The model is not validated here.
LoadedModel load_model(const ModelSource& source);

}  // namespace qtr
