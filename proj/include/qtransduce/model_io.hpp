#pragma once

// JSON model files. Frequencies and rates are written in Hz and converted to
// angular units on load; temperatures in K.
//
//   { "bands":     [{"name": "opt", "center_hz": 1.9e14}],
//     "modes":     [{"name": "a", "band": "opt", "frame": "rotating", "resonance_hz": 1.9e14}],
//     "drives":    [{"name": "pump", "frequency_hz": 1.9e14}],
//     "couplings": [{"a": "a", "b": "m", "rate_hz": 1e4, "drive": "pump", "order": 1, "form": "beam-splitter"}],
//     "ports":     [{"name": "in", "mode": "a", "rate_hz": 1e6, "temperature_k": 0, "role": "signal",
//                    "flavor": "rotating"}] }

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtransduce/model.hpp"

namespace qtr {

/// Numbers are held in long double so a Hz value can carry enough digits to
/// reproduce its angular double exactly on reload.
using model_json = nlohmann::basic_json<std::map, std::vector, std::string, bool, std::int64_t, std::uint64_t, long double>;

model_json model_to_json(const TransducerModel& model);
/// Pretty-printed text; numbers that are not exact doubles get 21 digits.
std::string dump_model_json(const model_json& doc, int indent = 2);
std::string model_to_text(const TransducerModel& model);

/// Structural decoding only; run validate_model for the physics checks.
/// Throws ConfigurationError naming the offending field, e.g. "modes[1].band".
TransducerModel model_from_json(const model_json& doc);

/// Throws ParseError with line and column for malformed text, including empty input.
TransducerModel parse_model(const std::string& text);
TransducerModel load_model_file(const std::string& path);
void save_model_file(const TransducerModel& model, const std::string& path);

/// File conversions. file_hz(w) reloads to exactly w through file_angular.
long double file_hz(double w);
double file_angular(long double hz);

/// Scalar parameters addressable by path, in file units (Hz or K):
///   bands.<name>.center_hz, modes.<name>.resonance_hz, drives.<name>.frequency_hz,
///   couplings.<index>.rate_hz, ports.<name>.rate_hz, ports.<name>.temperature_k
std::vector<std::string> parameter_paths(const TransducerModel& model);
double get_parameter(const TransducerModel& model, const std::string& path);
/// Throws ConfigurationError for an unknown path.
void set_parameter(TransducerModel& model, const std::string& path, double value);

/// Applies "path=value" assignments in order.
void apply_overrides(TransducerModel& model, const std::vector<std::string>& assignments);

/// Splits "key=value" and parses the value. Throws ConfigurationError.
std::pair<std::string, double> parse_assignment(const std::string& assignment);

}  // namespace qtr
