#pragma once

// Random stable networks of rotating modes for property checks.
// Every mode sits in one band; beam-splitter couplings are undriven and the
// squeezing / quadrature couplings share a pump at twice the band centre.

#include <cstdint>
#include <random>
#include <vector>

#include "qtransduce/model.hpp"
#include "qtransduce/units.hpp"

namespace qtr {

struct RandomModelOptions {
  int min_modes = 2;
  int max_modes = 5;
  double rate_lo = 1e3;  // rad/s, log-uniform for couplings and port rates
  double rate_hi = 1e9;
  double band_center = kTwoPi * 5e9;
  double max_temperature = 0.5;  // K, uniform per port
  double stability_margin = 1e-2;  // require max Re(eig) < -margin * rate_lo
  int max_attempts = 10000;
};

/// Draws until assemble_dynamics accepts the model. Throws ConfigurationError
/// when max_attempts draws are all unstable.
TransducerModel random_model(std::mt19937_64& rng, const RandomModelOptions& options = {});

std::vector<TransducerModel> random_models(std::size_t count, std::uint64_t seed,
                                           const RandomModelOptions& options = {});

/// Largest detuning or linewidth scale in the model [rad/s]; a sensible sweep span.
double characteristic_rate(const TransducerModel& model);

}  // namespace qtr
