#include "qtransduce/random_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtransduce/dynamics.hpp"
#include "qtransduce/errors.hpp"

namespace qtr {

namespace {

TransducerModel draw(std::mt19937_64& rng, const RandomModelOptions& o) {
  std::uniform_int_distribution<int> n_dist(o.min_modes, o.max_modes);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_rate = [&] { return o.rate_lo * std::pow(o.rate_hi / o.rate_lo, unit(rng)); };

  const int n = n_dist(rng);
  TransducerModel m;
  m.bands = {{"band", o.band_center}};
  m.drives = {{"pump", 2.0 * o.band_center}};
  for (int i = 0; i < n; ++i) {
    const double det = (unit(rng) < 0.5 ? -1.0 : 1.0) * log_rate() * unit(rng);
    m.modes.push_back({"m" + std::to_string(i), "band", Frame::rotating, o.band_center + det});
  }

  // spanning tree, then a few extra edges
  auto couple = [&](int a, int b) {
    const double r = unit(rng);
    Coupling c;
    c.mode_a = m.modes[a].name;
    c.mode_b = m.modes[b].name;
    c.rate = log_rate();
    if (r < 0.6) {
      c.form = CouplingForm::beam_splitter;
    } else {
      c.form = r < 0.85 ? CouplingForm::two_mode_squeezing : CouplingForm::quadrature_position;
      c.drive = "pump";
      c.order = 1;
    }
    m.couplings.push_back(c);
  };
  for (int i = 1; i < n; ++i) couple(std::uniform_int_distribution<int>(0, i - 1)(rng), i);
  const int extra = std::uniform_int_distribution<int>(0, n - 1)(rng);
  for (int k = 0; k < extra; ++k) {
    int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
    int b = std::uniform_int_distribution<int>(0, n - 1)(rng);
    if (a != b) couple(std::min(a, b), std::max(a, b));
  }

  // every mode is damped; signal on m0, exit on the last mode
  for (int i = 0; i < n; ++i) {
    Port p;
    p.mode = m.modes[i].name;
    p.rate = log_rate();
    p.temperature = o.max_temperature * unit(rng);
    p.flavor = Frame::rotating;
    if (i == 0) {
      p.name = "signal";
      p.role = PortRole::signal;
    } else if (i == n - 1) {
      p.name = "exit";
      p.role = PortRole::exit;
    } else {
      p.name = "loss" + std::to_string(i);
      p.role = PortRole::loss;
    }
    m.ports.push_back(p);
    if (unit(rng) < 0.3) {
      p.name = "extra" + std::to_string(i);
      p.role = PortRole::loss;
      p.rate = log_rate();
      p.temperature = o.max_temperature * unit(rng);
      m.ports.push_back(p);
    }
  }
  return m;
}

}  // namespace

TransducerModel random_model(std::mt19937_64& rng, const RandomModelOptions& o) {
  if (o.min_modes < 2 || o.max_modes < o.min_modes || !(o.rate_lo > 0.0) || !(o.rate_hi >= o.rate_lo))
    throw ConfigurationError("bad random model options");
  for (int attempt = 0; attempt < o.max_attempts; ++attempt) {
    auto m = draw(rng, o);
    try {
      const auto dyn = assemble_dynamics(m);
      if (dyn.max_real_eigenvalue < -o.stability_margin * o.rate_lo) return m;
    } catch (const UnstableModelError&) {
    }
  }
  throw ConfigurationError("no stable random model in " + std::to_string(o.max_attempts) + " draws");
}

std::vector<TransducerModel> random_models(std::size_t count, std::uint64_t seed, const RandomModelOptions& o) {
  std::mt19937_64 rng(seed);
  std::vector<TransducerModel> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_model(rng, o));
  return out;
}

double characteristic_rate(const TransducerModel& model) {
  double r = 0.0;
  for (const auto& m : model.modes) r = std::max(r, std::abs(m.resonance_frequency - model.mode_band_center(m.name)));
  for (const auto& c : model.couplings) r = std::max(r, c.rate);
  for (const auto& p : model.ports) r = std::max(r, p.rate);
  return r;
}

}  // namespace qtr
