// qtransduce: sweeps, figures of merit, optimization and checks for linear transducer models.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qtransduce/errors.hpp"
#include "qtransduce/harness.hpp"
#include "qtransduce/model_io.hpp"
#include "qtransduce/units.hpp"

using namespace qtr;

namespace {

enum Exit { ok = 0, failed_validation = 1, bad_config = 2, numerical = 3 };

struct Cli {
  RunConfig config;
  std::optional<std::string> model, builtin;
  std::string format = "csv", h_in = "delta", h_out = "flat", scheme = "one-click";
  double omega_min = 0, omega_max = 0;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == ':') {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  return out;
}

double number(const std::string& s) { return parse_assignment("x=" + s).second; }

InputShape input_shape(const std::string& text) {
  const auto p = split(text);
  InputShape s;
  if (p[0] == "delta" && p.size() == 1) return s;
  if (p.size() != 2) throw ConfigurationError("--h-in takes delta, gaussian:SIGMA_HZ or lorentzian:FWHM_HZ");
  if (p[0] == "gaussian")
    s.shape = InputMode::Shape::gaussian;
  else if (p[0] == "lorentzian")
    s.shape = InputMode::Shape::lorentzian;
  else
    throw ConfigurationError("unknown input shape '" + p[0] + "'");
  s.width_hz = number(p[1]);
  return s;
}

OutputShape output_shape(const std::string& text) {
  const auto p = split(text);
  OutputShape s;
  if (p[0] == "flat" && p.size() <= 2) {
    if (p.size() == 2) s.duration = number(p[1]);
  } else if (p[0] == "exponential" && p.size() == 2) {
    s.shape = OutputMode::Shape::exponential;
    s.duration = number(p[1]);
  } else if (p[0] == "gaussian" && p.size() == 3) {
    s.shape = OutputMode::Shape::gaussian;
    s.duration = number(p[1]);
    s.delay = number(p[2]);
  } else {
    throw ConfigurationError("--h-out takes flat[:T], exponential:TAU or gaussian:SIGMA:DELAY");
  }
  return s;
}

void model_options(CLI::App* sub, Cli& c) {
  auto* m = sub->add_option("--model", c.model, "JSON model file");
  auto* b = sub->add_option("--builtin", c.builtin, "built-in model (electromech, converter)");
  m->excludes(b);
  sub->add_option("--set", c.config.source.overrides, "override key=value (builtin key or model path)");
  sub->add_option("--threads", c.config.threads, "worker threads, 0 = all cores");
}

void sweep_options(CLI::App* sub, Cli& c) {
  sub->add_option("--omega-min", c.omega_min, "sweep start [Hz]");
  sub->add_option("--omega-max", c.omega_max, "sweep end [Hz]");
  sub->add_option("--points", c.config.sweep.points, "grid points");
  sub->add_flag("--log", c.config.sweep.log, "logarithmic spacing");
}

void output_options(CLI::App* sub, Cli& c) {
  sub->add_option("--out", c.config.out, "output file");
  sub->add_option("--format", c.format, "csv or json");
}

void app_options(CLI::App* sub, Cli& c) {
  auto& a = c.config.app;
  sub->add_option("--omega-sig", a.omega_sig_hz, "signal frequency [Hz]");
  sub->add_option("--theta-lo", a.theta_lo, "LO phase [rad], default constructive");
  sub->add_option("--window", a.window, "detection window T [s]");
  sub->add_option("--h-in", c.h_in, "input shape: delta | gaussian:SIGMA_HZ | lorentzian:FWHM_HZ");
  sub->add_option("--h-out", c.h_out, "output shape: flat[:T] | exponential:TAU | gaussian:SIGMA:DELAY");
  sub->add_option("--p-e", a.p_e, "emitter excitation probability");
  sub->add_option("--p-d", a.p_d, "dark-count probability (default r_N T)");
  sub->add_option("--eta", a.eta, "efficiency (default eta+ at the signal frequency)");
  sub->add_option("--scheme", c.scheme, "one-click or two-click");
}

// CLI11 leaves unset numbers at their defaults; fold them into the config
RunConfig finish(Cli& c, CLI::App* sub) {
  RunConfig r = c.config;
  r.source.path = c.model;
  r.source.builtin = c.builtin;
  if (sub->get_option_no_throw("--omega-min") && sub->count("--omega-min")) r.sweep.min_hz = c.omega_min;
  if (sub->get_option_no_throw("--omega-max") && sub->count("--omega-max")) r.sweep.max_hz = c.omega_max;
  r.format = format_from_string(c.format);
  r.app.h_in = input_shape(c.h_in);
  r.app.h_out = output_shape(c.h_out);
  r.app.scheme = scheme_from_string(c.scheme);
  return r;
}

void emit(const RunConfig& r, const report_json& j, bool to_file) {
  const auto text = j.dump(2);
  std::cout << text << '\n';
  if (to_file && r.out) {
    std::ofstream f(*r.out);
    if (!f) throw ConfigurationError("cannot write " + *r.out);
    f << text << '\n';
  }
}

void print_summary(const SpectraSummary& s) {
  std::printf("points              %zu\n", s.points);
  std::printf("failed points       %zu\n", s.failures);
  if (s.peak_omega) {
    std::printf("peak eta+           %.10g at %.12g Hz\n", s.peak_eta, angular_to_hz(*s.peak_omega));
    if (s.n_at_peak)
      std::printf("N+ at peak          %.10g\n", *s.n_at_peak);
    else
      std::printf("N+ at peak          undefined\n");
  }
  std::printf("max sum-rule resid  %.3e\n", s.max_sum_rule_residual);
  std::printf("max symplectic      %.3e\n", s.max_symplectic_residual);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear quantum transducer analysis"};
  app.require_subcommand(1);
  Cli c;

  auto* spectra = app.add_subcommand("spectra", "eta and N on both sidebands over a frequency grid");
  model_options(spectra, c);
  sweep_options(spectra, c);
  output_options(spectra, c);
  spectra->add_option("--omega-sig", c.config.app.omega_sig_hz, "centre of the default window [Hz]");

  std::string app_name;
  auto* fom = app.add_subcommand("fom", "application figure of merit at the signal frequency");
  model_options(fom, c);
  sweep_options(fom, c);
  output_options(fom, c);
  app_options(fom, c);
  fom->add_option("--app", app_name, "heterodyne | qubit | counting | entangle")->required();

  std::string objective = "max-eta";
  std::vector<std::string> vars;
  bool at_signal = false;
  NelderMeadOptions nm;
  auto* optimize = app.add_subcommand("optimize", "bounded simplex search over model parameters");
  model_options(optimize, c);
  sweep_options(optimize, c);
  output_options(optimize, c);
  app_options(optimize, c);
  optimize->add_option("--objective", objective, "max-eta | min-N | max-Fq | max-F1c | max-F2c | min-Ps");
  optimize->add_option("--var", vars, "key:lo:hi[:log]")->required();
  optimize->add_flag("--at-signal", at_signal, "evaluate at the signal frequency instead of the eta peak");
  optimize->add_option("--budget", nm.max_evaluations, "objective evaluations");
  optimize->add_option("--restarts", nm.restarts, "random restarts");
  optimize->add_option("--tolerance", nm.tolerance, "relative objective tolerance");
  optimize->add_option("--seed", nm.seed, "restart seed");

  long long trials = 100000;
  std::uint64_t seed = 1;
  auto* protocol = app.add_subcommand("protocol-sim", "Monte Carlo of the heralded entanglement protocol");
  model_options(protocol, c);
  sweep_options(protocol, c);
  output_options(protocol, c);
  app_options(protocol, c);
  protocol->add_option("--trials", trials, "trials");
  protocol->add_option("--seed", seed, "seed");

  std::size_t random = 0, frequencies = 50;
  std::uint64_t vseed = 1;
  auto* validate = app.add_subcommand("validate", "symplectic, sum-rule, particle-hole and oracle checks");
  model_options(validate, c);
  sweep_options(validate, c);
  output_options(validate, c);
  validate->add_option("--omega-sig", c.config.app.omega_sig_hz, "centre of the default window [Hz]");
  validate->add_option("--random", random, "check this many random stable models instead");
  validate->add_option("--frequencies", frequencies, "probe frequencies per random model");
  validate->add_option("--seed", vseed, "random model seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : bad_config;
  }

  try {
    if (*spectra) {
      auto r = finish(c, spectra);
      const auto run = run_spectra(r);
      print_summary(run.summary);
      if (run.summary.failures) std::fprintf(stderr, "%zu points failed\n", run.summary.failures);
    } else if (*fom) {
      auto r = finish(c, fom);
      emit(r, run_fom(r, app_from_string(app_name)), true);
    } else if (*optimize) {
      auto r = finish(c, optimize);
      OptimizeJob setup;
      setup.objective = objective_from_string(objective);
      setup.at_peak = !at_signal;
      setup.options = nm;
      for (const auto& v : vars) setup.variables.push_back(parse_variable(v));
      auto run = run_optimize(r, setup);
      auto j = optimize_json(run);
      j.erase("trace");
      emit(r, j, false);
    } else if (*protocol) {
      auto r = finish(c, protocol);
      emit(r, protocol_json(run_protocol(r, trials, seed)), true);
    } else if (*validate) {
      auto r = finish(c, validate);
      const auto run = random ? validate_random(random, frequencies, vseed) : run_validate(r);
      emit(r, run.to_json(), true);
      return run.passed() ? ok : failed_validation;
    }
  } catch (const ConfigurationError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return bad_config;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return numerical;
  }
  return ok;
}
