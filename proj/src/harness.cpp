#include "qtransduce/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "qtransduce/dynamics.hpp"
#include "qtransduce/electromech.hpp"
#include "qtransduce/errors.hpp"
#include "qtransduce/heterodyne.hpp"
#include "qtransduce/model_io.hpp"
#include "qtransduce/qubit.hpp"
#include "qtransduce/random_models.hpp"
#include "qtransduce/units.hpp"

namespace qtr {

namespace {

std::string num(double x, int digits = 12) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string num(const std::optional<double>& x) { return x ? num(*x) : std::string(); }

report_json opt_json(const std::optional<double>& x) { return x ? report_json(*x) : report_json(nullptr); }

std::optional<double> opt_max(std::optional<double> a, std::optional<double> b) {
  if (!a) return b;
  if (!b) return a;
  return std::max(*a, *b);
}

}  // namespace

Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ConfigurationError("unknown format '" + s + "' (csv or json)");
}

LoadedModel load_checked(const ModelSource& source) {
  auto lm = load_model(source);
  const auto report = validate_model(lm.model);
  if (report.has_errors()) throw ConfigurationError("invalid model:\n" + report.to_string());
  return lm;
}

double signal_frequency(const RunConfig& config, const LoadedModel& model) {
  if (config.app.omega_sig_hz) {
    if (!(*config.app.omega_sig_hz > 0.0)) throw ConfigurationError("signal frequency must be positive");
    return hz_to_angular(*config.app.omega_sig_hz);
  }
  if (model.omega_sig) return *model.omega_sig;
  throw ConfigurationError("no signal frequency: pass --omega-sig for a model file");
}

std::pair<double, double> sweep_bounds(const RunConfig& config, const LoadedModel& model) {
  const auto& s = config.sweep;
  double lo = 0.0, hi = 0.0;
  if (s.min_hz && s.max_hz) {
    lo = hz_to_angular(*s.min_hz);
    hi = hz_to_angular(*s.max_hz);
  } else {
    if (!model.span) throw ConfigurationError("no default sweep window: pass --omega-min and --omega-max");
    const double c = signal_frequency(config, model);
    lo = s.min_hz ? hz_to_angular(*s.min_hz) : std::max(c - *model.span, 1e-3 * c);
    hi = s.max_hz ? hz_to_angular(*s.max_hz) : c + *model.span;
  }
  if (!(lo > 0.0) || !std::isfinite(hi)) throw ConfigurationError("sweep bounds must be finite and positive");
  if (!(hi > lo) && !(s.points == 1 && hi == lo))
    throw ConfigurationError("sweep needs omega-max > omega-min");
  return {lo, hi};
}

std::vector<double> sweep_grid(const RunConfig& config, const LoadedModel& model) {
  if (config.sweep.points < 1) throw ConfigurationError("sweep needs at least one point");
  const auto [lo, hi] = sweep_bounds(config, model);
  return config.sweep.log ? log_grid(lo, hi, config.sweep.points) : linear_grid(lo, hi, config.sweep.points);
}

// ---- spectra

SpectraSummary summarize(const SpectrumGrid& grid) {
  SpectraSummary s;
  s.points = grid.records.size();
  s.failures = grid.failures();
  for (const auto& r : grid.records) {
    if (!r.ok()) continue;
    if (r.upper && (!s.peak_omega || r.upper->eta > s.peak_eta)) {
      s.peak_omega = r.omega;
      s.peak_eta = r.upper->eta;
      s.n_at_peak = r.upper->added_noise;
    }
    for (const auto& sb : {r.upper, r.lower})
      if (sb) s.max_sum_rule_residual = std::max({s.max_sum_rule_residual, sb->sum_rule_residual});
    if (r.symplectic_residual) s.max_symplectic_residual = std::max(s.max_symplectic_residual, *r.symplectic_residual);
  }
  return s;
}

SpectraRun run_spectra(const RunConfig& config) {
  const auto lm = load_checked(config.source);
  const auto dyn = assemble_dynamics(lm.model);
  SweepOptions opts;
  opts.threads = config.threads;
  SpectraRun run;
  run.grid = spectrum_sweep(dyn, sweep_grid(config, lm), opts);
  run.summary = summarize(run.grid);
  if (config.out) export_spectra(config, run.grid);
  return run;
}

namespace {

struct Row {
  double omega_hz;
  std::optional<double> eta_up, eta_dn, n_up, n_dn, sum_rule, symplectic;
};

Row table_row(const SpectrumRecord& r) {
  Row row{angular_to_hz(r.omega), {}, {}, {}, {}, {}, r.symplectic_residual};
  if (r.upper) {
    row.eta_up = r.upper->eta;
    row.n_up = r.upper->added_noise;
    row.sum_rule = r.upper->sum_rule_residual;
  }
  if (r.lower) {
    row.eta_dn = r.lower->eta;
    row.n_dn = r.lower->added_noise;
    row.sum_rule = opt_max(row.sum_rule, r.lower->sum_rule_residual);
  }
  return row;
}

}  // namespace

void write_spectra_csv(std::ostream& os, const SpectrumGrid& grid) {
  os << kSpectraColumns << '\n';
  for (const auto& r : grid.records) {
    if (!r.ok()) continue;
    const auto row = table_row(r);
    os << num(row.omega_hz, 17) << ',' << num(row.eta_up) << ',' << num(row.eta_dn) << ',' << num(row.n_up) << ','
       << num(row.n_dn) << ',' << num(row.sum_rule) << ',' << num(row.symplectic) << '\n';
  }
}

report_json spectra_json(const SpectrumGrid& grid) {
  auto rows = report_json::array();
  for (const auto& r : grid.records) {
    if (!r.ok()) continue;
    const auto row = table_row(r);
    rows.push_back({{"omega_hz", row.omega_hz},
                    {"eta_up", opt_json(row.eta_up)},
                    {"eta_dn", opt_json(row.eta_dn)},
                    {"N_up", opt_json(row.n_up)},
                    {"N_dn", opt_json(row.n_dn)},
                    {"sumrule_resid", opt_json(row.sum_rule)},
                    {"symplectic_resid", opt_json(row.symplectic)}});
  }
  return rows;
}

report_json errors_json(const SpectrumGrid& grid) {
  auto out = report_json::array();
  for (const auto& r : grid.records)
    if (!r.ok()) out.push_back({{"omega_hz", angular_to_hz(r.omega)}, {"errors", r.errors}});
  return out;
}

report_json summary_json(const SpectraSummary& s) {
  return {{"points", s.points},
          {"failures", s.failures},
          {"peak_omega_hz", s.peak_omega ? report_json(angular_to_hz(*s.peak_omega)) : report_json(nullptr)},
          {"peak_eta", s.peak_eta},
          {"N_at_peak", opt_json(s.n_at_peak)},
          {"max_sumrule_resid", s.max_sum_rule_residual},
          {"max_symplectic_resid", s.max_symplectic_residual}};
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw ConfigurationError("cannot write " + p.string());
  return f;
}

}  // namespace

void export_spectra(const RunConfig& config, const SpectrumGrid& grid) {
  if (!config.out) throw ConfigurationError("no output path");
  const std::filesystem::path p(*config.out);
  {
    auto f = open_out(p);
    if (config.format == Format::csv)
      write_spectra_csv(f, grid);
    else
      f << spectra_json(grid).dump(2) << '\n';
  }
  auto e = open_out(p.parent_path() / (p.stem().string() + ".errors.json"));
  e << errors_json(grid).dump(2) << '\n';
}

// ---- figures of merit

App app_from_string(const std::string& s) {
  if (s == "heterodyne") return App::heterodyne;
  if (s == "qubit") return App::qubit;
  if (s == "counting") return App::counting;
  if (s == "entangle") return App::entangle;
  throw ConfigurationError("unknown application '" + s + "' (heterodyne, qubit, counting, entangle)");
}

namespace {

SpectralProfile profile_of(const RunConfig& config, const LoadedModel& lm, const DoubledDynamics& dyn) {
  SweepOptions opts;
  opts.threads = config.threads;
  return upper_profile(spectrum_sweep(dyn, sweep_grid(config, lm), opts));
}

// r_N at omega; 0 when nothing noisy reaches the exit
double dark_rate(const SpectralProfile& profile, double omega) {
  try {
    return dark_count_rate(profile, omega).rate;
  } catch (const UndefinedNoiseError&) {
    return 0.0;
  }
}

struct DarkInput {
  double p_d = 0.0;
  double mean = 0.0;  // r_N T
};

DarkInput dark_input(const RunConfig& config, const LoadedModel* lm, const DoubledDynamics* dyn, double omega) {
  const double T = config.app.window;
  if (!(T > 0.0)) throw ConfigurationError("detection window must be positive");
  if (config.app.p_d) {
    const double p = *config.app.p_d;
    if (!(p >= 0.0 && p < 1.0)) throw ConfigurationError("dark-count probability must be in [0, 1)");
    return {p, -std::log1p(-p)};
  }
  const double r = dark_rate(profile_of(config, *lm, *dyn), omega);
  return {dark_count_probability(r, T), r * T};
}

void check_window(double T) {
  if (!(T > 0.0)) throw ConfigurationError("detection window must be positive");
}

report_json warnings_json(const std::vector<std::string>& w) { return report_json(w); }

}  // namespace

report_json run_fom(const RunConfig& config, App app) {
  const auto lm = load_checked(config.source);
  const auto dyn = assemble_dynamics(lm.model);
  const double w = signal_frequency(config, lm);
  report_json out;
  out["omega_hz"] = angular_to_hz(w);

  const auto up = transfer_row(dyn, w, Sideband::upper);
  const double eta_up = eta(up);
  std::optional<double> n_up;
  if (eta_up > 0.0) n_up = added_noise(up);

  switch (app) {
    case App::heterodyne: {
      out["app"] = "heterodyne";
      const auto dn = transfer_row(dyn, w, Sideband::lower);
      const double constructive = constructive_lo_phase(up, dn);
      const double theta = config.app.theta_lo.value_or(constructive);
      const auto h = heterodyne_sensitivity(up, dn, theta);
      out["theta_lo"] = theta;
      out["constructive_phase"] = constructive;
      out["eta_up"] = h.eta_up;
      out["eta_dn"] = h.eta_dn;
      out["flux_up"] = h.flux_up;
      out["flux_dn"] = h.flux_dn;
      out["abs_t"] = std::abs(h.t_lo);
      out["P_s"] = h.p_s;
      out["bound"] = h.bound;  // holds at the constructive phase
      break;
    }
    case App::qubit: {
      out["app"] = "qubit";
      if (!n_up) throw UndefinedNoiseError("eta+ vanishes at the signal frequency");
      const auto q = qubit_fidelity(eta_up, *n_up);
      out["eta_up"] = eta_up;
      out["N_up"] = *n_up;
      out["F_q"] = q.fidelity;
      out["warnings"] = warnings_json(q.warnings);
      break;
    }
    case App::counting: {
      out["app"] = "counting";
      check_window(config.app.window);
      InputMode in;
      in.shape = config.app.h_in.shape;
      in.center = w;
      in.width = hz_to_angular(config.app.h_in.width_hz);
      OutputMode o;
      o.shape = config.app.h_out.shape;
      o.duration = config.app.h_out.duration > 0.0 ? config.app.h_out.duration : config.app.window;
      o.delay = config.app.h_out.delay;
      const auto c = counting_yield(profile_of(config, lm, dyn), w, in, o, config.app.window);
      out["eta_plus"] = c.dark.eta_plus;
      out["N_plus"] = c.dark.n_plus;
      out["bandwidth_hz"] = c.dark.bandwidth_hz;
      out["dark_rate"] = c.dark.rate;
      out["eta_h"] = c.eta_h;
      out["captured"] = c.captured;
      out["window"] = c.window;
      out["n_out_mean"] = c.n_out_mean;
      break;
    }
    case App::entangle: {
      out["app"] = "entangle";
      ProtocolParams setup;
      setup.scheme = config.app.scheme;
      setup.eta = config.app.eta.value_or(eta_up);
      setup.p_e = config.app.p_e;
      const auto d = dark_input(config, &lm, &dyn, w);
      setup.p_d = d.p_d;
      check(setup);
      const auto exact = entangle_fidelity_exact(setup);
      const auto asym = entangle_fidelity_asymptotic(setup);
      const auto cmp = fidelity_comparison(setup.eta, d.mean);
      out["scheme"] = to_string(setup.scheme);
      out["eta"] = setup.eta;
      out["p_e"] = setup.p_e;
      out["p_d"] = setup.p_d;
      out["fidelity"] = exact.fidelity;
      out["success_probability"] = exact.success_probability;
      out["fidelity_asymptotic"] = asym.fidelity;
      if (setup.scheme == Scheme::one_click) out["p_e_opt"] = asym.p_e_opt;
      out["fidelity_opt_one_click"] = cmp.one_click;
      out["fidelity_two_click"] = cmp.two_click;
      out["warnings"] = warnings_json(asym.warnings);
      break;
    }
  }
  return out;
}

// ---- optimization

namespace {

constexpr std::pair<Objective, const char*> kObjectives[] = {
    {Objective::max_eta, "max-eta"}, {Objective::min_n, "min-N"},     {Objective::max_fq, "max-Fq"},
    {Objective::max_f1c, "max-F1c"}, {Objective::max_f2c, "max-F2c"}, {Objective::min_ps, "min-Ps"}};

bool maximizes(Objective o) { return o != Objective::min_n && o != Objective::min_ps; }

// best one-click fidelity over P_e, golden section in log P_e
double best_one_click(double eta_v, double p_d) {
  auto f = [&](double lp) {
    return entangle_fidelity_exact({Scheme::one_click, std::exp(lp), p_d, eta_v}).fidelity;
  };
  double a = std::log(1e-12), b = 0.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-9) {
    if (f1 < f2) {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + phi * (b - a), f2 = f(x2);
    } else {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - phi * (b - a), f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

}  // namespace

Objective objective_from_string(const std::string& s) {
  for (const auto& [o, name] : kObjectives)
    if (s == name) return o;
  throw ConfigurationError("unknown objective '" + s + "' (max-eta, min-N, max-Fq, max-F1c, max-F2c, min-Ps)");
}

std::string to_string(Objective o) {
  for (const auto& [k, name] : kObjectives)
    if (k == o) return name;
  return "?";
}

Variable parse_variable(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i)
    if (i == text.size() || text[i] == ':') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  if (parts.size() < 3 || parts.size() > 4 || parts[0].empty() || (parts.size() == 4 && parts[3] != "log"))
    throw ConfigurationError("variable '" + text + "' should read key:lo:hi or key:lo:hi:log");
  Variable v;
  v.key = parts[0];
  v.bound.lo = parse_assignment("x=" + parts[1]).second;
  v.bound.hi = parse_assignment("x=" + parts[2]).second;
  v.bound.log = parts.size() == 4;
  return v;
}

double objective_value(const RunConfig& config, const OptimizeJob& setup, const std::vector<double>& x) {
  if (x.size() != setup.variables.size()) throw ConfigurationError("objective called with the wrong number of variables");
  RunConfig c = config;
  c.threads = 1;  // starts already run in parallel
  for (std::size_t i = 0; i < x.size(); ++i) c.source.overrides.push_back(setup.variables[i].key + "=" + num(x[i], 17));
  const auto lm = load_checked(c.source);
  const auto dyn = assemble_dynamics(lm.model);
  double w = signal_frequency(c, lm);
  if (setup.at_peak) {
    const auto [lo, hi] = sweep_bounds(c, lm);
    w = find_eta_peak(dyn, lo, hi).omega;
  }
  const auto up = transfer_row(dyn, w, Sideband::upper);
  switch (setup.objective) {
    case Objective::max_eta:
      return eta(up);
    case Objective::min_n:
      return added_noise(up);
    case Objective::max_fq:
      return qubit_fidelity(eta(up), added_noise(up)).fidelity;
    case Objective::max_f1c:
    case Objective::max_f2c: {
      const double e = c.app.eta.value_or(eta(up));
      const double p_d = dark_input(c, &lm, &dyn, w).p_d;
      if (setup.objective == Objective::max_f1c) return best_one_click(e, p_d);
      return entangle_fidelity_exact({Scheme::two_click, 0.5, p_d, e}).fidelity;
    }
    case Objective::min_ps: {
      const auto dn = transfer_row(dyn, w, Sideband::lower);
      return heterodyne_sensitivity(up, dn, constructive_lo_phase(up, dn)).p_s;
    }
  }
  return 0.0;
}

OptimizeRun run_optimize(const RunConfig& config, const OptimizeJob& setup) {
  if (setup.variables.empty()) throw ConfigurationError("optimize needs at least one --var");
  std::vector<Bound> bounds;
  for (const auto& v : setup.variables) bounds.push_back(v.bound);
  NelderMeadOptions opts = setup.options;
  if (!opts.threads) opts.threads = config.threads;
  const double sgn = maximizes(setup.objective) ? -1.0 : 1.0;
  OptimizeRun run;
  run.setup = setup;
  run.result = minimize([&](const std::vector<double>& x) { return sgn * objective_value(config, setup, x); }, bounds,
                        opts);
  run.best_objective = sgn * run.result.best_value;
  if (config.out) {
    std::ofstream f(*config.out);
    if (!f) throw ConfigurationError("cannot write " + *config.out);
    if (config.format == Format::csv)
      write_trace_csv(f, run);
    else
      f << optimize_json(run).dump(2) << '\n';
  }
  return run;
}

void write_trace_csv(std::ostream& os, const OptimizeRun& run) {
  const double sgn = maximizes(run.setup.objective) ? -1.0 : 1.0;
  os << "start";
  for (const auto& v : run.setup.variables) os << ',' << v.key;
  os << ',' << to_string(run.setup.objective) << ",feasible,error\n";
  for (const auto& e : run.result.trace) {
    os << e.start;
    for (double x : e.x) os << ',' << num(x, 17);
    os << ',' << (e.feasible ? num(sgn * e.value, 17) : std::string()) << ',' << (e.feasible ? 1 : 0) << ',';
    std::string err = e.error;
    std::replace(err.begin(), err.end(), '\n', ' ');
    if (!err.empty()) os << '"' << err << '"';
    os << '\n';
  }
}

report_json optimize_json(const OptimizeRun& run) {
  const double sgn = maximizes(run.setup.objective) ? -1.0 : 1.0;
  report_json best;
  for (std::size_t i = 0; i < run.setup.variables.size(); ++i) best[run.setup.variables[i].key] = run.result.best_x[i];
  auto trace = report_json::array();
  for (const auto& e : run.result.trace) {
    report_json t{{"start", e.start}, {"x", e.x}, {"feasible", e.feasible}};
    t["value"] = e.feasible ? report_json(sgn * e.value) : report_json(nullptr);
    if (!e.error.empty()) t["error"] = e.error;
    trace.push_back(std::move(t));
  }
  return {{"objective", to_string(run.setup.objective)},
          {"best", best},
          {"best_value", run.best_objective},
          {"evaluations", run.result.evaluations},
          {"converged", run.result.converged},
          {"trace", trace}};
}

// ---- validation

bool ValidationRun::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

report_json ValidationRun::to_json() const {
  auto list = report_json::array();
  for (const auto& c : checks) {
    report_json j{{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    list.push_back(std::move(j));
  }
  return {{"passed", passed()}, {"checks", list}};
}

namespace {

// running maximum of one residual over a grid
struct Tally {
  explicit Tally(std::string n) : name(std::move(n)) {}
  std::string name;
  double worst = 0.0;
  std::string where;
  std::vector<std::string> failures;

  void add(double v, const std::string& at) {
    if (!(v <= worst)) {  // NaN is kept as the worst
      worst = v;
      where = at;
    }
  }
  Check check(double tol) const {
    Check c{name, worst, tol, worst <= tol && failures.empty(), ""};
    if (!failures.empty())
      c.detail = failures.front() + (failures.size() > 1 ? " (+" + std::to_string(failures.size() - 1) + " more)" : "");
    else if (!where.empty())
      c.detail = "worst at " + where;
    return c;
  }
};

std::string at_hz(double w) { return num(angular_to_hz(w), 10) + " Hz"; }

void merge_into(ValidationRun& into, const ValidationRun& from, const std::string& label) {
  for (const auto& c : from.checks) {
    auto it = std::find_if(into.checks.begin(), into.checks.end(), [&](const Check& k) { return k.name == c.name; });
    if (it == into.checks.end()) {
      into.checks.push_back(c);
      into.checks.back().detail = label + (c.detail.empty() ? "" : ": " + c.detail);
      continue;
    }
    const bool worse = (!c.passed && it->passed) || (c.passed == it->passed && !(c.value <= it->value));
    if (worse) {
      *it = c;
      it->detail = label + (c.detail.empty() ? "" : ": " + c.detail);
    }
  }
}

}  // namespace

namespace {

struct Unitarity {
  Tally sym{"symplectic"}, sum{"sum_rule"}, comm{"commutator"};

  void probe(const DoubledDynamics& dyn, double w) {
    const auto at = at_hz(w);
    try {
      sym.add(scattering_matrix(dyn, w).physical_symplectic_residual, at);
      sym.add(scattering_matrix(dyn, -w).physical_symplectic_residual, "-" + at);
      for (Sideband sb : {Sideband::upper, Sideband::lower}) {
        if (!(dyn.port_band_center[dyn.exit_port] + sign(sb) * w > 0.0)) continue;
        const auto row = transfer_row(dyn, w, sb);
        const auto tag = at + (sb == Sideband::upper ? " (+)" : " (-)");
        sum.add(sum_rule_residual(row), tag);
        comm.add(noise_commutator_residual(row), tag);
      }
    } catch (const Error& e) {
      for (auto* t : {&sym, &sum, &comm}) t->failures.push_back(at + ": " + e.what());
    }
  }
};

}  // namespace

std::vector<double> lab_resonances(const TransducerModel& model) {
  std::vector<double> out;
  for (const auto& m : model.modes)
    if (m.frame == Frame::lab_quadrature) out.push_back(std::abs(m.resonance_frequency - model.mode_band_center(m.name)));
  return out;
}

ValidationRun check_dynamics(const DoubledDynamics& dyn, const std::vector<double>& omegas, double tolerance,
                             const std::vector<double>& exact_at) {
  Unitarity grid;
  Tally ph{"particle_hole"};
  ph.add(particle_hole_residual(dyn), "M");
  for (double w : omegas) {
    grid.probe(dyn, w);
    try {
      ph.add(particle_hole_residual(dyn, w), at_hz(w));
    } catch (const Error& e) {
      ph.failures.push_back(at_hz(w) + ": " + e.what());
    }
  }
  ValidationRun run;
  if (exact_at.empty()) {
    for (const auto* t : {&grid.sym, &grid.sum, &grid.comm}) run.checks.push_back(t->check(tolerance));
  } else {
    Unitarity exact;
    for (double w : exact_at) exact.probe(dyn, w);
    for (const auto* t : {&exact.sym, &exact.sum, &exact.comm}) run.checks.push_back(t->check(tolerance));
    Check defect = grid.sym.check(tolerance);
    defect.name = "quasi_unitarity_defect";
    defect.value = std::max({grid.sym.worst, grid.sum.worst, grid.comm.worst});
    defect.passed = true;
    defect.detail = "lab-quadrature damping, exact only at the bare resonance";
    run.checks.push_back(defect);
  }
  run.checks.push_back(ph.check(tolerance));
  return run;
}

ValidationRun run_validate(const RunConfig& config) {
  ValidationRun run;
  const auto lm = load_model(config.source);
  const auto report = validate_model(lm.model);
  run.checks.push_back({"model", static_cast<double>(report.issues.size()), 0.0, !report.has_errors(),
                        report.empty() ? "" : report.to_string()});
  if (report.has_errors()) return run;

  DoubledDynamics dyn;
  try {
    dyn = assemble_dynamics(lm.model);
  } catch (const UnstableModelError& e) {
    run.checks.push_back({"stability", 0.0, 0.0, false, e.what()});
    return run;
  }
  const auto omegas = sweep_grid(config, lm);
  merge_into(run, check_dynamics(dyn, omegas, 1e-9, lab_resonances(lm.model)), lm.electromech ? "electromech" : "model");

  const bool plain = std::none_of(config.source.overrides.begin(), config.source.overrides.end(),
                                  [](const std::string& s) { return s.substr(0, s.find('=')).find('.') != std::string::npos; });
  if (lm.electromech && plain) {
    // engine against the closed form, physical columns only
    Tally oracle{"oracle"};
    for (double w : omegas) {
      try {
        const auto engine = transfer_row(dyn, w, Sideband::upper);
        const auto closed = electromech::closed_form_row(*lm.electromech, w);
        double scale = 0.0, diff = 0.0;
        for (std::size_t m = 0; m < closed.u.size(); ++m) {
          if (engine.u_physical(m)) {
            scale = std::max(scale, std::abs(closed.u[m]));
            diff = std::max(diff, std::abs(engine.u[m] - closed.u[m]));
          }
          if (engine.v_physical(m)) {
            scale = std::max(scale, std::abs(closed.v[m]));
            diff = std::max(diff, std::abs(engine.v[m] - closed.v[m]));
          }
        }
        oracle.add(scale > 0.0 ? diff / scale : diff, at_hz(w));
      } catch (const Error& e) {
        oracle.failures.push_back(at_hz(w) + ": " + e.what());
      }
    }
    run.checks.push_back(oracle.check(1e-8));
  }
  return run;
}

ValidationRun validate_random(std::size_t models, std::size_t frequencies, std::uint64_t seed, double tolerance) {
  ValidationRun run;
  const auto ms = random_models(models, seed);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto dyn = assemble_dynamics(ms[i]);
    const double rate = characteristic_rate(ms[i]);
    const double hi = std::min(3.0 * rate, 1.5e10);
    merge_into(run, check_dynamics(dyn, log_grid(std::min(1e-3 * rate, 1e-3 * hi), hi, frequencies), tolerance),
               "random model " + std::to_string(i));
  }
  return run;
}

// ---- protocol simulation

ProtocolParams protocol_params(const RunConfig& config) {
  ProtocolParams setup;
  setup.scheme = config.app.scheme;
  setup.p_e = config.app.p_e;
  if (config.app.eta && config.app.p_d) {
    setup.eta = *config.app.eta;
    setup.p_d = *config.app.p_d;
  } else {
    const auto lm = load_checked(config.source);
    const auto dyn = assemble_dynamics(lm.model);
    const double w = signal_frequency(config, lm);
    setup.eta = config.app.eta.value_or(eta(transfer_row(dyn, w, Sideband::upper)));
    setup.p_d = dark_input(config, &lm, &dyn, w).p_d;
  }
  check(setup);
  return setup;
}

ProtocolRun run_protocol(const RunConfig& config, long long trials, std::uint64_t seed) {
  if (trials < 1) throw ConfigurationError("protocol-sim needs at least one trial");
  ProtocolRun run;
  run.setup = protocol_params(config);
  run.enumerated = protocol_enumerate(run.setup);
  MonteCarloOptions mc;
  mc.threads = config.threads;
  run.montecarlo = protocol_montecarlo(run.setup, trials, seed, mc);
  return run;
}

report_json protocol_json(const ProtocolRun& run) {
  const auto& mc = run.montecarlo;
  const auto& ex = run.enumerated;
  const double z = mc.fidelity_stderr > 0.0 ? (mc.fidelity - ex.fidelity) / mc.fidelity_stderr : 0.0;
  return {{"scheme", to_string(run.setup.scheme)},
          {"p_e", run.setup.p_e},
          {"p_d", run.setup.p_d},
          {"eta", run.setup.eta},
          {"trials", mc.trials},
          {"heralds", mc.heralds},
          {"fidelity", mc.fidelity},
          {"fidelity_stderr", mc.fidelity_stderr},
          {"success_probability", mc.success_probability},
          {"success_stderr", mc.success_stderr},
          {"exact_fidelity", ex.fidelity},
          {"exact_success_probability", ex.success_probability},
          {"fidelity_z", z},
          {"populations", mc.populations},
          {"exact_populations", ex.populations}};
}

}  // namespace qtr
