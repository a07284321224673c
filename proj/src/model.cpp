#include "qtransduce/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "qtransduce/errors.hpp"

namespace qtr {

const Band* TransducerModel::find_band(std::string_view name) const {
  auto it = std::find_if(bands.begin(), bands.end(), [&](const Band& b) { return b.name == name; });
  return it == bands.end() ? nullptr : &*it;
}

const Drive* TransducerModel::find_drive(std::string_view name) const {
  auto it = std::find_if(drives.begin(), drives.end(), [&](const Drive& d) { return d.name == name; });
  return it == drives.end() ? nullptr : &*it;
}

std::optional<std::size_t> TransducerModel::mode_index(std::string_view name) const {
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (modes[i].name == name) return i;
  return std::nullopt;
}

double TransducerModel::mode_band_center(std::string_view mode) const {
  auto idx = mode_index(mode);
  if (!idx) throw ConfigurationError("unknown mode '" + std::string(mode) + "'");
  const Band* band = find_band(modes[*idx].band);
  if (!band) throw ConfigurationError("mode '" + std::string(mode) + "' refers to unknown band");
  return band->center_frequency;
}

double TransducerModel::mode_total_rate(std::string_view mode) const {
  double total = 0.0;
  for (const auto& p : ports)
    if (p.mode == mode) total += p.rate;
  return total;
}

bool ValidationReport::has_errors() const {
  return std::any_of(issues.begin(), issues.end(),
                     [](const auto& i) { return i.severity == ValidationIssue::Severity::error; });
}

bool ValidationReport::has_warnings() const {
  return std::any_of(issues.begin(), issues.end(),
                     [](const auto& i) { return i.severity == ValidationIssue::Severity::warning; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& i : issues) {
    os << (i.severity == ValidationIssue::Severity::error ? "error" : "warning") << ": " << i.path
       << ": " << i.message << '\n';
  }
  return os.str();
}

namespace {

class ReportBuilder {
 public:
  void error(std::string path, std::string msg) {
    report_.issues.push_back({ValidationIssue::Severity::error, std::move(path), std::move(msg)});
  }
  void warning(std::string path, std::string msg) {
    report_.issues.push_back({ValidationIssue::Severity::warning, std::move(path), std::move(msg)});
  }
  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

std::string indexed(std::string_view key, std::size_t i) {
  return std::string(key) + "[" + std::to_string(i) + "]";
}

template <class T>
void check_unique(const std::vector<T>& items, std::string_view key, ReportBuilder& rb) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].name.empty()) rb.error(indexed(key, i) + ".name", "empty name");
    if (!seen.insert(items[i].name).second)
      rb.error(indexed(key, i) + ".name", "duplicate name '" + items[i].name + "'");
  }
}

// Largest total port rate among the modes of a band.
double band_linewidth(const TransducerModel& m, std::string_view band) {
  double w = 0.0;
  for (const auto& mode : m.modes)
    if (mode.band == band) w = std::max(w, m.mode_total_rate(mode.name));
  return w;
}

}  // namespace

ValidationReport validate_model(const TransducerModel& model, const ValidationOptions& options) {
  ReportBuilder rb;

  if (model.modes.empty()) rb.error("modes", "model has no internal modes");
  if (model.ports.empty()) rb.error("ports", "model has no ports");

  check_unique(model.bands, "bands", rb);
  check_unique(model.modes, "modes", rb);
  check_unique(model.drives, "drives", rb);
  check_unique(model.ports, "ports", rb);

  for (std::size_t i = 0; i < model.bands.size(); ++i) {
    const double c = model.bands[i].center_frequency;
    if (!std::isfinite(c) || c < 0.0)
      rb.error(indexed("bands", i) + ".center_frequency", "must be finite and non-negative");
  }
  for (std::size_t i = 0; i < model.drives.size(); ++i) {
    const double f = model.drives[i].frequency;
    if (!std::isfinite(f) || f < 0.0)
      rb.error(indexed("drives", i) + ".frequency", "must be finite and non-negative");
  }

  for (std::size_t i = 0; i < model.modes.size(); ++i) {
    const auto& mode = model.modes[i];
    const std::string path = indexed("modes", i);
    const Band* band = model.find_band(mode.band);
    if (!band) {
      rb.error(path + ".band", "unknown band '" + mode.band + "'");
      continue;
    }
    if (!std::isfinite(mode.resonance_frequency))
      rb.error(path + ".resonance_frequency", "must be finite");
    if (mode.frame == Frame::lab_quadrature && band->center_frequency != 0.0)
      rb.error(path + ".frame", "lab-quadrature modes must sit in a band of centre 0");
    if (mode.frame == Frame::lab_quadrature && mode.resonance_frequency <= 0.0)
      rb.error(path + ".resonance_frequency", "lab-quadrature modes need a positive resonance");
  }

  int signals = 0;
  int exits = 0;
  for (std::size_t i = 0; i < model.ports.size(); ++i) {
    const auto& port = model.ports[i];
    const std::string path = indexed("ports", i);
    auto mi = model.mode_index(port.mode);
    if (!mi) {
      rb.error(path + ".mode", "unknown mode '" + port.mode + "'");
    } else if (port.flavor == Frame::lab_quadrature && model.modes[*mi].frame != Frame::lab_quadrature) {
      rb.error(path + ".flavor", "lab-quadrature port attached to a rotating-frame mode");
    }
    if (!(port.rate > 0.0) || !std::isfinite(port.rate)) rb.error(path + ".rate", "must be positive");
    if (!(port.temperature >= 0.0) || !std::isfinite(port.temperature))
      rb.error(path + ".temperature", "must be finite and non-negative");
    signals += port.is_signal() ? 1 : 0;
    exits += port.is_exit() ? 1 : 0;
  }
  if (!model.ports.empty()) {
    if (signals != 1) rb.error("ports", "exactly one signal port required, found " + std::to_string(signals));
    if (exits != 1) rb.error("ports", "exactly one exit port required, found " + std::to_string(exits));
  }

  for (std::size_t i = 0; i < model.modes.size(); ++i) {
    if (!(model.mode_total_rate(model.modes[i].name) > 0.0))
      rb.error(indexed("modes", i), "mode '" + model.modes[i].name + "' has no port (closed mode)");
  }

  for (std::size_t i = 0; i < model.couplings.size(); ++i) {
    const auto& c = model.couplings[i];
    const std::string path = indexed("couplings", i);
    auto ia = model.mode_index(c.mode_a);
    auto ib = model.mode_index(c.mode_b);
    if (!ia) rb.error(path + ".mode_a", "unknown mode '" + c.mode_a + "'");
    if (!ib) rb.error(path + ".mode_b", "unknown mode '" + c.mode_b + "'");
    if (!(c.rate >= 0.0) || !std::isfinite(c.rate)) rb.error(path + ".rate", "must be finite and non-negative");
    if (!ia || !ib) continue;
    if (*ia == *ib) {
      rb.error(path, "self-coupling is not supported");
      continue;
    }
    const Band* ba = model.find_band(model.modes[*ia].band);
    const Band* bb = model.find_band(model.modes[*ib].band);
    if (!ba || !bb) continue;
    const double gap = std::abs(ba->center_frequency - bb->center_frequency);
    // pair creation bridges the sum of the centres, exchange the difference
    const double sum = ba->center_frequency + bb->center_frequency;
    auto bridged = [&](double target, double tol) {
      switch (c.form) {
        case CouplingForm::beam_splitter: return std::abs(gap - target) <= tol;
        case CouplingForm::two_mode_squeezing: return std::abs(sum - target) <= tol;
        case CouplingForm::quadrature_position:
          return std::abs(gap - target) <= tol || std::abs(sum - target) <= tol;
      }
      return false;
    };

    if (!c.drive) {
      if (!bridged(0.0, 0.0))
        rb.error(path + ".drive", "undriven coupling between bands with different centres");
      continue;
    }
    const Drive* d = model.find_drive(*c.drive);
    if (!d) {
      rb.error(path + ".drive", "unknown drive '" + *c.drive + "'");
      continue;
    }
    if (d->frequency == 0.0 || c.order == 0) {
      if (!bridged(0.0, 0.0))
        rb.error(path + ".drive", "DC-coupled bands must overlap and share a common centre");
      continue;
    }
    const double target = std::abs(c.order) * d->frequency;
    if (!bridged(target, options.drive_match_tolerance * d->frequency)) {
      std::ostringstream os;
      os << "band gap " << gap << " rad/s does not match |l| * drive = " << target << " rad/s";
      rb.error(path + ".order", os.str());
      continue;
    }
    const double lw = std::max(band_linewidth(model, ba->name), band_linewidth(model, bb->name));
    if (!(gap > options.separation_factor * lw)) {
      std::ostringstream os;
      os << "RWA separation violated: band gap " << gap << " rad/s <= " << options.separation_factor
         << " x linewidth " << lw << " rad/s";
      rb.warning(path, os.str());
    }
  }

  return rb.take();
}

std::vector<RwaRatio> rwa_report(const TransducerModel& model) {
  std::vector<RwaRatio> out;
  for (std::size_t i = 0; i < model.couplings.size(); ++i) {
    const auto& c = model.couplings[i];
    RwaRatio r;
    r.coupling = i;
    r.mode_a = c.mode_a;
    r.mode_b = c.mode_b;
    auto ia = model.mode_index(c.mode_a);
    auto ib = model.mode_index(c.mode_b);
    if (!ia || !ib) throw ConfigurationError("rwa_report: coupling " + std::to_string(i) + " has unknown modes");
    const Band* ba = model.find_band(model.modes[*ia].band);
    const Band* bb = model.find_band(model.modes[*ib].band);
    if (!ba || !bb) throw ConfigurationError("rwa_report: coupling " + std::to_string(i) + " has unknown bands");
    r.band_gap = std::abs(ba->center_frequency - bb->center_frequency);
    r.linewidth = std::max(band_linewidth(model, ba->name), band_linewidth(model, bb->name));
    const Drive* d = c.drive ? model.find_drive(*c.drive) : nullptr;
    if (d && d->frequency > 0.0 && r.band_gap > 0.0 && r.linewidth > 0.0) r.ratio = r.band_gap / r.linewidth;
    out.push_back(std::move(r));
  }
  return out;
}

std::string_view to_string(Frame f) {
  return f == Frame::rotating ? "rotating" : "lab-quadrature";
}

std::string_view to_string(CouplingForm f) {
  switch (f) {
    case CouplingForm::beam_splitter: return "beam-splitter";
    case CouplingForm::two_mode_squeezing: return "two-mode-squeezing";
    case CouplingForm::quadrature_position: return "quadrature-position";
  }
  return "?";
}

std::string_view to_string(PortRole r) {
  switch (r) {
    case PortRole::signal: return "signal";
    case PortRole::exit: return "exit";
    case PortRole::loss: return "loss";
    case PortRole::signal_exit: return "signal+exit";
  }
  return "?";
}

Frame frame_from_string(std::string_view s) {
  if (s == "rotating") return Frame::rotating;
  if (s == "lab-quadrature") return Frame::lab_quadrature;
  throw ConfigurationError("unknown frame '" + std::string(s) + "'");
}

CouplingForm coupling_form_from_string(std::string_view s) {
  if (s == "beam-splitter") return CouplingForm::beam_splitter;
  if (s == "two-mode-squeezing") return CouplingForm::two_mode_squeezing;
  if (s == "quadrature-position") return CouplingForm::quadrature_position;
  throw ConfigurationError("unknown coupling form '" + std::string(s) + "'");
}

PortRole port_role_from_string(std::string_view s) {
  if (s == "signal") return PortRole::signal;
  if (s == "exit") return PortRole::exit;
  if (s == "loss") return PortRole::loss;
  if (s == "signal+exit") return PortRole::signal_exit;
  throw ConfigurationError("unknown port role '" + std::string(s) + "'");
}

}  // namespace qtr
