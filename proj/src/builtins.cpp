#include "qtransduce/builtins.hpp"

#include <cmath>

#include "qtransduce/errors.hpp"
#include "qtransduce/model_io.hpp"
#include "qtransduce/units.hpp"

namespace qtr {

std::vector<std::string> builtin_names() { return {"electromech", "converter"}; }

namespace {

bool is_path(const std::string& key) { return key.find('.') != std::string::npos; }

LoadedModel electromech_builtin(const std::vector<std::string>& overrides) {
  auto p = electromech::defaults();
  bool drive_set = false;
  std::vector<std::string> paths;
  for (const auto& a : overrides) {
    const auto [k, v] = parse_assignment(a);
    if (is_path(k)) {
      paths.push_back(a);
      continue;
    }
    if (k == "omega_m_hz") p.omega_m = hz_to_angular(v);
    else if (k == "omega_lc_hz") p.omega_lc = hz_to_angular(v);
    else if (k == "drive_hz") p.omega_drive = hz_to_angular(v), drive_set = true;
    else if (k == "g_hz") p.g = hz_to_angular(v);
    else if (k == "gamma_tx_hz") p.gamma_tx = hz_to_angular(v);
    else if (k == "gamma_wg_hz") p.gamma_wg = hz_to_angular(v);
    else if (k == "gamma_m_hz") p.gamma_m = hz_to_angular(v);
    else if (k == "T_tx") p.T_tx = v;
    else if (k == "T_wg") p.T_wg = v;
    else if (k == "T_m") p.T_m = v;
    else if (k == "T") p.T_tx = p.T_wg = p.T_m = v;
    else throw ConfigurationError("electromech: unknown override '" + k + "'");
  }
  if (!drive_set) p.omega_drive = p.omega_lc - p.omega_m;
  electromech::check(p);
  LoadedModel out;
  out.model = electromech::build_model(p);
  apply_overrides(out.model, paths);
  out.electromech = p;
  out.omega_sig = p.omega_m;
  out.span = 10.0 * (p.gamma_wg + p.gamma_m + p.g * p.g / p.gamma_tx);
  return out;
}

LoadedModel converter_builtin(const std::vector<std::string>& overrides) {
  const double w_mw = hz_to_angular(5e9), w_opt = hz_to_angular(194e12), det = hz_to_angular(5e6);
  TransducerModel m;
  m.bands = {{"microwave", w_mw}, {"optical", w_opt}};
  m.modes = {{"cavity_mw", "microwave", Frame::rotating, w_mw + det},
             {"cavity_opt", "optical", Frame::rotating, w_opt + det}};
  m.drives = {{"pump", w_opt - w_mw}};
  m.couplings = {{"cavity_mw", "cavity_opt", hz_to_angular(1e6), "pump", 1, CouplingForm::beam_splitter}};
  m.ports = {{"feedline", "cavity_mw", hz_to_angular(2e6), 0.03, PortRole::signal, Frame::rotating},
             {"mw_loss", "cavity_mw", hz_to_angular(1e5), 0.1, PortRole::loss, Frame::rotating},
             {"fiber", "cavity_opt", hz_to_angular(2e6), 0.0, PortRole::exit, Frame::rotating},
             {"opt_loss", "cavity_opt", hz_to_angular(1e5), 300.0, PortRole::loss, Frame::rotating}};
  LoadedModel out;
  out.model = m;
  apply_overrides(out.model, overrides);
  out.omega_sig = det;
  out.span = hz_to_angular(5e6);
  return out;
}

}  // namespace

LoadedModel load_model(const ModelSource& src) {
  if (src.path && src.builtin) throw ConfigurationError("give either a model file or a builtin, not both");
  if (src.path) {
    LoadedModel out;
    out.model = load_model_file(*src.path);
    apply_overrides(out.model, src.overrides);
    return out;
  }
  if (!src.builtin) throw ConfigurationError("no model given (use --model PATH or --builtin NAME)");
  if (*src.builtin == "electromech") return electromech_builtin(src.overrides);
  if (*src.builtin == "converter") return converter_builtin(src.overrides);
  std::string names;
  for (const auto& n : builtin_names()) names += (names.empty() ? "" : ", ") + n;
  throw ConfigurationError("unknown builtin '" + *src.builtin + "' (known: " + names + ")");
}

}  // namespace qtr
