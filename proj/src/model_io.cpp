#include "qtransduce/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <fstream>
#include <sstream>

#include "qtransduce/errors.hpp"
#include "qtransduce/units.hpp"

namespace qtr {

using json = model_json;

namespace {
constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;
}

double file_angular(long double hz) { return static_cast<double>(hz * kTwoPiL); }

namespace {

std::string shortest(double d) { return nlohmann::json(d).dump(); }

// the long double that the shortest text of d reads back as
long double reread(double d) { return std::strtold(shortest(d).c_str(), nullptr); }

}  // namespace

long double file_hz(double w) {
  // prefer a value that prints short
  double h = angular_to_hz(w);
  double up = h, dn = h;
  if (file_angular(reread(h)) == w) return reread(h);
  for (int k = 0; k < 4; ++k) {
    up = std::nextafter(up, HUGE_VAL);
    dn = std::nextafter(dn, -HUGE_VAL);
    if (file_angular(reread(up)) == w) return reread(up);
    if (file_angular(reread(dn)) == w) return reread(dn);
  }
  return static_cast<long double>(w) / kTwoPiL;
}

namespace {

long double file_plain(double d) {
  const long double l = reread(d);
  return static_cast<double>(l) == d ? l : static_cast<long double>(d);
}

void write_number(std::string& out, long double x) {
  const std::string s = shortest(static_cast<double>(x));
  if (std::strtold(s.c_str(), nullptr) == x) {
    out += s;
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", x);
  out += buf;
}

void write(std::string& out, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += std::string(",") + nl;
        first = false;
        out += pad + nlohmann::json(it.key()).dump() + (indent > 0 ? ": " : ":");
        write(out, it.value(), indent, depth + 1);
      }
      out += nl + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += std::string(",") + nl;
        out += pad;
        write(out, j[i], indent, depth + 1);
      }
      out += nl + close + "]";
      return;
    }
    case json::value_t::number_float:
      write_number(out, j.get<long double>());
      return;
    case json::value_t::string:
      out += nlohmann::json(j.get<std::string>()).dump();
      return;
    case json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    default:
      out += "null";
  }
}

}  // namespace

std::string dump_model_json(const json& doc, int indent) {
  std::string out;
  write(out, doc, indent, 0);
  return out;
}

std::string model_to_text(const TransducerModel& model) { return dump_model_json(model_to_json(model)); }

json model_to_json(const TransducerModel& m) {
  json doc;
  doc["bands"] = json::array();
  for (const auto& b : m.bands) doc["bands"].push_back({{"name", b.name}, {"center_hz", file_hz(b.center_frequency)}});
  doc["modes"] = json::array();
  for (const auto& x : m.modes)
    doc["modes"].push_back({{"name", x.name},
                            {"band", x.band},
                            {"frame", std::string(to_string(x.frame))},
                            {"resonance_hz", file_hz(x.resonance_frequency)}});
  doc["drives"] = json::array();
  for (const auto& d : m.drives) doc["drives"].push_back({{"name", d.name}, {"frequency_hz", file_hz(d.frequency)}});
  doc["couplings"] = json::array();
  for (const auto& c : m.couplings) {
    json j = {{"a", c.mode_a},
              {"b", c.mode_b},
              {"rate_hz", file_hz(c.rate)},
              {"order", c.order},
              {"form", std::string(to_string(c.form))}};
    if (c.drive) j["drive"] = *c.drive;
    doc["couplings"].push_back(j);
  }
  doc["ports"] = json::array();
  for (const auto& p : m.ports)
    doc["ports"].push_back({{"name", p.name},
                            {"mode", p.mode},
                            {"rate_hz", file_hz(p.rate)},
                            {"temperature_k", file_plain(p.temperature)},
                            {"role", std::string(to_string(p.role))},
                            {"flavor", std::string(to_string(p.flavor))}});
  return doc;
}

namespace {

// field access with the path in every message
struct Reader {
  const json& j;
  std::string path;

  const json& at(const char* key) const {
    if (!j.is_object()) throw ConfigurationError(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigurationError(path + "." + key + ": missing");
    return *it;
  }
  bool has(const char* key) const { return j.is_object() && j.contains(key); }
  std::string str(const char* key) const {
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigurationError(path + "." + key + ": expected a string");
    return v.get<std::string>();
  }
  long double num(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigurationError(path + "." + key + ": expected a number");
    const long double x = v.get<long double>();
    if (!std::isfinite(x)) throw ConfigurationError(path + "." + key + ": not finite");
    return x;
  }
  double hz(const char* key) const { return file_angular(num(key)); }
  double plain(const char* key) const { return static_cast<double>(num(key)); }
  int integer(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number_integer()) throw ConfigurationError(path + "." + key + ": expected an integer");
    return v.get<int>();
  }
  template <class F>
  auto parse_enum(const char* key, F f) const {
    try {
      return f(str(key));
    } catch (const ConfigurationError& e) {
      throw ConfigurationError(path + "." + key + ": " + e.what());
    }
  }
};

template <class F>
void each(const json& doc, const char* key, bool required, F f) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    if (required) throw ConfigurationError(std::string(key) + ": missing");
    return;
  }
  if (!it->is_array()) throw ConfigurationError(std::string(key) + ": expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) f(Reader{(*it)[i], std::string(key) + "[" + std::to_string(i) + "]"});
}

}  // namespace

TransducerModel model_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigurationError("model: expected a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const auto& k = it.key();
    if (k != "bands" && k != "modes" && k != "drives" && k != "couplings" && k != "ports")
      throw ConfigurationError(k + ": unknown top-level key");
  }
  TransducerModel m;
  each(doc, "bands", true, [&](const Reader& r) { m.bands.push_back({r.str("name"), r.hz("center_hz")}); });
  each(doc, "modes", true, [&](const Reader& r) {
    m.modes.push_back({r.str("name"), r.str("band"),
                       r.has("frame") ? r.parse_enum("frame", [](const std::string& s) { return frame_from_string(s); })
                                      : Frame::rotating,
                       r.hz("resonance_hz")});
  });
  each(doc, "drives", false, [&](const Reader& r) { m.drives.push_back({r.str("name"), r.hz("frequency_hz")}); });
  each(doc, "couplings", false, [&](const Reader& r) {
    Coupling c;
    c.mode_a = r.str("a");
    c.mode_b = r.str("b");
    c.rate = r.hz("rate_hz");
    if (r.has("drive")) c.drive = r.str("drive");
    c.order = r.has("order") ? r.integer("order") : 0;
    c.form = r.has("form") ? r.parse_enum("form", [](const std::string& s) { return coupling_form_from_string(s); })
                           : CouplingForm::beam_splitter;
    m.couplings.push_back(c);
  });
  each(doc, "ports", true, [&](const Reader& r) {
    Port p;
    p.name = r.str("name");
    p.mode = r.str("mode");
    p.rate = r.hz("rate_hz");
    p.temperature = r.has("temperature_k") ? r.plain("temperature_k") : 0.0;
    p.role = r.parse_enum("role", [](const std::string& s) { return port_role_from_string(s); });
    p.flavor = r.has("flavor") ? r.parse_enum("flavor", [](const std::string& s) { return frame_from_string(s); })
                               : Frame::rotating;
    m.ports.push_back(p);
  });
  return m;
}

TransducerModel parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset to line / column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("model file: parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                     ": " + e.what());
  }
  return model_from_json(doc);
}

TransducerModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

void save_model_file(const TransducerModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write '" + path + "'");
  out << model_to_text(model) << "\n";
}

// ---- parameter paths ---------------------------------------------------------

namespace {

struct Target {
  double* value;
  bool angular;
};

template <class Vec>
auto* by_name(Vec& v, const std::string& name) {
  for (auto& x : v)
    if (x.name == name) return &x;
  return static_cast<typename Vec::value_type*>(nullptr);
}

Target resolve(TransducerModel& m, const std::string& path) {
  const auto a = path.find('.');
  const auto b = path.rfind('.');
  if (a == std::string::npos || a == b) throw ConfigurationError("parameter path '" + path + "': expected section.name.field");
  const std::string section = path.substr(0, a), name = path.substr(a + 1, b - a - 1), field = path.substr(b + 1);
  auto fail = [&] { return ConfigurationError("unknown parameter '" + path + "'"); };
  if (section == "bands" && field == "center_hz") {
    if (auto* x = by_name(m.bands, name)) return {&x->center_frequency, true};
  } else if (section == "modes" && field == "resonance_hz") {
    if (auto* x = by_name(m.modes, name)) return {&x->resonance_frequency, true};
  } else if (section == "drives" && field == "frequency_hz") {
    if (auto* x = by_name(m.drives, name)) return {&x->frequency, true};
  } else if (section == "couplings" && field == "rate_hz") {
    std::size_t i = 0;
    try {
      std::size_t used = 0;
      i = std::stoul(name, &used);
      if (used != name.size()) throw fail();
    } catch (const std::logic_error&) {
      throw fail();
    }
    if (i < m.couplings.size()) return {&m.couplings[i].rate, true};
  } else if (section == "ports" && (field == "rate_hz" || field == "temperature_k")) {
    if (auto* x = by_name(m.ports, name)) return field == "rate_hz" ? Target{&x->rate, true} : Target{&x->temperature, false};
  }
  throw fail();
}

}  // namespace

std::vector<std::string> parameter_paths(const TransducerModel& m) {
  std::vector<std::string> out;
  for (const auto& x : m.bands) out.push_back("bands." + x.name + ".center_hz");
  for (const auto& x : m.modes) out.push_back("modes." + x.name + ".resonance_hz");
  for (const auto& x : m.drives) out.push_back("drives." + x.name + ".frequency_hz");
  for (std::size_t i = 0; i < m.couplings.size(); ++i) out.push_back("couplings." + std::to_string(i) + ".rate_hz");
  for (const auto& x : m.ports) {
    out.push_back("ports." + x.name + ".rate_hz");
    out.push_back("ports." + x.name + ".temperature_k");
  }
  return out;
}

double get_parameter(const TransducerModel& model, const std::string& path) {
  auto t = resolve(const_cast<TransducerModel&>(model), path);
  return t.angular ? static_cast<double>(file_hz(*t.value)) : *t.value;
}

void set_parameter(TransducerModel& model, const std::string& path, double value) {
  auto t = resolve(model, path);
  *t.value = t.angular ? file_angular(value) : value;
}

std::pair<std::string, double> parse_assignment(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigurationError("override '" + s + "': expected key=value");
  const std::string key = s.substr(0, eq), text = s.substr(eq + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw ConfigurationError("override '" + s + "': value is not a finite number");
  return {key, v};
}

void apply_overrides(TransducerModel& model, const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    const auto [k, v] = parse_assignment(a);
    set_parameter(model, k, v);
  }
}

}  // namespace qtr
