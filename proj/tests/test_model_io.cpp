#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "qtransduce/builtins.hpp"
#include "qtransduce/dynamics.hpp"
#include "qtransduce/errors.hpp"
#include "qtransduce/model_io.hpp"
#include "qtransduce/random_models.hpp"
#include "qtransduce/scattering.hpp"
#include "qtransduce/units.hpp"

using namespace qtr;

namespace {

const char* kSmall = R"({
  "bands": [{"name": "opt", "center_hz": 1e9}],
  "modes": [{"name": "a", "band": "opt", "frame": "rotating", "resonance_hz": 1.0001e9}],
  "ports": [{"name": "p", "mode": "a", "rate_hz": 1e5, "temperature_k": 0.02, "role": "signal+exit"}]
})";

std::string message_of(const std::string& text) {
  try {
    parse_model(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("small file loads in angular units") {
  const auto m = parse_model(kSmall);
  REQUIRE(m.modes.size() == 1);
  CHECK(m.bands[0].center_frequency == file_angular(1e9L));
  CHECK(m.bands[0].center_frequency == doctest::Approx(hz_to_angular(1e9)).epsilon(1e-15));
  CHECK(m.ports[0].rate == doctest::Approx(hz_to_angular(1e5)).epsilon(1e-15));
  CHECK(m.ports[0].temperature == 0.02);
  CHECK(m.ports[0].role == PortRole::signal_exit);
  CHECK_FALSE(validate_model(m).has_errors());
}

TEST_CASE("empty and malformed files are parse errors") {
  CHECK_THROWS_AS(parse_model(""), ParseError);
  const auto msg = message_of("{\n  \"bands\": [\n    {\"name\": }\n]}");
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK_THROWS_AS(load_model_file("/nonexistent/model.json"), ConfigurationError);
}

TEST_CASE("structural errors name the field") {
  CHECK(message_of(R"({"bands": [], "modes": [{"name": "a", "band": "x"}], "ports": []})").find("modes[0].resonance_hz") !=
        std::string::npos);
  CHECK(message_of(R"({"bands": [], "modes": [], "ports": [{"name": "p", "mode": "a", "rate_hz": 1, "role": "sink"}]})")
            .find("ports[0].role") != std::string::npos);
  CHECK(message_of(R"({"bands": [], "modes": [], "ports": [], "extra": 1})").find("extra") != std::string::npos);
  CHECK(message_of(R"([1, 2])").find("object") != std::string::npos);
}

TEST_CASE("unknown band in a mode is reported with its path") {
  std::string text = kSmall;
  text.replace(text.find("\"band\": \"opt\""), 13, "\"band\": \"mw\"");
  const auto report = validate_model(parse_model(text));
  REQUIRE(report.has_errors());
  bool named = false;
  for (const auto& i : report.issues) named = named || i.path == "modes[0].band";
  CHECK(named);
}

TEST_CASE("export and reload is field-for-field identical") {
  for (const char* name : {"electromech", "converter"}) {
    const auto m = load_model({std::nullopt, std::string(name), {}}).model;
    CHECK(parse_model(model_to_text(m)) == m);
  }
  const auto small = parse_model(kSmall);
  CHECK(parse_model(model_to_text(small)) == small);
  const auto path = (std::filesystem::temp_directory_path() / "qtr_roundtrip.json").string();
  const auto em = load_model({std::nullopt, std::string("electromech"), {"g_hz=3.3e4", "T=0.1"}}).model;
  save_model_file(em, path);
  CHECK(load_model_file(path) == em);
  std::remove(path.c_str());
}

TEST_CASE("random models survive the Hz round trip") {
  int identical = 0;
  const auto ms = random_models(50, 3);
  for (const auto& m : ms) identical += parse_model(model_to_text(m)) == m;
  CHECK(identical == 50);
}

TEST_CASE("builtins are valid") {
  const auto em = load_model({std::nullopt, std::string("electromech"), {}});
  CHECK_FALSE(validate_model(em.model).has_errors());
  REQUIRE(em.electromech);
  CHECK(em.omega_sig.value() == em.electromech->omega_m);

  const auto cv = load_model({std::nullopt, std::string("converter"), {}});
  CHECK_FALSE(validate_model(cv.model).has_errors());
  const auto dyn = assemble_dynamics(cv.model);
  const double w = *cv.omega_sig;
  CHECK(eta(transfer_row(dyn, w, Sideband::upper)) > 0.5);
  CHECK(eta(transfer_row(dyn, w, Sideband::lower)) == 0.0);  // beam splitter: no conjugate channel
}

TEST_CASE("electromech overrides") {
  const auto a = load_model({std::nullopt, std::string("electromech"), {"omega_m_hz=4e6", "T=0", "gamma_m_hz=0"}});
  CHECK(a.electromech->omega_m == hz_to_angular(4e6));
  CHECK(a.electromech->omega_drive == a.electromech->omega_lc - a.electromech->omega_m);
  CHECK(a.electromech->T_wg == 0.0);
  CHECK(a.model.ports.size() == 2);
  const auto b = load_model({std::nullopt, std::string("electromech"), {"ports.waveguide.temperature_k=1.5"}});
  CHECK(get_parameter(b.model, "ports.waveguide.temperature_k") == 1.5);
  CHECK_THROWS_AS(load_model({std::nullopt, std::string("electromech"), {"omega_q_hz=1"}}), ConfigurationError);
  CHECK_THROWS_AS(load_model({std::nullopt, std::string("electromech"), {"g_hz=abc"}}), ConfigurationError);
  CHECK_THROWS_AS(load_model({std::nullopt, std::string("nonsense"), {}}), ConfigurationError);
  CHECK_THROWS_AS(load_model({}), ConfigurationError);
}

TEST_CASE("parameter paths") {
  auto m = parse_model(kSmall);
  const auto paths = parameter_paths(m);
  CHECK(paths.size() == 4);
  set_parameter(m, "ports.p.rate_hz", 2e5);
  CHECK(m.ports[0].rate == file_angular(2e5L));
  CHECK(get_parameter(m, "ports.p.rate_hz") == doctest::Approx(2e5));
  CHECK_THROWS_AS(set_parameter(m, "ports.q.rate_hz", 1.0), ConfigurationError);
  CHECK_THROWS_AS(set_parameter(m, "couplings.0.rate_hz", 1.0), ConfigurationError);
  CHECK_THROWS_AS(set_parameter(m, "rate", 1.0), ConfigurationError);
  CHECK_THROWS_AS(parse_assignment("x=1e400"), ConfigurationError);
  CHECK(parse_assignment("a.b.c=-2.5").second == -2.5);
}
