#include "nsplast/config.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <initializer_list>
#include <optional>
#include <string_view>

namespace nsplast {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (std::string_view key : allowed)
      if (key == it.key()) {
        known = true;
        break;
      }
    if (!known) throw ConfigError("config: unknown key '" + path + it.key() + "'");
  }
}

double get_number(const json& obj, const char* key, std::optional<double> fallback,
                  const std::string& path) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("config: missing required key '" + path + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError("config: '" + path + key + "' must be a number");
  return v.get<double>();
}

std::string get_string(const json& obj, const char* key, std::optional<std::string> fallback,
                       const std::string& path) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("config: missing required key '" + path + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_string())
    throw ConfigError("config: '" + path + key + "' must be a string");
  return v.get<std::string>();
}

LoadingProgram parse_loading(const json& j) {
  if (!j.is_object()) throw ConfigError("config: 'loading' must be an object");
  LoadingProgram loading;
  const std::string kind = get_string(j, "kind", std::nullopt, "loading.");
  if (kind == "free") {
    reject_unknown_keys(j, {"kind"}, "loading.");
    loading.kind = LoadingProgram::Kind::Free;
  } else if (kind == "external_force") {
    reject_unknown_keys(j, {"kind", "amplitude", "angular_frequency"}, "loading.");
    loading.kind = LoadingProgram::Kind::ExternalForce;
    loading.amplitude = get_number(j, "amplitude", std::nullopt, "loading.");
    loading.angular_frequency = get_number(j, "angular_frequency", std::nullopt, "loading.");
  } else if (kind == "prescribed_strain") {
    reject_unknown_keys(j, {"kind", "table"}, "loading.");
    loading.kind = LoadingProgram::Kind::PrescribedStrain;
    if (!j.contains("table") || !j.at("table").is_array())
      throw ConfigError("config: 'loading.table' must be an array of [t, eps] pairs");
    for (std::size_t i = 0; i < j.at("table").size(); ++i) {
      const json& knot = j.at("table")[i];
      if (!knot.is_array() || knot.size() != 2 || !knot[0].is_number() || !knot[1].is_number())
        throw ConfigError("config: 'loading.table[" + std::to_string(i) +
                          "]' must be a [t, eps] number pair");
      loading.strain_table.emplace_back(knot[0].get<double>(), knot[1].get<double>());
    }
  } else {
    throw ConfigError("config: 'loading.kind' must be one of free, external_force, "
                      "prescribed_strain (got '" + kind + "')");
  }
  return loading;
}

}  // namespace

SimConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: root must be an object");
  reject_unknown_keys(j,
                      {"regime", "E", "m", "sigma_Y0", "K", "H", "omega", "T0", "T", "dt",
                       "t_end", "stride", "initial", "loading", "event_localization",
                       "viscosity"},
                      "");

  SimConfig config;
  try {
    config.model.regime = regime_from_string(get_string(j, "regime", std::nullopt, ""));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  config.model.young = get_number(j, "E", std::nullopt, "");
  config.model.mass = get_number(j, "m", std::nullopt, "");
  config.model.sigma_y0 = get_number(j, "sigma_Y0", std::nullopt, "");
  config.model.iso_modulus = get_number(j, "K", 0.0, "");
  config.model.kin_modulus = get_number(j, "H", 0.0, "");

  const bool thermal = is_thermal(config.model.regime);
  for (const char* key : {"omega", "T0", "T"})
    if (!thermal && j.contains(key))
      throw ConfigError(std::string("config: '") + key +
                        "' is only valid for thermal regimes");
  if (thermal) {
    config.model.temperature = get_number(j, "T", std::nullopt, "");
    config.model.t_ref = get_number(j, "T0", config.model.temperature, "");
    config.model.softening = get_number(j, "omega", 0.0, "");
  }

  config.dt = get_number(j, "dt", 1e-4, "");
  config.t_end = get_number(j, "t_end", std::nullopt, "");
  config.viscosity = get_number(j, "viscosity", 0.0, "");
  if (j.contains("stride")) {
    if (!j.at("stride").is_number_integer())
      throw ConfigError("config: 'stride' must be an integer");
    config.stride = j.at("stride").get<int>();
  }
  try {
    config.localization =
        localization_from_string(get_string(j, "event_localization", "per_step", ""));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (j.contains("initial")) {
    const json& init = j.at("initial");
    if (!init.is_object()) throw ConfigError("config: 'initial' must be an object");
    reject_unknown_keys(init, {"t", "eps", "v", "eps_p", "xi_i", "xi_k", "S_e", "S_p"},
                        "initial.");
    config.initial.time = get_number(init, "t", 0.0, "initial.");
    config.initial.strain = get_number(init, "eps", 0.0, "initial.");
    config.initial.strain_rate = get_number(init, "v", 0.0, "initial.");
    config.initial.plastic_strain = get_number(init, "eps_p", 0.0, "initial.");
    config.initial.hardening_iso = get_number(init, "xi_i", 0.0, "initial.");
    config.initial.hardening_kin = get_number(init, "xi_k", 0.0, "initial.");
    config.initial.entropy_elastic = get_number(init, "S_e", 0.0, "initial.");
    config.initial.entropy_plastic = get_number(init, "S_p", 0.0, "initial.");
  }

  if (j.contains("loading")) config.loading = parse_loading(j.at("loading"));

  try {
    config.validate();  // model, loading, stability bound, cross-field checks
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return config;
}

std::string config_to_json(const SimConfig& config) {
  json j;
  j["regime"] = to_string(config.model.regime);
  j["E"] = config.model.young;
  j["m"] = config.model.mass;
  j["sigma_Y0"] = config.model.sigma_y0;
  j["K"] = config.model.iso_modulus;
  j["H"] = config.model.kin_modulus;
  if (is_thermal(config.model.regime)) {
    j["omega"] = config.model.softening;
    j["T0"] = config.model.t_ref;
    j["T"] = config.model.temperature;
  }
  j["dt"] = config.dt;
  j["t_end"] = config.t_end;
  j["stride"] = config.stride;
  j["viscosity"] = config.viscosity;
  j["event_localization"] = to_string(config.localization);
  j["initial"] = {{"t", config.initial.time},
                  {"eps", config.initial.strain},
                  {"v", config.initial.strain_rate},
                  {"eps_p", config.initial.plastic_strain},
                  {"xi_i", config.initial.hardening_iso},
                  {"xi_k", config.initial.hardening_kin},
                  {"S_e", config.initial.entropy_elastic},
                  {"S_p", config.initial.entropy_plastic}};
  switch (config.loading.kind) {
    case LoadingProgram::Kind::Free:
      j["loading"] = {{"kind", "free"}};
      break;
    case LoadingProgram::Kind::ExternalForce:
      j["loading"] = {{"kind", "external_force"},
                      {"amplitude", config.loading.amplitude},
                      {"angular_frequency", config.loading.angular_frequency}};
      break;
    case LoadingProgram::Kind::PrescribedStrain: {
      json table = json::array();
      for (const auto& [t, eps] : config.loading.strain_table)
        table.push_back(json::array({t, eps}));
      j["loading"] = {{"kind", "prescribed_strain"}, {"table", table}};
      break;
    }
  }
  return j.dump(2) + "\n";
}

}  // namespace nsplast
