#include "config.hpp"

#include <fstream>
#include <numbers>
#include <set>

#include "hfgate/errors.hpp"

namespace hfgate::cli {

namespace {

Json default_shapes() {
  Json shapes = Json::array();
  for (const double r0 : {10.0, 20.0}) {
    for (const double z0 : {5.0, 10.0}) shapes.push_back({{"r0_nm", r0}, {"z0_nm", z0}});
  }
  return shapes;
}

enum class Kind { number, string, boolean, array, object, null };

Kind kind_of(const Json& j) {
  if (j.is_number()) return Kind::number;
  if (j.is_string()) return Kind::string;
  if (j.is_boolean()) return Kind::boolean;
  if (j.is_array()) return Kind::array;
  if (j.is_object()) return Kind::object;
  return Kind::null;
}

const Json& require(const Json& params, const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) throw InputError("missing parameter '" + key + "'");
  return *it;
}

}  // namespace

ConfigFile parse_config(const Json& doc) {
  if (!doc.is_object()) throw InputError("config must be a JSON object");
  static const std::set<std::string> known = {"subcommand", "seed",    "workers", "registry",
                                              "params",     "tool",    "version", "outputs",
                                              "notes"};
  ConfigFile cfg;
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw InputError("unknown config key '" + key + "'");
    if (key == "subcommand") {
      if (!value.is_string()) throw InputError("'subcommand' must be a string");
      cfg.subcommand = value.get<std::string>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw InputError("'seed' must be a non-negative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "workers") {
      if (!value.is_number_unsigned()) throw InputError("'workers' must be a non-negative integer");
      cfg.workers = value.get<unsigned>();
    } else if (key == "registry") {
      cfg.registry_set = true;
      if (value.is_string()) {
        cfg.registry_path = value.get<std::string>();
      } else if (!value.is_null()) {
        throw InputError("'registry' must be a path or null");
      }
    } else if (key == "params") {
      if (!value.is_object()) throw InputError("'params' must be an object");
      cfg.params = value;
    }
  }
  return cfg;
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

Json default_params(const std::string& sub) {
  if (sub == "table1") return Json::object();
  if (sub == "fig3") {
    return {{"isotope", "119Sn"},
            {"shapes", default_shapes()},
            {"theta_v", {0.0, std::numbers::pi}},
            {"threshold_min_hz", 1e3},
            {"threshold_max_hz", 1e6},
            {"threshold_points", 31},
            {"cutoff_factor", 5.0}};
  }
  if (sub == "fig4") {
    return {{"mode", "both"},
            {"isotope", "119Sn"},
            {"a_khz", {100.0, 200.0, 400.0}},
            {"b_min_t", 1e-4},
            {"b_max_t", 0.1},
            {"b_points", 61},
            {"b_marks_t", {1.1e-3, 15e-3}},
            {"b0_t", 1.1e-3},
            {"ramp_min_s", 1e-9},
            {"ramp_max_s", 1e-6},
            {"ramp_points", 31},
            {"steps_per_cycle", 200.0}};
  }
  if (sub == "fig5") {
    return {{"s_min", 1e-7},
            {"s_max", 1e-1},
            {"s_points", 61},
            {"a", 0.34},
            {"m", 1},
            {"kappa", 4.0},
            {"c_r0", {0.1, 0.01, 0.001}},
            {"headline_ratio_bound", 1e-5}};
  }
  if (sub == "fig6") {
    return {{"isotope", "29Si"},
            {"shapes", default_shapes()},
            {"ppm", {46900.0, 500.0, 50.0}},
            {"samples", 500},
            {"random_valley_phase", true},
            {"theta_v", 0.0},
            {"cutoff_factor", 5.0}};
  }
  if (sub == "table2") {
    return {{"t2_star_us", {1.0, 10.0, 100.0}}, {"a_khz", {100.0, 200.0, 400.0}}};
  }
  if (sub == "appendix") {
    return {{"eta_ratio_c", nullptr}, {"eta_ratio_pb", nullptr}};
  }
  if (sub == "a-coeff") {
    return {{"shapes", default_shapes()},
            {"ppm", {500.0, 1000.0}},
            {"samples", 400},
            {"cutoff_factor", 5.0}};
  }
  if (sub == "sweetspot-demo") {
    return {{"r0_nm", 20.0},
            {"z0_nm", 10.0},
            {"site_nm", {0.0, 0.0, 0.0}},
            {"valley_base", -1.7},
            {"valley_amplitude", 2.0},
            {"valley_wavelength_nm", 125.0},
            {"noise_sigma_nm", {0.05, 0.0}},
            {"samples", 20000}};
  }
  throw InputError("unknown subcommand '" + sub + "'");
}

void merge_params(Json& base, const Json& user, const std::string& where) {
  if (!user.is_object()) throw InputError(where + " must be an object");
  for (const auto& [key, value] : user.items()) {
    const auto it = base.find(key);
    if (it == base.end()) throw InputError("unknown parameter '" + key + "' in " + where);
    const Kind want = kind_of(*it);
    const Kind got = kind_of(value);
    if (want == Kind::null) {
      if (got != Kind::null && got != Kind::number) {
        throw InputError("parameter '" + key + "' must be a number or null");
      }
      *it = value;
    } else if (want != got) {
      throw InputError("parameter '" + key + "' in " + where + " has the wrong type");
    } else if (want == Kind::object) {
      merge_params(*it, value, where + "." + key);
    } else {
      *it = value;
    }
  }
}

double get_number(const Json& params, const std::string& key) {
  const Json& v = require(params, key);
  if (!v.is_number()) throw InputError("parameter '" + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const Json& params, const std::string& key) {
  const Json& v = require(params, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw InputError("parameter '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

int get_int(const Json& params, const std::string& key) {
  const Json& v = require(params, key);
  if (!v.is_number_integer()) throw InputError("parameter '" + key + "' must be an integer");
  return v.get<int>();
}

bool get_bool(const Json& params, const std::string& key) {
  const Json& v = require(params, key);
  if (!v.is_boolean()) throw InputError("parameter '" + key + "' must be true or false");
  return v.get<bool>();
}

std::string get_string(const Json& params, const std::string& key) {
  const Json& v = require(params, key);
  if (!v.is_string()) throw InputError("parameter '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> get_numbers(const Json& params, const std::string& key) {
  const Json& v = require(params, key);
  if (!v.is_array()) throw InputError("parameter '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw InputError("parameter '" + key + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<ShapeParam> get_shapes(const Json& params, const std::string& key) {
  const Json& v = require(params, key);
  if (!v.is_array() || v.empty()) throw InputError("parameter '" + key + "' must list shapes");
  std::vector<ShapeParam> out;
  for (const auto& s : v) {
    if (!s.is_object() || s.size() != 2 || !s.contains("r0_nm") || !s.contains("z0_nm")) {
      throw InputError("each shape must be an object with exactly r0_nm and z0_nm");
    }
    out.push_back({get_number(s, "r0_nm"), get_number(s, "z0_nm")});
  }
  return out;
}

Json make_manifest(const RunContext& ctx, const std::vector<std::string>& outputs,
                   const Json& notes, const std::string& version) {
  Json m;
  m["tool"] = "hfgate";
  m["version"] = version;
  m["subcommand"] = ctx.subcommand;
  m["seed"] = ctx.seed;
  m["workers"] = ctx.workers;
  m["registry"] = ctx.registry_path ? Json(*ctx.registry_path) : Json(nullptr);
  m["params"] = ctx.params;
  m["outputs"] = outputs;
  m["notes"] = notes;
  return m;
}

}  // namespace hfgate::cli
