#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hfgate::cli {

using Json = nlohmann::ordered_json;

// Fully resolved inputs of one run; everything here except out_dir is
// recorded in the manifest.
struct RunContext {
  std::string subcommand;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::optional<std::string> registry_path;
  Json params;
  std::filesystem::path out_dir;
};

// Top-level config keys. "tool", "version", "outputs" and "notes" are
// written into manifests and ignored on input.
struct ConfigFile {
  std::optional<std::string> subcommand;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> registry_path;
  bool registry_set = false;  // explicit null clears a default
  Json params = Json::object();
};

ConfigFile load_config(const std::filesystem::path& path);
ConfigFile parse_config(const Json& doc);

// Default parameter block for a subcommand, in manifest key order.
Json default_params(const std::string& subcommand);

// Overlays `user` on `base`. Keys must already exist in `base` and keep their
// JSON kind (number, string, bool, array, object); nested objects merge
// recursively and arrays are replaced whole.
void merge_params(Json& base, const Json& user, const std::string& where = "params");

double get_number(const Json& params, const std::string& key);
std::uint64_t get_count(const Json& params, const std::string& key);
int get_int(const Json& params, const std::string& key);
bool get_bool(const Json& params, const std::string& key);
std::string get_string(const Json& params, const std::string& key);
std::vector<double> get_numbers(const Json& params, const std::string& key);

struct ShapeParam {
  double r0_nm;
  double z0_nm;
};
std::vector<ShapeParam> get_shapes(const Json& params, const std::string& key);

Json make_manifest(const RunContext& ctx, const std::vector<std::string>& outputs,
                   const Json& notes, const std::string& version);

}  // namespace hfgate::cli
