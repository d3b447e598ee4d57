#include "hfgate/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "hfgate/errors.hpp"
#include "hfgate/parallel.hpp"

#ifndef HFGATE_VERSION
#define HFGATE_VERSION "0.0.0"
#endif

namespace hfgate::cli {

namespace {

using Runner = CommandResult (*)(const RunContext&, const IsotopeRegistry&);

struct Subcommand {
  const char* name;
  const char* description;
  Runner runner;
};

const Subcommand kSubcommands[] = {
    {"table1", "Nuclide property table", run_table1},
    {"fig3", "Count of bath sites above a hyperfine threshold", run_fig3},
    {"fig4", "Flip-flop error versus field and ramp time", run_fig4},
    {"fig5", "ZZ error bound versus coherence-ratio bound", run_fig5},
    {"fig6", "Sampled T2* distribution of the host bath", run_fig6},
    {"table2", "Overhauser Z error for gate time and T2*", run_table2},
    {"appendix", "Group-IV contact-density ratios and quadratic fits", run_appendix},
    {"a-coeff", "Sampled sweet-spot coefficient a", run_a_coeff},
    {"sweetspot-demo", "Sweet spot of one site under lateral noise", run_sweetspot_demo},
};

// A command-line flag bound to one parameter key; applied only when given.
struct FlagBinding {
  CLI::Option* option;
  std::function<void(Json&)> apply;
};

template <typename T>
void bind_flag(CLI::App* sub, std::vector<FlagBinding>& flags, const std::string& flag,
          const std::string& key, const std::string& help, std::shared_ptr<T> storage) {
  auto* opt = sub->add_option(flag, *storage, help);
  flags.push_back({opt, [key, storage](Json& p) { p[key] = *storage; }});
}

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("HFGATE_OUT"); env && *env) return env;
  return ".";
}

int execute(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hyperfine gate model toolkit", "hfgate"};
  app.set_version_flag("--version", HFGATE_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  unsigned workers = 1;
  std::string registry_path;
  auto* config_opt = app.add_option("--config", config_path, "JSON config or manifest to replay");
  auto* seed_opt = app.add_option("--seed", seed, "Root seed for all random streams");
  auto* out_opt = app.add_option("--out", out_dir, "Output directory (default $HFGATE_OUT or .)");
  auto* workers_opt = app.add_option("--workers", workers, "Worker threads, 0 for all cores");
  auto* registry_opt = app.add_option("--registry", registry_path, "Registry override file");

  std::map<std::string, std::vector<FlagBinding>> flags;
  std::map<CLI::App*, const Subcommand*> by_app;
  for (const auto& sc : kSubcommands) {
    auto* sub = app.add_subcommand(sc.name, sc.description);
    by_app[sub] = &sc;
    auto& f = flags[sc.name];
    const std::string name = sc.name;
    if (name == "fig3") {
      bind_flag(sub, f, "--isotope", "isotope", "Nuclide symbol", std::make_shared<std::string>());
      bind_flag(sub, f, "--cutoff-factor", "cutoff_factor", "Support radius in units of r0",
           std::make_shared<double>());
      bind_flag(sub, f, "--threshold-points", "threshold_points", "Threshold grid size",
           std::make_shared<std::uint64_t>());
    } else if (name == "fig4") {
      bind_flag(sub, f, "--mode", "mode", "instantaneous, ramp, or both",
           std::make_shared<std::string>());
      bind_flag(sub, f, "--a-khz", "a_khz", "Hyperfine strengths in kHz",
           std::make_shared<std::vector<double>>());
      bind_flag(sub, f, "--isotope", "isotope", "Nuclide symbol", std::make_shared<std::string>());
      bind_flag(sub, f, "--steps-per-cycle", "steps_per_cycle", "Integration steps per fastest period",
           std::make_shared<double>());
    } else if (name == "fig5") {
      bind_flag(sub, f, "--a", "a", "Sweet-spot coefficient a", std::make_shared<double>());
      bind_flag(sub, f, "--m", "m", "Number of refocusing pulses", std::make_shared<int>());
      bind_flag(sub, f, "--kappa", "kappa", "Valley gradient factor", std::make_shared<double>());
      bind_flag(sub, f, "--ratio-bound", "headline_ratio_bound", "Ratio bound for the headline rows",
           std::make_shared<double>());
    } else if (name == "fig6") {
      bind_flag(sub, f, "--samples", "samples", "Realizations per case",
           std::make_shared<std::uint64_t>());
      bind_flag(sub, f, "--isotope", "isotope", "Nuclide symbol", std::make_shared<std::string>());
      bind_flag(sub, f, "--ppm", "ppm", "Concentrations in ppm", std::make_shared<std::vector<double>>());
    } else if (name == "table2") {
      bind_flag(sub, f, "--t2-star-us", "t2_star_us", "T2* values in microseconds",
           std::make_shared<std::vector<double>>());
      bind_flag(sub, f, "--a-khz", "a_khz", "Hyperfine strengths in kHz",
           std::make_shared<std::vector<double>>());
    } else if (name == "a-coeff") {
      bind_flag(sub, f, "--samples", "samples", "Realizations per case",
           std::make_shared<std::uint64_t>());
      bind_flag(sub, f, "--ppm", "ppm", "Concentrations in ppm", std::make_shared<std::vector<double>>());
    } else if (name == "sweetspot-demo") {
      bind_flag(sub, f, "--samples", "samples", "Noise samples", std::make_shared<std::uint64_t>());
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputFailure;
  }

  const Subcommand* chosen = nullptr;
  for (const auto& [sub, sc] : by_app) {
    if (sub->parsed()) {
      chosen = sc;
    }
  }
  if (!chosen) throw InputError("no subcommand given");

  RunContext ctx;
  ctx.subcommand = chosen->name;
  ctx.params = default_params(ctx.subcommand);
  if (config_opt->count() > 0) {
    const ConfigFile cfg = load_config(config_path);
    if (cfg.subcommand && *cfg.subcommand != ctx.subcommand) {
      throw InputError("config is for subcommand '" + *cfg.subcommand + "', not '" +
                       ctx.subcommand + "'");
    }
    if (cfg.seed) ctx.seed = *cfg.seed;
    if (cfg.workers) ctx.workers = *cfg.workers;
    if (cfg.registry_set) ctx.registry_path = cfg.registry_path;
    merge_params(ctx.params, cfg.params);
  }
  if (seed_opt->count() > 0) ctx.seed = seed;
  if (workers_opt->count() > 0) ctx.workers = workers;
  if (registry_opt->count() > 0) ctx.registry_path = registry_path;
  for (const auto& binding : flags[ctx.subcommand]) {
    if (binding.option->count() == 0) continue;
    Json overlay = Json::object();
    binding.apply(overlay);
    merge_params(ctx.params, overlay, "command-line flags");
  }

  ctx.out_dir = out_opt->count() > 0 ? std::filesystem::path(out_dir) : default_out_dir();
  std::error_code ec;
  std::filesystem::create_directories(ctx.out_dir, ec);
  if (ec) throw InputError("cannot create output directory " + ctx.out_dir.string());

  IsotopeRegistry registry = IsotopeRegistry::builtin();
  if (ctx.registry_path) registry.apply_overrides_file(*ctx.registry_path);

  // Thread count never changes results; resolve it only for execution.
  RunContext exec = ctx;
  exec.workers = resolve_workers(ctx.workers);
  CommandResult result = chosen->runner(exec, registry);

  std::vector<std::string> outputs = result.files;
  outputs.push_back("manifest.json");
  {
    std::ofstream manifest(ctx.out_dir / "manifest.json", std::ios::binary);
    if (!manifest) throw InputError("cannot write manifest in " + ctx.out_dir.string());
    manifest << make_manifest(ctx, outputs, result.notes, HFGATE_VERSION).dump(2) << '\n';
  }
  for (const auto& f : outputs) out << (ctx.out_dir / f).string() << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return execute(argc, argv, out, err);
  } catch (const InputError& e) {
    err << "hfgate: input error: " << e.what() << '\n';
    return kInputFailure;
  } catch (const nlohmann::json::exception& e) {
    err << "hfgate: input error: " << e.what() << '\n';
    return kInputFailure;
  } catch (const std::invalid_argument& e) {
    err << "hfgate: input error: " << e.what() << '\n';
    return kInputFailure;
  } catch (const NumericalError& e) {
    err << "hfgate: numerical error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "hfgate: error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace hfgate::cli
