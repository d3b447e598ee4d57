#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "hfgate/isotope.hpp"

namespace hfgate::cli {

struct CommandResult {
  std::vector<std::string> files;  // relative to the output directory
  Json notes = Json::object();
};

CommandResult run_table1(const RunContext& ctx, const IsotopeRegistry& registry);
CommandResult run_fig3(const RunContext& ctx, const IsotopeRegistry& registry);
CommandResult run_fig4(const RunContext& ctx, const IsotopeRegistry& registry);
CommandResult run_fig5(const RunContext& ctx, const IsotopeRegistry& registry);
CommandResult run_fig6(const RunContext& ctx, const IsotopeRegistry& registry);
CommandResult run_table2(const RunContext& ctx, const IsotopeRegistry& registry);
CommandResult run_appendix(const RunContext& ctx, const IsotopeRegistry& registry);
CommandResult run_a_coeff(const RunContext& ctx, const IsotopeRegistry& registry);
CommandResult run_sweetspot_demo(const RunContext& ctx, const IsotopeRegistry& registry);

// Fixed-width text rendering of the Z-error grid, two significant figures.
std::string format_z_error_table(const std::vector<double>& t2_stars_s,
                                 const std::vector<double>& a_hz);

}  // namespace hfgate::cli
