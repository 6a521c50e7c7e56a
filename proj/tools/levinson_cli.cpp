// Command-line front end: validate | scatter | waveop | winding | report.

#include <string>

#include <CLI11.hpp>

#include "levinson/cli/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Scattering theory for half-line discrete Schrodinger operators"};
  app.require_subcommand(1);

  std::string config;
  levinson::cli::Options options;
  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", config, "JSON configuration file")->required();
    sub->add_flag("--check", options.check, "exit 5 when an identity check fails");
    sub->add_flag("--refine", options.refine, "double m_theta, m_beta and n_edge");
    return sub;
  };
  auto* validate = add("validate", "parse and print the normalized configuration");
  auto* scatter = add("scatter", "Jost function, phase shift and bound states");
  auto* waveop = add("waveop", "wave-operator identities and compactness diagnostics");
  auto* winding = add("winding", "boundary curve and its winding number");
  auto* report = add("report", "run every check and write report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : levinson::cli::exit_config;
  }

  namespace lc = levinson::cli;
  if (validate->parsed()) return lc::cmd_validate(config, options);
  if (scatter->parsed()) return lc::cmd_scatter(config, options);
  if (waveop->parsed()) return lc::cmd_waveop(config, options);
  if (winding->parsed()) return lc::cmd_winding(config, options);
  if (report->parsed()) return lc::cmd_report(config, options);
  return lc::exit_config;
}
