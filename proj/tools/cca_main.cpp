#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "cca/commands.hpp"
#include "cca/config.hpp"
#include "cca/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cesaro convergence experiments for additive group automata"};
  app.require_subcommand(1, 1);

  std::string config_path, out_path, mode, section;
  std::uint64_t seed = 0;
  const std::map<std::string, std::string> about{
      {"simulate", "sample a chain path and mark regeneration times"},
      {"cesaro", "Cesaro averages of iterate laws and their distance to uniform"},
      {"regen-stats", "uniformity and gap statistics of regeneration times"},
      {"density", "sizes of the density-one exponent sets"},
      {"lemma41", "deviation of weighted sums from uniform against the renewal bound"},
      {"verify", "built-in invariant checks as PASS/FAIL lines"}};
  for (const auto& name : cca::command_names()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config_path, "experiment config file");
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out", out_path, "output path (default stdout)");
    if (name == "cesaro") {
      sub->add_option("--mode", mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
    }
    if (name == "verify") sub->add_option("--section", section, "run one section only");
  }
  CLI11_PARSE(app, argc, argv);

  auto* sub = app.get_subcommands().front();
  cca::CommandOptions opts;
  if (sub->count("--seed")) opts.seed = seed;
  if (!mode.empty()) opts.mode = mode;
  if (!section.empty()) opts.section = section;

  try {
    const auto cfg = config_path.empty() ? cca::Config::parse("") : cca::Config::load(config_path);
    if (out_path.empty()) return cca::run_command(sub->get_name(), cfg, opts, std::cout, std::cerr);
    std::ofstream out(out_path);
    if (!out) throw cca::ConfigError("cannot write '" + out_path + "'");
    const int code = cca::run_command(sub->get_name(), cfg, opts, out, std::cerr);
    out.close();
    if (!out) throw cca::ConfigError("write to '" + out_path + "' failed");
    return code;
  } catch (const cca::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return cca::kExitCapacity;
  } catch (const cca::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cca::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cca::exit_code_for(e);
  }
}
