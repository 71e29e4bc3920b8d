#pragma once

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cca/config.hpp"

namespace cca {

/// Command-line overrides applied on top of the config file.
struct CommandOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;     // exact | mc
  std::optional<std::string> section;  // verify filter
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitVerify = 4;

/// Each command writes its CSV (or PASS/FAIL lines) to `out` and one-line
/// summaries to `log`, and returns the exit code.
int cmd_simulate(const Config& cfg, const CommandOptions& opts, std::ostream& out,
                 std::ostream& log);
int cmd_cesaro(const Config& cfg, const CommandOptions& opts, std::ostream& out,
               std::ostream& log);
int cmd_regen_stats(const Config& cfg, const CommandOptions& opts, std::ostream& out,
                    std::ostream& log);
int cmd_density(const Config& cfg, const CommandOptions& opts, std::ostream& out,
                std::ostream& log);
int cmd_lemma41(const Config& cfg, const CommandOptions& opts, std::ostream& out,
                std::ostream& log);
int cmd_verify(const Config& cfg, const CommandOptions& opts, std::ostream& out,
               std::ostream& log);

const std::vector<std::string>& command_names();

/// Dispatches by name; raises ConfigError for an unknown command.
int run_command(const std::string& name, const Config& cfg, const CommandOptions& opts,
                std::ostream& out, std::ostream& log);

/// Exit code for an error escaping a command: 3 for capacity, 2 otherwise.
int exit_code_for(const std::exception& e);

/// Sections read by `verify`, in run order.
const std::vector<std::string>& verify_sections();

}  // namespace cca
