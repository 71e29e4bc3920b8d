#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cca/automaton.hpp"
#include "cca/group.hpp"
#include "cca/kernel.hpp"
#include "cca/renewal.hpp"

namespace cca {

/// `key = value` lines grouped under `[section]` headers. Keys before the
/// first header belong to the section "". `#` starts a comment.
///
/// Every value remembers its line so conversion errors point at it, and every
/// lookup is recorded so that unknown (never read) keys can be reported.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  std::string get_string(const std::string& section, const std::string& key,
                         std::optional<std::string> fallback = std::nullopt) const;
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::optional<std::int64_t> fallback = std::nullopt) const;
  std::uint64_t get_uint(const std::string& section, const std::string& key,
                         std::optional<std::uint64_t> fallback = std::nullopt) const;
  double get_double(const std::string& section, const std::string& key,
                    std::optional<double> fallback = std::nullopt) const;
  bool get_bool(const std::string& section, const std::string& key,
                std::optional<bool> fallback = std::nullopt) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<std::uint64_t> get_uints(const std::string& section, const std::string& key) const;

  /// Overrides or adds a value (flag overrides).
  void set(const std::string& section, const std::string& key, const std::string& value);

  /// Raises ConfigError for the first key that was never read, looking only at
  /// `sections` when given.
  void check_unused(const std::vector<std::string>& sections = {}) const;

  /// FNV-1a 64-bit digest of the normalized entries.
  std::uint64_t digest() const;
  std::string digest_hex() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };
  const Entry& entry(const std::string& section, const std::string& key) const;
  const Entry* find(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, Entry>> sections_;
};

/// Parses a decimal with at most 12 fractional digits (scientific notation allowed).
double parse_decimal(const std::string& text, int line = 0);

GroupSpec load_group(const Config& cfg);
AutomatonParams load_automaton(const Config& cfg, const GroupSpec& group);
KernelSpec load_kernel(const Config& cfg, const GroupSpec& group);
/// [past] w = ..., newest first; empty when absent.
std::vector<Elem> load_past(const Config& cfg, const GroupSpec& group);
InterarrivalLaw load_law(const Config& cfg, const std::optional<KernelSpec>& kernel);

}  // namespace cca
