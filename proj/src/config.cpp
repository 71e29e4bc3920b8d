#include "cca/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cca/error.hpp"

namespace cca {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

std::string where(const std::string& section, const std::string& key) {
  return section.empty() ? key : "[" + section + "] " + key;
}

std::uint64_t parse_unsigned(const std::string& text, int line, const std::string& what) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(what + ": '" + text + "' is not a nonnegative integer", line);
  }
  return v;
}

}  // namespace

double parse_decimal(const std::string& text, int line) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("'" + t + "' is not a decimal number", line);
  }
  const auto dot = t.find('.');
  if (dot != std::string::npos) {
    std::size_t digits = 0;
    for (std::size_t i = dot + 1; i < t.size() && std::isdigit(static_cast<unsigned char>(t[i])); ++i) {
      ++digits;
    }
    if (digits > 12) throw ConfigError("'" + t + "' has more than 12 fractional digits", line);
  }
  return v;
}

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  cfg.sections_[""];
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      if (!valid_name(section)) throw ConfigError("bad section name '" + section + "'", line);
      cfg.sections_[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (!valid_name(key)) throw ConfigError("bad key '" + key + "'", line);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line);
    auto& sec = cfg.sections_[section];
    if (sec.count(key)) throw ConfigError("duplicate key '" + where(section, key) + "'", line);
    sec[key] = Entry{value, line, false};
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto e = s->second.find(key);
  if (e == s->second.end()) return nullptr;
  e->second.used = true;
  return &e->second;
}

const Config::Entry& Config::entry(const std::string& section, const std::string& key) const {
  if (const Entry* e = find(section, key)) return *e;
  throw ConfigError("missing required key " + where(section, key));
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

bool Config::has_section(const std::string& section) const { return sections_.count(section) > 0; }

std::string Config::get_string(const std::string& section, const std::string& key,
                               std::optional<std::string> fallback) const {
  if (!has(section, key) && fallback) return *fallback;
  return entry(section, key).value;
}

std::int64_t Config::get_int(const std::string& section, const std::string& key,
                             std::optional<std::int64_t> fallback) const {
  if (!has(section, key) && fallback) return *fallback;
  const Entry& e = entry(section, key);
  std::int64_t v = 0;
  const auto* end = e.value.data() + e.value.size();
  const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(where(section, key) + ": '" + e.value + "' is not an integer", e.line);
  }
  return v;
}

std::uint64_t Config::get_uint(const std::string& section, const std::string& key,
                               std::optional<std::uint64_t> fallback) const {
  if (!has(section, key) && fallback) return *fallback;
  const Entry& e = entry(section, key);
  return parse_unsigned(e.value, e.line, where(section, key));
}

double Config::get_double(const std::string& section, const std::string& key,
                          std::optional<double> fallback) const {
  if (!has(section, key) && fallback) return *fallback;
  const Entry& e = entry(section, key);
  return parse_decimal(e.value, e.line);
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      std::optional<bool> fallback) const {
  if (!has(section, key) && fallback) return *fallback;
  const Entry& e = entry(section, key);
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError(where(section, key) + ": '" + e.value + "' is not a boolean", e.line);
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  std::vector<double> out;
  for (const auto& item : split_list(e.value)) out.push_back(parse_decimal(item, e.line));
  return out;
}

std::vector<std::uint64_t> Config::get_uints(const std::string& section,
                                             const std::string& key) const {
  const Entry& e = entry(section, key);
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(e.value)) {
    out.push_back(parse_unsigned(item, e.line, where(section, key)));
  }
  return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  auto& e = sections_[section][key];
  e.value = value;
}

void Config::check_unused(const std::vector<std::string>& sections) const {
  for (const auto& [section, entries] : sections_) {
    if (!sections.empty() && std::find(sections.begin(), sections.end(), section) == sections.end()) {
      continue;
    }
    for (const auto& [key, e] : entries) {
      if (!e.used) throw ConfigError("unknown key " + where(section, key), e.line);
    }
  }
}

std::uint64_t Config::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  for (const auto& [section, entries] : sections_) {
    for (const auto& [key, e] : entries) {
      feed(section);
      feed(key);
      feed(e.value);
    }
  }
  return h;
}

std::string Config::digest_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest()));
  return buf;
}

GroupSpec load_group(const Config& cfg) {
  const auto p = cfg.get_uint("group", "p", 2);
  std::vector<int> exps{1};
  if (cfg.has("group", "exponents")) {
    exps.clear();
    for (auto e : cfg.get_uints("group", "exponents")) exps.push_back(static_cast<int>(e));
  }
  try {
    return GroupSpec(p, exps);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[group]: ") + e.what());
  } catch (const StructuralError& e) {
    throw ConfigError(std::string("[group]: ") + e.what());
  }
}

AutomatonParams load_automaton(const Config& cfg, const GroupSpec& group) {
  const auto mu = cfg.get_int("automaton", "mu", 1);
  const auto nu = cfg.get_int("automaton", "nu", 1);
  const bool allow = cfg.get_bool("automaton", "allow_noncoprime", false);
  try {
    return AutomatonParams(mu, nu, group, allow ? Coprimality::allow : Coprimality::enforce);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[automaton]: ") + e.what());
  }
}

KernelSpec load_kernel(const Config& cfg, const GroupSpec& group) {
  const std::uint64_t q = group.order();
  const std::string family = cfg.get_string("kernel", "family", std::string("product"));
  try {
    if (family == "product") {
      if (!cfg.has("kernel", "pi")) return KernelSpec::product(group, uniform_measure(group));
      return KernelSpec::product(group, cfg.get_doubles("kernel", "pi"));
    }
    if (family == "markov") {
      const auto order = static_cast<int>(cfg.get_uint("kernel", "order", 1));
      std::vector<Elem> init;
      if (cfg.has("kernel", "initial_past")) {
        for (auto v : cfg.get_uints("kernel", "initial_past")) init.push_back(static_cast<Elem>(v));
      }
      if (cfg.has("kernel", "stay")) {
        if (order != 1) throw ConfigError("[kernel] stay needs order = 1");
        auto k = KernelSpec::markov_stay(group, cfg.get_double("kernel", "stay"));
        if (!init.empty()) {
          k = KernelSpec::markov(group, 1, k.as_markov().transition, init);
        }
        return k;
      }
      const auto flat = cfg.get_doubles("kernel", "transition");
      std::vector<std::vector<double>> rows;
      if (flat.size() % q != 0) throw ConfigError("[kernel] transition length is not a multiple of q");
      for (std::size_t i = 0; i < flat.size(); i += q) {
        rows.emplace_back(flat.begin() + i, flat.begin() + i + q);
      }
      return KernelSpec::markov(group, order, std::move(rows), init);
    }
    if (family == "mixture") {
      const auto weights = cfg.get_doubles("kernel", "weights");
      const auto flat = cfg.get_doubles("kernel", "tables");
      const std::size_t L = weights.size();
      if (flat.size() != L * q * q) {
        throw ConfigError("[kernel] tables needs weights x q x q = " + std::to_string(L * q * q) +
                          " entries");
      }
      std::vector<std::vector<std::vector<double>>> tables(
          L, std::vector<std::vector<double>>(q, std::vector<double>(q)));
      std::size_t at = 0;
      for (auto& t : tables) {
        for (auto& row : t) {
          for (auto& v : row) v = flat[at++];
        }
      }
      return KernelSpec::mixture(group, weights, cfg.get_double("kernel", "rho", 0.5),
                                 std::move(tables), cfg.get_double("kernel", "floor", 0.05),
                                 static_cast<Elem>(cfg.get_uint("kernel", "default_tail", 0)));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const CapacityError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("[kernel]: ") + e.what());
  }
  throw ConfigError("[kernel] unknown family '" + family + "' (product, markov, mixture)");
}

std::vector<Elem> load_past(const Config& cfg, const GroupSpec& group) {
  std::vector<Elem> w;
  if (!cfg.has("past", "w")) return w;
  for (auto v : cfg.get_uints("past", "w")) {
    if (v >= group.order()) throw ConfigError("[past] w entry outside the group");
    w.push_back(static_cast<Elem>(v));
  }
  return w;
}

InterarrivalLaw load_law(const Config& cfg, const std::optional<KernelSpec>& kernel) {
  const std::string law = cfg.get_string("renewal", "law", std::string("geometric"));
  try {
    if (law == "geometric") return InterarrivalLaw::geometric(cfg.get_double("renewal", "beta", 0.3));
    if (law == "two_point") {
      return InterarrivalLaw::two_point(cfg.get_uint("renewal", "a"), cfg.get_uint("renewal", "b"),
                                        cfg.get_double("renewal", "pa"));
    }
    if (law == "pmf") return InterarrivalLaw::pmf(cfg.get_doubles("renewal", "pmf"));
    if (law == "kernel") {
      if (!kernel) throw ConfigError("[renewal] law = kernel needs a [kernel] section");
      return InterarrivalLaw::from_kernel(*kernel);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const CapacityError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("[renewal]: ") + e.what());
  }
  throw ConfigError("[renewal] unknown law '" + law + "' (geometric, two_point, pmf, kernel)");
}

}  // namespace cca
