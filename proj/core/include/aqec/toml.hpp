#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace aqec::toml {

/// Minimal TOML subset: [sections], key = value with strings, numbers,
/// booleans and flat arrays, plus # comments. Enough for device and
/// experiment files; parse errors carry the line number.
using Value = std::variant<double, std::string, bool, std::vector<double>>;

struct Table {
  std::map<std::string, std::map<std::string, Value>> sections;

  bool has(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key) const;
  double number_or(const std::string& section, const std::string& key, double fallback) const;
  std::string text(const std::string& section, const std::string& key) const;
  std::string text_or(const std::string& section, const std::string& key,
                      const std::string& fallback) const;
  bool boolean_or(const std::string& section, const std::string& key, bool fallback) const;
};

Table parse(const std::string& content);
Table parse_file(const std::string& path);

}  // namespace aqec::toml
