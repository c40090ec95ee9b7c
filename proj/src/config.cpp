#include "rotinv/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rotinv {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigMap parse_config_text(const std::string& text, const std::string& origin) {
  ConfigMap config;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto cut = raw.find('#');
    if (cut != std::string::npos) raw.erase(cut);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;

    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("parse_config: " + origin + ":" + std::to_string(line) +
                               ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("parse_config: " + origin + ":" + std::to_string(line) +
                               ": empty key");
    if (config.contains(key))
      throw std::runtime_error("parse_config: " + origin + ":" + std::to_string(line) +
                               ": duplicate key " + key);
    config[key] = value;
  }
  return config;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_config: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

void apply_overrides(ConfigMap& config, std::span<const std::string> assignments) {
  for (const std::string& assignment : assignments) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::runtime_error("apply_overrides: expected key=value, got " + assignment);
    config[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
  }
}

}  // namespace rotinv
