#pragma once

#include <map>
#include <span>
#include <string>

namespace rotinv {

// Flat key = value text; '#' starts a comment, blank lines are skipped.
// Duplicate keys are an error so a typo cannot silently lose a setting.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text, const std::string& origin = "<text>");
ConfigMap parse_config_file(const std::string& path);

// "key=value" entries layered on top (later wins, missing '=' is an error).
void apply_overrides(ConfigMap& config, std::span<const std::string> assignments);

}  // namespace rotinv
