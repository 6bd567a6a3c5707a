#pragma once

#include <string>
#include <vector>

namespace accper {

// Reads a flat key=value config file ('#' starts a comment, blank lines
// ignored) and returns "--key=value" tokens to inject ahead of the real
// command-line flags, so explicit flags win. Keys mirror flag names 1:1;
// '_' and '-' are interchangeable. Malformed lines are reported with their
// line number.
std::vector<std::string> config_file_args(const std::string& path);

}  // namespace accper
