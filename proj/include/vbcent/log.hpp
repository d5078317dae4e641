#pragma once

#include <string>

namespace vbcent {

// Warnings go to stderr unless silenced (CLI --quiet). Primary outputs are
// never written through this channel, so silencing cannot change results.
void set_quiet(bool quiet);
bool quiet();
void log_warn(const std::string& msg);
void log_info(const std::string& msg);

} // namespace vbcent
