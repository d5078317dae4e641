#include "vbcent/log.hpp"

#include <iostream>

namespace vbcent {

namespace {
bool g_quiet = false;
}

void set_quiet(bool quiet) { g_quiet = quiet; }
bool quiet() { return g_quiet; }

void log_warn(const std::string& msg) {
    if (!g_quiet) std::cerr << "[warn] " << msg << "\n";
}

void log_info(const std::string& msg) {
    if (!g_quiet) std::cerr << "[info] " << msg << "\n";
}

} // namespace vbcent
