#pragma once

#include <cstdio>
#include <string>

namespace lpbar {

/// Shortest fixed formatting that round-trips IEEE doubles (17 significant
/// digits); used for every CSV surface so output is byte-stable.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace lpbar
