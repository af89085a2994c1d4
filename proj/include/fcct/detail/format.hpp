#pragma once

#include <cstdio>
#include <string>

namespace fcct::detail {

// Shortest round-trippable decimal for CSV output; locale independent.
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace fcct::detail
