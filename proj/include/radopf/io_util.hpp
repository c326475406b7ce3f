#pragma once

#include <cstdio>
#include <string>

namespace radopf {

/// Shortest decimal form that round-trips the double exactly.
inline std::string fmt_double(double x) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

}  // namespace radopf
