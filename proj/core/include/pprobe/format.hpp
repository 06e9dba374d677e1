#pragma once

#include <cstdio>
#include <string>

namespace pprobe {

// Shortest round-trippable decimal form; used for all numeric file output so
// that identical runs produce identical bytes.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace pprobe
