#include "judgelab/common.hpp"

#include <cmath>
#include <cstdio>

namespace judgelab {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return std::string(buf);
}

double round_percent1(double fraction) {
    return std::floor(fraction * 1000.0 + 0.5) / 10.0;
}

std::string format_percent1(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", round_percent1(fraction));
    return std::string(buf);
}

}  // namespace judgelab
