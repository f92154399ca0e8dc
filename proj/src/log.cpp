#include "afdxnoc/log.hpp"

#include <cstdio>
#include <cstdlib>

namespace afdxnoc {

int log_level() {
    static const int level = [] {
        const char* raw = std::getenv("AFDXNOC_LOG");
        if (!raw || !*raw) return 0;
        char* end = nullptr;
        long v = std::strtol(raw, &end, 10);
        if (end == raw || v < 0) return 0;
        return int(v > 2 ? 2 : v);
    }();
    return level;
}

void log_write(const std::string& line) {
    std::fputs(line.c_str(), stderr);
    std::fputc('\n', stderr);
}

}  // namespace afdxnoc
