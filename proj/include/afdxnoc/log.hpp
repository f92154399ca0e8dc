#pragma once

#include <sstream>
#include <string>

namespace afdxnoc {

// Diagnostic verbosity, selected by the AFDXNOC_LOG environment variable:
// unset/empty/"0" = silent, "1" = info, "2" = per-event debug.
int log_level();

// Writes one line to stderr; callers gate on log_level() themselves.
void log_write(const std::string& line);

}  // namespace afdxnoc

// Lazy-format helpers: the stream expression is only evaluated when the
// level is active.
#define AFDXNOC_LOG_AT(level, expr)                  \
    do {                                             \
        if (::afdxnoc::log_level() >= (level)) {     \
            std::ostringstream log_os_;              \
            log_os_ << expr;                         \
            ::afdxnoc::log_write(log_os_.str());     \
        }                                            \
    } while (0)

#define AFDXNOC_INFO(expr) AFDXNOC_LOG_AT(1, expr)
#define AFDXNOC_DEBUG(expr) AFDXNOC_LOG_AT(2, expr)
