#pragma once

#include <string>

namespace lvc {

enum class LogLevel { Quiet = 0, Warn = 1, Info = 2, Debug = 3 };

// Initial level comes from the LVCKIT_LOG environment variable
// (quiet|warn|info|debug); warn when unset.
LogLevel log_level();
void set_log_level(LogLevel level);

void log_warn(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace lvc
