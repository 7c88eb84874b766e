#include "lvckit/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>

namespace lvc {

namespace {

LogLevel parse_env_level() {
  const char* env = std::getenv("LVCKIT_LOG");
  if (!env) return LogLevel::Warn;
  std::string v(env);
  if (v == "quiet") return LogLevel::Quiet;
  if (v == "warn") return LogLevel::Warn;
  if (v == "info") return LogLevel::Info;
  if (v == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

std::atomic<LogLevel>& level_ref() {
  static std::atomic<LogLevel> level{parse_env_level()};
  return level;
}

}  // namespace

LogLevel log_level() { return level_ref().load(); }

void set_log_level(LogLevel level) { level_ref().store(level); }

void log_warn(const std::string& msg) {
  if (log_level() >= LogLevel::Warn) std::cerr << "[warn] " << msg << "\n";
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) std::cerr << "[info] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::Debug) std::cerr << "[debug] " << msg << "\n";
}

}  // namespace lvc
