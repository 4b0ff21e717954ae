#include "projfem/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace projfem {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("PROJFEM_LOG");
        if (!env) return LogLevel::Error;
        const std::string v(env);
        if (v == "debug") return LogLevel::Debug;
        if (v == "info") return LogLevel::Info;
        return LogLevel::Error;
    }();
    return level;
}

namespace {
std::mutex log_mutex;

void emit(const char* tag, const std::string& msg) {
    std::lock_guard<std::mutex> lock(log_mutex);
    std::fprintf(stderr, "[projfem %s] %s\n", tag, msg.c_str());
}
}  // namespace

void log_error(const std::string& msg) { emit("error", msg); }

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) emit("info", msg);
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::Debug) emit("debug", msg);
}

}  // namespace projfem
