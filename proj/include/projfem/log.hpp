#ifndef PROJFEM_LOG_HPP
#define PROJFEM_LOG_HPP

#include <string>

namespace projfem {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

/// Level from PROJFEM_LOG (error|info|debug), read once; default error.
LogLevel log_level();

void log_error(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace projfem

#endif
