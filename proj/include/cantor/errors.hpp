#pragma once
#include <stdexcept>
#include <string>

namespace cantor {

// Root of every error raised by the library. CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };       // argument outside the mathematical domain
struct RangeError : Error { using Error::Error; };        // index past a finite prefix or table
struct UnsupportedError : Error { using Error::Error; };   // no certificate / witness available
struct ConstraintError : Error { using Error::Error; };   // inputs violate a stated constraint
struct ResourceError : Error { using Error::Error; };     // configured budget exceeded
struct ScheduleError : Error { using Error::Error; };     // schedule invariant broken
struct ConfigError : Error { using Error::Error; };       // malformed or inconsistent configuration
struct InternalError : Error { using Error::Error; };     // internal assertion failed

// 2 for configuration, domain and range errors; 3 for schedule, unsupported,
// constraint and resource errors; 4 for internal assertions and anything else.
inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
        dynamic_cast<const RangeError*>(&e))
        return 2;
    if (dynamic_cast<const ScheduleError*>(&e) || dynamic_cast<const UnsupportedError*>(&e) ||
        dynamic_cast<const ResourceError*>(&e) || dynamic_cast<const ConstraintError*>(&e))
        return 3;
    return 4;
}

#define CANTOR_ASSERT(cond, msg) \
    do { if (!(cond)) throw ::cantor::InternalError(std::string("assertion failed: ") + (msg)); } while (0)

} // namespace cantor
