#ifndef PGC_ERRORS_HPP
#define PGC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pgc {

// Input data fails a structural or semantic validity check.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// An operation was called outside its stated domain.
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// A configured enumeration or iteration cap was exceeded.
struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// An internal consistency assertion failed; indicates a bug, not bad input.
struct InternalInvariantError : std::logic_error {
    explicit InternalInvariantError(const std::string& what) : std::logic_error(what) {}
};

inline void check_internal(bool cond, const char* msg) {
    if (!cond) throw InternalInvariantError(msg);
}

} // namespace pgc

#endif
