#pragma once

#include <stdexcept>
#include <string>

namespace firey {

// Error taxonomy used across the library. Each failure names the violated
// precondition or invariant; the CLI maps kinds onto structured JSON.
enum class errkind {
    invalid_input,
    origin_not_interior,
    non_convex,
    grid_mismatch,
    domain_violation,
    precondition,
    nonconvergence,
};

inline const char* errkind_name(errkind k) {
    switch (k) {
        case errkind::invalid_input: return "invalid_input";
        case errkind::origin_not_interior: return "origin_not_interior";
        case errkind::non_convex: return "non_convex";
        case errkind::grid_mismatch: return "grid_mismatch";
        case errkind::domain_violation: return "domain_violation";
        case errkind::precondition: return "precondition";
        case errkind::nonconvergence: return "nonconvergence";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(errkind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
    errkind kind() const { return kind_; }

private:
    errkind kind_;
};

[[noreturn]] inline void fail(errkind k, const std::string& what) { throw error(k, what); }

}  // namespace firey
