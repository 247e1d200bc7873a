#pragma once

#include <stdexcept>
#include <string>

namespace cim {

// Error kinds mirror the status codes of the public C API so exceptions can
// cross the library boundary losslessly.
enum class ErrorKind {
    invalid_argument,
    parse,
    validation,
    capability,
    dimension,
    domain,
    divergence,
    stiffness,
    io,
    internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace cim
