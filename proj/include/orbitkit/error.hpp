#ifndef ORBITKIT_ERROR_HPP
#define ORBITKIT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace orbitkit {

/// Error raised when an operation's mathematical preconditions fail.
/// `code()` is a stable machine-readable identifier (e.g. "NotNormal");
/// the CLI maps these to exit status 2.
class domain_error : public std::runtime_error {
public:
    domain_error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

} // namespace orbitkit

#endif
