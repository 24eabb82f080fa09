#pragma once

#include <stdexcept>
#include <string>

namespace polbell {

enum class ErrorCode {
    invalid_argument,
    degenerate_state,
    not_unitary,
    degenerate_stokes,
    no_interference_contrast,
    zero_intensity,
    invariant_violation,
    parse_error,
};

/// Exception thrown by every library routine that rejects its input.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace polbell
