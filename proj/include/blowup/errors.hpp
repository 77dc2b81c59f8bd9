#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

enum class ErrorCode {
    dimension_out_of_range,
    invalid_argument,
    accuracy,
    invalid_constant,
    no_unique_frame,
    outside_domain,
    invalid_point,
    index_out_of_range,
    singularity,
    singular_configuration,
    no_minimum,
    config,
    io,
    unknown_subcommand,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}
    ErrorCode code() const { return code_; }
    // The message without the code prefix.
    const std::string& detail() const { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace blowup
