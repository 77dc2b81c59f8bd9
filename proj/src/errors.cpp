#include "blowup/errors.hpp"

namespace blowup {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::dimension_out_of_range: return "dimension-out-of-range";
        case ErrorCode::invalid_argument: return "invalid-argument";
        case ErrorCode::accuracy: return "accuracy";
        case ErrorCode::invalid_constant: return "invalid-constant";
        case ErrorCode::no_unique_frame: return "no-unique-frame";
        case ErrorCode::outside_domain: return "outside-domain";
        case ErrorCode::invalid_point: return "invalid-point";
        case ErrorCode::index_out_of_range: return "index-out-of-range";
        case ErrorCode::singularity: return "singularity";
        case ErrorCode::singular_configuration: return "singular-configuration";
        case ErrorCode::no_minimum: return "no-minimum";
        case ErrorCode::config: return "config";
        case ErrorCode::io: return "io";
        case ErrorCode::unknown_subcommand: return "unknown-subcommand";
    }
    return "error";
}

}  // namespace blowup
