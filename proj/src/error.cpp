#include "nashmoser/error.hpp"

namespace nashmoser {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid argument";
        case ErrorCode::dimension_mismatch: return "dimension mismatch";
        case ErrorCode::degenerate_input: return "degenerate input";
        case ErrorCode::outside_domain: return "outside V";
        case ErrorCode::left_domain: return "left U";
        case ErrorCode::neumann_divergence: return "Neumann divergence";
        case ErrorCode::stagnation: return "stagnation";
        case ErrorCode::max_iter: return "max_iter";
        case ErrorCode::truncation_ceiling: return "truncation ceiling";
        case ErrorCode::exponent_derivation: return "exponent derivation failed";
        case ErrorCode::divisor_floor: return "divisor floor violated";
        case ErrorCode::condition_violated: return "condition violated structurally";
        case ErrorCode::insufficient_rows: return "insufficient rows";
        case ErrorCode::lambda_out_of_range: return "estimated lambda >= 2";
        case ErrorCode::config: return "config error";
        case ErrorCode::io: return "I/O error";
        case ErrorCode::diagnostic_failed: return "diagnostic failed";
        case ErrorCode::internal: return "internal error";
    }
    return "unknown error";
}

}  // namespace nashmoser
