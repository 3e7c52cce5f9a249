#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nashmoser {

// Numeric values are part of the C ABI (see nashmoser.h); append only.
enum class ErrorCode : int {
    invalid_argument = 1,
    dimension_mismatch = 2,
    degenerate_input = 3,
    outside_domain = 4,      // |y|_{s0} >= delta at solve entry
    left_domain = 5,         // an iterate left U = {|x|_l < 1}
    neumann_divergence = 6,
    stagnation = 7,
    max_iter = 8,
    truncation_ceiling = 9,
    exponent_derivation = 10,
    divisor_floor = 11,
    condition_violated = 12,
    insufficient_rows = 13,
    lambda_out_of_range = 14,
    config = 15,
    io = 16,
    diagnostic_failed = 17,
    internal = 18,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          double value = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(message), code_(code), value_(value) {}

    ErrorCode code() const noexcept { return code_; }

    /// Quantity attached to the failure (growth ratio, offending seminorm, ...), NaN if none.
    double value() const noexcept { return value_; }

private:
    ErrorCode code_;
    double value_;
};

}  // namespace nashmoser
