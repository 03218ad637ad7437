#pragma once

#include <stdexcept>
#include <string>

namespace rffp {

/// Thrown when an argument violates an operation's preconditions.
struct invalid_input : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when fitted data cannot support the requested model (e.g. zero variance).
struct degenerate_data : invalid_input {
    using invalid_input::invalid_input;
};

/// Thrown on filesystem failures; the message names the offending path.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an on-disk artifact violates its format; the message names the field.
struct format_error : io_error {
    using io_error::io_error;
};

} // namespace rffp
