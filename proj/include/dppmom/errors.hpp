#pragma once

#include <stdexcept>

namespace dppmom {

/// Caller-supplied data is invalid: bad indices, malformed files, broken preconditions.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A computation left its numeric validity envelope (non-convergence, invalid distribution).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The request exceeds a documented size cap of an exact algorithm.
struct capability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A guaranteed internal invariant failed; indicates a bug, not bad input.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace dppmom
