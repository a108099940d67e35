#pragma once

#include <stdexcept>
#include <string>

namespace epn {

// Error taxonomy shared by all modules.  Callers that can recover from a
// specific condition catch the specific type; everything derives from
// std::runtime_error so the CLI can map any of them to an exit code.

struct structural_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct dimension_error : structural_error {
    using structural_error::structural_error;
};

struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct degenerate_input_error : precondition_error {
    using precondition_error::precondition_error;
};

// Signals a bug in an internal invariant (e.g. parity cancellation in the
// secular derivation), not a user error.
struct invariant_violation : std::logic_error {
    using std::logic_error::logic_error;
};

struct budget_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct numerical_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace epn
