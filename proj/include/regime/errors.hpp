#pragma once

#include <stdexcept>
#include <string>

namespace regime {

// Base class for all library errors. Subclasses exist where callers need to
// distinguish failure modes programmatically.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
    using Error::Error;
};

struct NumericalFailure : Error {
    using Error::Error;
};

}  // namespace regime
