#ifndef POINTNLS_ERRORS_HPP
#define POINTNLS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pointnls {

// Error categories map onto the CLI exit codes:
//   ValidationError -> 2, NumericError -> 3, GuardError -> 4.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input: malformed config, mismatched grids, broken preconditions.
struct ValidationError : Error {
    using Error::Error;
};

// The computation itself failed: NaN, nonconvergent iteration.
struct NumericError : Error {
    using Error::Error;
};

// A resolution/memory/stiffness guard refused to run.
struct GuardError : Error {
    using Error::Error;
};

}  // namespace pointnls

#endif
