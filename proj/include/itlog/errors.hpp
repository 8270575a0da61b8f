#ifndef ITLOG_ERRORS_HPP
#define ITLOG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace itlog {

// Input that violates a documented precondition (bad file, bad parameter,
// malformed CLI argument).  The CLI maps this family to exit code 2.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : validation_error {
    using validation_error::validation_error;
};

// Numerical failure at run time (the CLI maps this family to exit code 1).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The horizontal continuation path for log L ran into a point where |L|
// is numerically zero; the branch cannot be tracked through it.
struct zero_on_path_error : numeric_error {
    using numeric_error::numeric_error;
};

// Adaptive continuation failed to settle (step size underflowed before the
// per-step argument-change bound could be met).
struct continuation_error : numeric_error {
    using numeric_error::numeric_error;
};

// Request for a value in a region the chosen backend cannot reach
// (e.g. analytic continuation of a coefficient-file L-function).
struct unsupported_region_error : numeric_error {
    using numeric_error::numeric_error;
};

// Evaluation at (or too close to) the pole at s = 1.
struct pole_error : numeric_error {
    using numeric_error::numeric_error;
};

// A requested tolerance could not be certified by the error bound machinery.
struct tolerance_error : numeric_error {
    using numeric_error::numeric_error;
};

} // namespace itlog

#endif
