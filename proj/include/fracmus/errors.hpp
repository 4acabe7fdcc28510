#pragma once

#include <stdexcept>
#include <string>

namespace fracmus {

// Base of every library error. The CLI maps categories to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed arguments, out-of-domain points, bad files, bad config values.
class InputError : public Error {
public:
    using Error::Error;
};

// A family that is not a Musielak function in the sampled region.
class InvalidFamilyError : public Error {
public:
    using Error::Error;
};

// Luxemburg bisection observed a non-monotone modular.
class InvalidModularError : public Error {
public:
    using Error::Error;
};

// Non-finite integrand, pair budget exceeded, singular weight overflow.
class QuadratureError : public Error {
public:
    using Error::Error;
};

// Bracket expansion or improper integral failed to settle.
class DivergenceError : public Error {
public:
    using Error::Error;
};

// Operation called outside its stated preconditions.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Mountain-pass geometry could not be certified.
class GeometryError : public Error {
public:
    using Error::Error;
};

// Iterative solver stopped above its residual tolerance.
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace fracmus
