// errors.hpp -- exception taxonomy shared by all engine modules.
#ifndef MKDV_ERRORS_HPP
#define MKDV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mkdv {

// Base for everything thrown by the engine.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument / precondition violation (bad rank, bad exponent, ...).
struct InvalidArgument : Error {
    using Error::Error;
};

// Mixing values built over different ranks.
struct RankMismatch : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

// Input is not a total derivative (antiderivative does not exist).
struct NotExact : Error {
    using Error::Error;
};

// Linear system has no solution; corrupted recursion state.
struct Unsolvable : Error {
    using Error::Error;
};

// Polynomial is not in the image of the Miura substitution.
struct NotInImage : Error {
    using Error::Error;
};

// A structural identity the construction guarantees failed to hold.
struct InternalInconsistency : Error {
    using Error::Error;
};

// Numerical trouble (NaN/overflow) during time integration.
struct NumericFailure : Error {
    long step = -1;
    NumericFailure(const std::string& msg, long step_) : Error(msg), step(step_) {}
};

} // namespace mkdv

#endif
