#ifndef R1H_ERRORS_HPP
#define R1H_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace r1h
{

/// Argument outside the documented domain (bad dimension, bad step, ...).
class InvalidArgument : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Input for which the rank-1 problem has no admissible solution (c == 0).
class DegenerateInput : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// The complementary (flipped) problem won at rho == 0, whose reciprocal is
/// the point at infinity.
class ReciprocalOfZero : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Configuration that is individually valid but inconsistent as a whole.
class InvalidConfiguration : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace r1h

#endif
