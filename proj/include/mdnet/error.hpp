#pragma once

#include <stdexcept>
#include <string>

namespace mdnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown variable or node name.
class NameError : public Error {
public:
    using Error::Error;
};

/// Malformed arguments: overlapping sets, wrong shapes, out-of-range values.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Conditioning on an event of probability zero.
class DegenerateEventError : public Error {
public:
    using Error::Error;
};

/// A size limit (variable count, matrix dimension, enumeration cap) was exceeded.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Input text could not be parsed (JSON syntax, wrong field types).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Fourier-Motzkin elimination hit its inequality ceiling.
class EliminationAborted : public Error {
public:
    EliminationAborted(const std::string& what, int eliminated, int remaining, std::size_t peak)
        : Error(what), eliminated_(eliminated), remaining_(remaining), peak_(peak)
    {
    }

    int eliminated() const { return eliminated_; }
    int remaining() const { return remaining_; }
    std::size_t peak_inequalities() const { return peak_; }

private:
    int eliminated_;
    int remaining_;
    std::size_t peak_;
};

} // namespace mdnet
