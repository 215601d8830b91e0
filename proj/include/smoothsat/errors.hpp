#pragma once

#include <stdexcept>
#include <string>

namespace smoothsat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

class MalformedOutput : public Error {
public:
    using Error::Error;
};

class SolverSpawnFailure : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

/// A structurally valid solution whose (a,b) share a factor; filtered in post-processing.
class GcdRejected : public Error {
public:
    using Error::Error;
};

/// A circuit claimed a smooth value that trial division refutes. Always a bug.
class SoundnessViolation : public Error {
public:
    using Error::Error;
};

}  // namespace smoothsat
