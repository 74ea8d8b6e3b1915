// errors.hpp
//
// Exception hierarchy shared by every module. The CLI maps any omega::Error
// to exit code 1; usage errors are handled separately (exit code 2).

#pragma once

#include <stdexcept>
#include <string>

namespace omega {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside an operation's mathematical domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain error: " + what) {}
};

// A table or sieve does not reach far enough for an exact answer.
class RangeError : public Error {
public:
    explicit RangeError(const std::string& what) : Error("range error: " + what) {}
};

// Allocation or enumeration beyond the configured budget.
class SizeError : public Error {
public:
    explicit SizeError(const std::string& what) : Error("size error: " + what) {}
};

class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& what) : Error("overflow: " + what) {}
};

// Numerical integration failed to reach the requested accuracy.
class AccuracyError : public Error {
public:
    explicit AccuracyError(const std::string& what) : Error("accuracy error: " + what) {}
};

// A hypothesis of the resonance inequality (sector condition) does not hold.
class HypothesisError : public Error {
public:
    explicit HypothesisError(const std::string& what) : Error("hypothesis violated: " + what) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error("validation failed: " + what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("i/o error: " + what) {}
};

}  // namespace omega
