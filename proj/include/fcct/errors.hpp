#pragma once

#include <stdexcept>
#include <string>

namespace fcct {

// Category drives the CLI exit code: math errors -> 2, io errors -> 3.
enum class ErrorCategory { math, io };

class Error : public std::runtime_error {
public:
    Error(const std::string& msg, ErrorCategory cat)
        : std::runtime_error(msg), category_(cat) {}
    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

// Two nodes of a skew grid map to the same spectral point, so interpolation
// data cannot be matched to coefficients.
class DegenerateNodes : public Error {
public:
    explicit DegenerateNodes(const std::string& msg)
        : Error(msg, ErrorCategory::math) {}
};

// A factor of the transform (dense matrix, radix kernel or child block) has
// an estimated condition number beyond the trust threshold.
class IllConditioned : public Error {
public:
    explicit IllConditioned(const std::string& msg)
        : Error(msg, ErrorCategory::math) {}
};

// Operand sizes disagree. The io category covers a file whose header
// promises a different payload length than it carries.
class SizeMismatch : public Error {
public:
    explicit SizeMismatch(const std::string& msg,
                          ErrorCategory cat = ErrorCategory::math)
        : Error(msg, cat) {}
};

// The radix-2 factorization needs an even grid size.
class OddSize : public Error {
public:
    explicit OddSize(const std::string& msg)
        : Error(msg, ErrorCategory::math) {}
};

class MalformedFile : public Error {
public:
    explicit MalformedFile(const std::string& msg)
        : Error(msg, ErrorCategory::io) {}
};

class IoFailure : public Error {
public:
    explicit IoFailure(const std::string& msg)
        : Error(msg, ErrorCategory::io) {}
};

} // namespace fcct
