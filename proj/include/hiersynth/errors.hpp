#pragma once

#include <stdexcept>
#include <string>

namespace hiersynth {

// Base class for all library errors so callers can catch one type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument values: bad hierarchy order, malformed gate literal, ...
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Negative or otherwise unusable cost budget.
class BudgetError : public Error {
public:
    explicit BudgetError(const std::string& msg) : Error(msg) {}
};

// A configured ceiling (node count, growth budget) was hit. State that was
// built before the ceiling fired stays valid so callers can inspect or resume.
class ResourceLimitError : public Error {
public:
    explicit ResourceLimitError(const std::string& msg) : Error(msg) {}
};

// File could not be read or written.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// File was read but its contents are unusable: bad magic, version or
// fingerprint mismatch, checksum failure, malformed JSON.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

// A computation has no defined result, e.g. proportions when no sequence
// with at least one non-Clifford gate fits the budget.
class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& msg) : Error(msg) {}
};

}  // namespace hiersynth
