#pragma once

#include <stdexcept>
#include <string>

namespace cifts {

// Thrown when an operation receives arguments outside its contract
// (empty weights, even smoothing window, mismatched lengths, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown by the synthetic generator when a spec cannot be realized.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown by readers on malformed input. `line` is 1-based, 0 when unknown.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace cifts
