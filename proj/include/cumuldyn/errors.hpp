#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cumuldyn {

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input content is malformed or violates a documented constraint.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    /// 1-based line number, 0 when not tied to a line.
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace cumuldyn
