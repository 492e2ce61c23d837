#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mggpo {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    DimensionError(std::size_t expected, std::size_t actual, const std::string& what)
        : Error(what + ": expected dimension " + std::to_string(expected) + ", got " + std::to_string(actual)),
          expected_(expected), actual_(actual) {}

    [[nodiscard]] std::size_t expected() const noexcept { return expected_; }
    [[nodiscard]] std::size_t actual() const noexcept { return actual_; }

private:
    std::size_t expected_;
    std::size_t actual_;
};

class BoundsError : public Error {
public:
    BoundsError(std::size_t dim, double value, double lower, double upper)
        : Error("value " + std::to_string(value) + " in dimension " + std::to_string(dim) +
                " outside [" + std::to_string(lower) + ", " + std::to_string(upper) + "]"),
          dimension_(dim) {}

    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }

private:
    std::size_t dimension_;
};

/// Invalid configuration or input file content. The CLI maps this to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace mggpo
