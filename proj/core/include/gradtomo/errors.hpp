#pragma once

#include <stdexcept>
#include <string>

namespace gradtomo {

/// Inconsistent image/detector/angle geometry (coverage, dimensions, ranges).
class GeometryError : public std::invalid_argument {
public:
    explicit GeometryError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or truncated file contents.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative solver produced a non-finite objective.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gradtomo
