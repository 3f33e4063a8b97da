#pragma once

#include <stdexcept>
#include <string>

namespace decn {

// Shape/size violations (grid dimensions, channel counts, window sizes).
class DimensionError : public std::invalid_argument {
  public:
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Invalid configuration values (ratios out of range, alpha <= 0, ...).
class ParameterError : public std::invalid_argument {
  public:
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Training loss became non-finite or blew up past the guard threshold.
class DivergenceError : public std::runtime_error {
  public:
    explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative solver failed to reach its tolerance within the iteration cap.
class ConvergenceError : public std::runtime_error {
  public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Using a model whose weights were never built or loaded.
class UninitializedModelError : public std::runtime_error {
  public:
    explicit UninitializedModelError(const std::string& msg) : std::runtime_error(msg) {}
};

// File read/write failures.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace decn
