#ifndef HAWKES_ERRORS_HPP
#define HAWKES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hawkes {

// Branching ratio at or above the critical value; the cluster would not
// terminate almost surely.
struct StabilityError : std::runtime_error {
  explicit StabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Runaway sample hit the point-count guard before terminating.
struct DivergenceError : std::runtime_error {
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Request exceeds a hard enumeration bound.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Slowdown regime admits no finite optimal concurrency.
struct NoOptimumError : std::runtime_error {
  explicit NoOptimumError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hawkes

#endif
