#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chaomarket {

/// Rejected input: bad parameters, malformed config, unreadable artifacts.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bimap iterate left the unit square. `iteration` is the 1-based step
/// count from the initial state (burn-in included).
class DomainEscapeError : public std::runtime_error {
 public:
  DomainEscapeError(const std::string& what, std::uint64_t iteration, double x, double y)
      : std::runtime_error(what), iteration_(iteration), x_(x), y_(y) {}

  std::uint64_t iteration() const noexcept { return iteration_; }
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

 private:
  std::uint64_t iteration_;
  double x_;
  double y_;
};

/// Statistics could not be computed on the given data (too few points, all
/// agents excluded, ...).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chaomarket
