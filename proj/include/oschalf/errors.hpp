#pragma once

#include <stdexcept>
#include <string>

namespace oschalf {

/// Problem size exceeds what a dense or tensor path can hold.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested feature is finer than the discretization resolves.
class ResolutionError : public std::runtime_error {
 public:
  ResolutionError(const std::string& what, double suggested)
      : std::runtime_error(what), suggested_(suggested) {}
  /// Smallest parameter value the current discretization supports.
  double suggested() const { return suggested_; }

 private:
  double suggested_;
};

/// No positive rescaling puts the field on the Nehari manifold.
class NoScaleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oschalf
