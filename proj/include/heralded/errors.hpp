#pragma once

#include <stdexcept>
#include <string>

namespace heralded {

// Raised when a truncated Fock basis cannot hold a state to the required
// accuracy (tail mass above 1e-6).
class CutoffTooSmall : public std::runtime_error {
 public:
  CutoffTooSmall(const std::string& what, double tail_mass)
      : std::runtime_error(what + " (truncated tail mass " + std::to_string(tail_mass) + ")"),
        tail_mass_(tail_mass) {}
  double tail_mass() const { return tail_mass_; }

 private:
  double tail_mass_;
};

// A closed-form herald whose probability vanishes (norm below 1e-14).
class DegenerateHerald : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters outside the closed-form path (e.g. r = 0 for the squeezed scenario).
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operator needs headroom above the support of the state.
class HeadroomError : public std::range_error {
 public:
  using std::range_error::range_error;
};

}  // namespace heralded
