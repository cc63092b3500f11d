#pragma once

#include <stdexcept>
#include <string>

namespace gme {

/// Requested circumcircle does not exist for the given sides. `reason()` tells
/// which existence condition failed.
class NoCircumcircle : public std::domain_error {
 public:
  enum class Reason {
    NonpositiveConvexArea,   // S_q^2 <= 0
    NonpositiveCrossedArea,  // S_x^2 <= 0
    NegativeNumerator,       // (ac-bd)(bc-ad)(ab-cd) < 0
  };

  NoCircumcircle(Reason reason, const std::string& what)
      : std::domain_error(what), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

/// ab = cd: triangles ABC and ADC have equal heights, the crossed diagonal
/// formula degenerates.
class DegenerateDiagonal : public std::domain_error {
  using std::domain_error::domain_error;
};

/// Convex-branch closest-product construction hit a vanishing x component
/// (boundary with the largest-coefficient regime).
class DegenerateDirection : public std::domain_error {
  using std::domain_error::domain_error;
};

/// No restart of an iterative solver met its convergence threshold.
class NonConvergence : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gme
