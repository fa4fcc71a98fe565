#pragma once

#include <string>

#include "rvar/errors.hpp"

namespace rvar {

// Result of a risk measure that may legitimately be infinite (e.g. TVaR of a
// heavy-tailed law). Divergence is a state, not an IEEE infinity.
class RiskValue {
 public:
  static RiskValue finite(double v) { return RiskValue(v, false); }
  static RiskValue divergent() { return RiskValue(0.0, true); }

  bool diverges() const noexcept { return diverges_; }
  bool is_finite() const noexcept { return !diverges_; }

  // Throws DomainError when the measure diverges.
  double value() const {
    if (diverges_) throw DomainError("risk measure diverges");
    return value_;
  }

  bool operator==(const RiskValue&) const = default;

 private:
  RiskValue(double v, bool d) : value_(v), diverges_(d) {}
  double value_;
  bool diverges_;
};

}  // namespace rvar
