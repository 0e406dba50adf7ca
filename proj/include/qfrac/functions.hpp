#pragma once

#include <string>
#include <vector>

#include "qfrac/qcalc.hpp"

namespace qfrac {

// Test-function registry. Grammar:
//   one | x | x2 | xn:<n> | pk:<lambda> | eq | Eq | poly:<c0,c1,...> | delta:<t0>
// pk uses the lower limit a; delta is 1 at t0 (to 1e-12 relative) and 0 elsewhere.
// Polynomial coefficients may be separated by ',' or ';'.
class FnSpec {
 public:
  enum class Kind { One, X, X2, Xn, PowerKernel, SmallE, BigE, Poly, Delta };

  static FnSpec parse(const std::string& text);

  Kind kind() const noexcept { return kind_; }
  const std::string& text() const noexcept { return text_; }
  // Only defined for |t| < 1.
  bool needs_unit_interval() const noexcept { return kind_ == Kind::SmallE; }
  RealFn make(double a, const QContext& ctx, const SeriesPolicy& policy = {}) const;

 private:
  Kind kind_ = Kind::One;
  std::string text_;
  std::vector<double> params_;
};

RealFn polynomial_fn(std::vector<double> coeffs, const QContext& ctx);
// c * e_q(t) and c * E_q(q^s t), with exact q-derivatives.
RealFn small_e_fn(double c, const QContext& ctx, const SeriesPolicy& policy = {});
RealFn big_e_fn(double c, int s, const QContext& ctx, const SeriesPolicy& policy = {});
RealFn point_mass_fn(double t0);

}  // namespace qfrac
