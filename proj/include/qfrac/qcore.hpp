#pragma once

#include <cstddef>

#include "qfrac/errors.hpp"

namespace qfrac {

class QContext {
 public:
  explicit QContext(double q, double domain_upper = 1.0);

  double q() const noexcept { return q_; }
  double domain_upper() const noexcept { return b_; }

 private:
  double q_;
  double b_;
};

class SeriesPolicy {
 public:
  SeriesPolicy() = default;
  SeriesPolicy(double rel_tol, double abs_tol, std::size_t max_terms);

  double rel_tol() const noexcept { return rel_tol_; }
  double abs_tol() const noexcept { return abs_tol_; }
  std::size_t max_terms() const noexcept { return max_terms_; }

  SeriesPolicy with_max_terms(std::size_t n) const { return {rel_tol_, abs_tol_, n}; }
  SeriesPolicy with_rel_tol(double t) const { return {t, abs_tol_, max_terms_}; }

 private:
  double rel_tol_ = 1e-14;
  double abs_tol_ = 1e-300;
  std::size_t max_terms_ = 10000;
};

// A product factor 1 - z with |1 - z| below this is an exact zero.
inline constexpr double kLatticeSnap = 1e-12;
// Orders this close to an integer use the finite-product formulas.
inline constexpr double kIntegerSnap = 1e-12;
inline constexpr double kPoleSnap = 1e-9;

bool near_integer(double v, double tol = kIntegerSnap);

// Accumulates a convergent series with a geometric tail estimate.
// Stops once the bound max(|last 3 terms|)*rho/(1-rho) falls below
// rel_tol*|S| (or abs_tol) three times in a row; the estimated tail is
// then added. rho is the asymptotic ratio if known (e.g. q for Jackson
// lattices), else the observed ratio of consecutive terms is used.
class SeriesSum {
 public:
  explicit SeriesSum(const SeriesPolicy& policy, double ratio_hint = -1.0,
                     bool add_tail = true);

  // Returns true once converged; further terms must not be added.
  bool add(double term);
  double value() const noexcept { return sum_ + tail_; }
  std::size_t terms() const noexcept { return n_; }

 private:
  SeriesPolicy policy_;
  double ratio_hint_;
  bool add_tail_;
  double sum_ = 0.0;
  double comp_ = 0.0;
  double tail_ = 0.0;
  double last_[3] = {0.0, 0.0, 0.0};
  std::size_t n_ = 0;
  int hits_ = 0;
};

double q_number(double alpha, const QContext& ctx);
double q_factorial(unsigned n, const QContext& ctx);
double poch_int(double a, unsigned k, const QContext& ctx);
double poch_inf(double a, const QContext& ctx, const SeriesPolicy& policy = {});
double poch_real(double a, double alpha, const QContext& ctx,
                 const SeriesPolicy& policy = {});
double q_binomial(double alpha, unsigned k, const QContext& ctx);
double q_gamma(double x, const QContext& ctx, const SeriesPolicy& policy = {});
double recip_q_gamma(double x, const QContext& ctx, const SeriesPolicy& policy = {});
double e_q(double x, const QContext& ctx, const SeriesPolicy& policy = {});
double E_q(double x, const QContext& ctx, const SeriesPolicy& policy = {});
double phi21(double a, double b, double c, double x, const QContext& ctx,
             const SeriesPolicy& policy = {});

struct SSeries {
  double series;
  double closed_form;
  std::size_t terms;
};

// The S(alpha, beta, mu) series next to the closed form claimed for it.
SSeries s_series(double alpha, double beta, double mu, const QContext& ctx,
                 const SeriesPolicy& policy = {});
double s_series_closed(double alpha, double beta, double mu, const QContext& ctx,
                       const SeriesPolicy& policy = {});

}  // namespace qfrac
