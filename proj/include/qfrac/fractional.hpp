#pragma once

#include <string>

#include "qfrac/qcalc.hpp"

namespace qfrac {

enum class FracKind { Integral, RiemannLiouville, Caputo };
enum class FracMethod { Kernel, Series, Stieltjes };
enum class QExpKind { SmallE, BigE };

std::string to_string(FracKind kind);
std::string to_string(FracMethod method);
FracMethod parse_method(const std::string& name);

// Smallest integer >= alpha; orders within 1e-12 of an integer count as that integer.
int ceil_order(double alpha);

class FracOperator {
 public:
  FracOperator(FracKind kind, double order, double lower, FracMethod method = FracMethod::Kernel);

  FracKind kind() const noexcept { return kind_; }
  double order() const noexcept { return order_; }
  double lower() const noexcept { return lower_; }
  FracMethod method() const noexcept { return method_; }
  int ceil() const { return ceil_order(order_); }

  Evaluation apply(const RealFn& f, double x, const QContext& ctx,
                   const SeriesPolicy& policy = {}) const;
  // t -> (op f)(t) for any t > 0, including points below the lower limit.
  RealFn bind(const RealFn& f, const QContext& ctx, const SeriesPolicy& policy = {}) const;

 private:
  FracKind kind_;
  double order_;
  double lower_;
  FracMethod method_;
};

class WeightFn {
 public:
  WeightFn(double alpha, const QContext& ctx, const SeriesPolicy& policy = {});
  double order() const noexcept { return alpha_; }
  double operator()(double x, double t) const;

 private:
  double alpha_;
  QContext ctx_;
  SeriesPolicy policy_;
  double inv_gamma_;
};

Evaluation frac_integral_eval(const RealFn& f, double alpha, double a, double x, FracMethod method,
                              const QContext& ctx, const SeriesPolicy& policy = {});
double frac_integral(const RealFn& f, double alpha, double a, double x, FracMethod method,
                     const QContext& ctx, const SeriesPolicy& policy = {});
double frac_integral(const RealFn& f, double alpha, double a, double x, const QContext& ctx,
                     const SeriesPolicy& policy = {});
Evaluation rl_derivative_eval(const RealFn& f, double alpha, double a, double x,
                              const QContext& ctx, const SeriesPolicy& policy = {});
double rl_derivative(const RealFn& f, double alpha, double a, double x, const QContext& ctx,
                     const SeriesPolicy& policy = {});
Evaluation caputo_derivative_eval(const RealFn& f, double alpha, double a, double x,
                                  const QContext& ctx, const SeriesPolicy& policy = {});
double caputo_derivative(const RealFn& f, double alpha, double a, double x, const QContext& ctx,
                         const SeriesPolicy& policy = {});

// Kernel-method operators as functions of the evaluation point. They accept
// any t > 0; below the lower limit they use the same lattice formulas, and on
// the lattice {a q^n} the fractional integral is the exact finite sum.
RealFn frac_integral_fn(const RealFn& f, double alpha, double a, const QContext& ctx,
                        const SeriesPolicy& policy = {});
RealFn rl_derivative_fn(const RealFn& f, double alpha, double a, const QContext& ctx,
                        const SeriesPolicy& policy = {});
RealFn caputo_derivative_fn(const RealFn& f, double alpha, double a, const QContext& ctx,
                            const SeriesPolicy& policy = {});

// t -> t^lambda (a/t;q)_lambda, lambda > -1.
RealFn power_kernel(double lambda, double a, const QContext& ctx, const SeriesPolicy& policy = {});
// Same family without the lambda > -1 restriction, scaled by c.
RealFn scaled_power_kernel(double c, double lambda, double a, const QContext& ctx,
                           const SeriesPolicy& policy = {});

double closed_power_kernel(FracKind which, double lambda, double alpha, double a, double x,
                           const QContext& ctx, const SeriesPolicy& policy = {});
double closed_monomial(FracKind which, unsigned n, double alpha, double a, double x,
                       const QContext& ctx, const SeriesPolicy& policy = {});
// The Caputo monomial formula with the extra (q^{n+1-m};q)_m factor
// outside the sum. It disagrees with caputo_derivative; kept for reference.
double closed_monomial_caputo_printed(unsigned n, double alpha, double a, double x,
                                      const QContext& ctx, const SeriesPolicy& policy = {});
// Partial sum of the first N terms (n = 0..N-1; Caputo skips n < ceil(alpha)).
double closed_qexp(QExpKind exp_kind, FracKind which, double alpha, double a, double x, unsigned N,
                   const QContext& ctx, const SeriesPolicy& policy = {});
double rl_from_caputo(const RealFn& f, double alpha, double a, double x, const QContext& ctx,
                      const SeriesPolicy& policy = {});

}  // namespace qfrac
