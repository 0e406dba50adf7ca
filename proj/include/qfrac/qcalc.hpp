#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qfrac/qcore.hpp"

namespace qfrac {

// A real function of one variable. It may carry an exact q-derivative,
// which q_diff/q_diff_n use instead of difference quotients.
class RealFn {
 public:
  using Eval = std::function<double(double)>;
  using Derivative = std::function<RealFn()>;

  RealFn(Eval eval, std::string label, Derivative qderiv = {});

  double operator()(double t) const { return (*impl_->eval)(t); }
  const std::string& label() const noexcept { return impl_->label; }
  std::optional<RealFn> exact_qderivative() const;
  RealFn with_qderivative(Derivative qderiv) const;
  RealFn without_qderivative() const;

 private:
  struct Impl {
    std::shared_ptr<const Eval> eval;
    std::string label;
    Derivative qderiv;
  };
  std::shared_ptr<const Impl> impl_;
};

RealFn constant_fn(double c);

// Canonical lattice point anchor * q^k. Every lattice walk goes through
// this so cached and recomputed values see bit-identical arguments.
double lattice_point(double anchor, long k, double q);

// Memoizes a function on the lattices {anchor_i * q^k : k >= 0}.
// Points not on any lattice are passed straight to the base function.
class GridFn {
 public:
  GridFn(RealFn base, std::vector<double> anchors, const QContext& ctx);

  double operator()(double t) const;
  double at(std::size_t anchor, long k) const;
  RealFn as_fn() const;
  std::size_t cache_size() const;
  const std::vector<double>& anchors() const;

  // Index (anchor, k) of t, if t is within 1e-12 relative of a lattice point.
  std::optional<std::pair<std::size_t, long>> locate(double t) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

// Result of a truncated lattice sum together with its term count.
struct Evaluation {
  double value = 0.0;
  std::size_t terms = 0;
};

double q_diff(const RealFn& f, double x, const QContext& ctx);
double q_diff_n(const RealFn& f, double x, unsigned n, const QContext& ctx);
// The function t -> (D_q^n f)(t), exact when f carries q-derivatives.
RealFn q_diff_fn(const RealFn& f, unsigned n, const QContext& ctx);

Evaluation q_int0_eval(const RealFn& f, double x, const QContext& ctx,
                       const SeriesPolicy& policy = {});
double q_int0(const RealFn& f, double x, const QContext& ctx, const SeriesPolicy& policy = {});
double q_int(const RealFn& f, double a, double x, const QContext& ctx,
             const SeriesPolicy& policy = {});
double q_int_restricted(const RealFn& f, double x, unsigned n, const QContext& ctx);
double q_int_n(const RealFn& f, double a, double x, unsigned n, const QContext& ctx,
               const SeriesPolicy& policy = {});
// t -> int_a^t f d_q s, for any t > 0.
RealFn q_int_fn(const RealFn& f, double a, const QContext& ctx, const SeriesPolicy& policy = {});
double q_taylor_partial(const RealFn& f, double a, double x, unsigned N, const QContext& ctx);

}  // namespace qfrac
