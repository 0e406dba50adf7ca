#include "qfrac/qcalc.hpp"

#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace qfrac {

RealFn::RealFn(Eval eval, std::string label, Derivative qderiv)
    : impl_(std::make_shared<const Impl>(
          Impl{std::make_shared<const Eval>(std::move(eval)), std::move(label), std::move(qderiv)})) {}

std::optional<RealFn> RealFn::exact_qderivative() const {
  if (!impl_->qderiv) return std::nullopt;
  return impl_->qderiv();
}

RealFn RealFn::with_qderivative(Derivative qderiv) const {
  RealFn r = *this;
  r.impl_ = std::make_shared<const Impl>(Impl{impl_->eval, impl_->label, std::move(qderiv)});
  return r;
}

RealFn RealFn::without_qderivative() const { return with_qderivative({}); }

RealFn constant_fn(double c) {
  return RealFn([c](double) { return c; }, c == 1.0 ? "one" : "const",
                [] { return constant_fn(0.0); });
}

double lattice_point(double anchor, long k, double q) {
  return k == 0 ? anchor : anchor * std::pow(q, static_cast<double>(k));
}

struct GridFn::State {
  State(RealFn b, std::vector<double> anch, double qq)
      : base(std::move(b)), anchors(std::move(anch)), q(qq), log_q(std::log(qq)) {}
  RealFn base;
  std::vector<double> anchors;
  double q;
  double log_q;
  mutable std::shared_mutex mutex;
  mutable std::unordered_map<long long, double> cache;
};

GridFn::GridFn(RealFn base, std::vector<double> anchors, const QContext& ctx) {
  for (double a : anchors)
    if (!(a > 0.0)) throw DomainError("GridFn anchors must be positive");
  state_ = std::make_shared<State>(std::move(base), std::move(anchors), ctx.q());
}

std::optional<std::pair<std::size_t, long>> GridFn::locate(double t) const {
  if (!(t > 0.0)) return std::nullopt;
  const auto& s = *state_;
  for (std::size_t i = 0; i < s.anchors.size(); ++i) {
    const double r = std::log(t / s.anchors[i]) / s.log_q;
    const double k = std::round(r);
    if (k < 0.0 || k > 1e6) continue;
    const double p = lattice_point(s.anchors[i], static_cast<long>(k), s.q);
    if (std::abs(p - t) <= 1e-12 * t) return std::make_pair(i, static_cast<long>(k));
  }
  return std::nullopt;
}

double GridFn::at(std::size_t anchor, long k) const {
  const auto& s = *state_;
  const long long key = static_cast<long long>(anchor) << 40 | static_cast<long long>(k);
  {
    std::shared_lock lock(s.mutex);
    auto it = s.cache.find(key);
    if (it != s.cache.end()) return it->second;
  }
  const double v = s.base(lattice_point(s.anchors[anchor], k, s.q));
  std::unique_lock lock(s.mutex);
  s.cache.emplace(key, v);
  return v;
}

double GridFn::operator()(double t) const {
  if (auto idx = locate(t)) return at(idx->first, idx->second);
  return state_->base(t);
}

RealFn GridFn::as_fn() const {
  GridFn self = *this;
  const RealFn& base = state_->base;
  if (base.exact_qderivative())
    return RealFn([self](double t) { return self(t); }, base.label(),
                  [base] { return *base.exact_qderivative(); });
  return RealFn([self](double t) { return self(t); }, base.label());
}

std::size_t GridFn::cache_size() const {
  std::shared_lock lock(state_->mutex);
  return state_->cache.size();
}

const std::vector<double>& GridFn::anchors() const { return state_->anchors; }

double q_diff(const RealFn& f, double x, const QContext& ctx) { return q_diff_n(f, x, 1, ctx); }

double q_diff_n(const RealFn& f, double x, unsigned n, const QContext& ctx) {
  if (!(x > 0.0)) throw DomainError("q-derivative needs x > 0");
  if (n == 0) return f(x);
  if (auto d = f.exact_qderivative()) return q_diff_n(*d, x, n - 1, ctx);
  const double q = ctx.q();
  // values v_j = f(x q^j), differenced n times in place
  std::vector<double> v(n + 1);
  for (unsigned j = 0; j <= n; ++j) v[j] = f(lattice_point(x, j, q));
  for (unsigned level = 0; level < n; ++level)
    for (unsigned j = 0; j + level < n; ++j) {
      const double t = lattice_point(x, j, q);
      v[j] = (v[j] - v[j + 1]) / (t * (1.0 - q));
    }
  return v[0];
}

RealFn q_diff_fn(const RealFn& f, unsigned n, const QContext& ctx) {
  if (n == 0) return f;
  if (auto d = f.exact_qderivative()) return q_diff_fn(*d, n - 1, ctx);
  const QContext c = ctx;
  return RealFn([f, n, c](double t) { return q_diff_n(f, t, n, c); },
                "D^" + std::to_string(n) + "(" + f.label() + ")");
}

Evaluation q_int0_eval(const RealFn& f, double x, const QContext& ctx,
                       const SeriesPolicy& policy) {
  if (x == 0.0) return {0.0, 0};
  if (!(x > 0.0)) throw DomainError("Jackson integral needs x >= 0");
  const double q = ctx.q();
  SeriesSum s(policy, q);
  double qk = 1.0;
  for (long k = 0;; ++k) {
    if (s.add(f(lattice_point(x, k, q)) * qk)) break;
    qk *= q;
  }
  return {x * (1.0 - q) * s.value(), s.terms()};
}

double q_int0(const RealFn& f, double x, const QContext& ctx, const SeriesPolicy& policy) {
  return q_int0_eval(f, x, ctx, policy).value;
}

double q_int(const RealFn& f, double a, double x, const QContext& ctx,
             const SeriesPolicy& policy) {
  if (a < 0.0) throw DomainError("lower limit must be nonnegative");
  if (a == x) return 0.0;
  return q_int0(f, x, ctx, policy) - q_int0(f, a, ctx, policy);
}

double q_int_restricted(const RealFn& f, double x, unsigned n, const QContext& ctx) {
  const double q = ctx.q();
  double s = 0.0, qk = 1.0;
  for (unsigned k = 0; k < n; ++k) {
    s += f(lattice_point(x, k, q)) * qk;
    qk *= q;
  }
  return x * (1.0 - q) * s;
}

RealFn q_int_fn(const RealFn& f, double a, const QContext& ctx, const SeriesPolicy& policy) {
  const QContext c = ctx;
  const SeriesPolicy p = policy;
  return RealFn([f, a, c, p](double t) { return q_int(f, a, t, c, p); },
                "I1(" + f.label() + ")");
}

double q_int_n(const RealFn& f, double a, double x, unsigned n, const QContext& ctx,
               const SeriesPolicy& policy) {
  if (!(a < x)) throw DomainError("q_int_n needs a < x");
  if (n == 0) return f(x);
  std::vector<double> anchors{x};
  if (a > 0.0) anchors.push_back(a);
  RealFn g = GridFn(f, anchors, ctx).as_fn();
  for (unsigned i = 1; i < n; ++i) g = GridFn(q_int_fn(g, a, ctx, policy), anchors, ctx).as_fn();
  return q_int(g, a, x, ctx, policy);
}

double q_taylor_partial(const RealFn& f, double a, double x, unsigned N, const QContext& ctx) {
  if (!(a > 0.0) || !(x > 0.0)) throw DomainError("q_taylor_partial needs a, x > 0");
  double s = 0.0;
  double xk = 1.0;
  for (unsigned k = 0; k <= N; ++k) {
    s += q_diff_n(f, a, k, ctx) / q_factorial(k, ctx) * xk * poch_int(a / x, k, ctx);
    xk *= x;
  }
  return s;
}

}  // namespace qfrac
