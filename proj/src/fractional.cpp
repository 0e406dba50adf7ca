#include "qfrac/fractional.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace qfrac {

std::string to_string(FracKind kind) {
  switch (kind) {
    case FracKind::Integral: return "I";
    case FracKind::RiemannLiouville: return "D";
    case FracKind::Caputo: return "C";
  }
  return "?";
}

std::string to_string(FracMethod method) {
  switch (method) {
    case FracMethod::Kernel: return "kernel";
    case FracMethod::Series: return "series";
    case FracMethod::Stieltjes: return "stieltjes";
  }
  return "?";
}

FracMethod parse_method(const std::string& name) {
  if (name == "kernel") return FracMethod::Kernel;
  if (name == "series") return FracMethod::Series;
  if (name == "stieltjes") return FracMethod::Stieltjes;
  throw DomainError("unknown method '" + name + "'");
}

int ceil_order(double alpha) {
  if (near_integer(alpha)) return static_cast<int>(std::lround(alpha));
  return static_cast<int>(std::ceil(alpha));
}

namespace {

// k with t == a q^k (k >= 0) to 1e-12 relative.
std::optional<long> lattice_index(double t, double a, double q) {
  if (!(a > 0.0) || t > a * (1.0 + 1e-12)) return std::nullopt;
  const double k = std::round(std::log(t / a) / std::log(q));
  if (k < 0.0 || k > 1e6) return std::nullopt;
  if (std::abs(lattice_point(a, static_cast<long>(k), q) - t) <= 1e-12 * t)
    return static_cast<long>(k);
  return std::nullopt;
}

// Definition 1 at any t > 0, kernel values by recurrence.
Evaluation kernel_integral(const RealFn& f, double alpha, double a, double t, const QContext& ctx,
                           const SeriesPolicy& policy) {
  if (alpha == 0.0) return {f(t), 1};
  const double q = ctx.q();
  const double beta = alpha - 1.0;
  const double inv_gamma = recip_q_gamma(alpha, ctx, policy);

  if (auto n = lattice_index(t, a, q)) {
    if (*n == 0 || !near_integer(alpha)) return {0.0, 0};
    // t = a q^n: the two Jackson sums share the tail beyond a q^n
    double s = 0.0;
    for (long j = 0; j < *n; ++j) {
      const double kern = poch_real(std::pow(q, static_cast<double>(j + 1 - *n)), beta, ctx, policy);
      if (kern != 0.0) s += kern * f(lattice_point(a, j, q)) * std::pow(q, static_cast<double>(j));
    }
    return {-std::pow(t, beta) * inv_gamma * a * (1.0 - q) * s, static_cast<std::size_t>(*n)};
  }

  SeriesSum sx(policy, q);
  double kern = poch_real(q, beta, ctx, policy);
  double qk = 1.0;
  double qka = std::pow(q, alpha);
  for (long k = 0;; ++k) {
    if (sx.add(kern * f(lattice_point(t, k, q)) * qk)) break;
    kern *= (1.0 - qka) / (1.0 - qk * q);
    qk *= q;
    qka *= q;
  }
  double value = std::pow(t, alpha) * (1.0 - q) * inv_gamma * sx.value();
  std::size_t terms = sx.terms();

  if (a > 0.0) {
    SeriesSum sa(policy, q);
    const double qb = std::pow(q, beta);
    double b = a * q / t;
    double akern = poch_real(b, beta, ctx, policy);
    double qj = 1.0;
    for (long j = 0;; ++j) {
      if (sa.add(akern * f(lattice_point(a, j, q)) * qj)) break;
      const double den = 1.0 - b;
      const double next_b = b * q;
      if (akern == 0.0 || std::abs(den) < 1e-8)
        akern = poch_real(next_b, beta, ctx, policy);
      else
        akern *= (1.0 - b * qb) / den;
      b = next_b;
      qj *= q;
    }
    value -= std::pow(t, beta) * a * (1.0 - q) * inv_gamma * sa.value();
    terms += sa.terms();
  }
  return {value, terms};
}

// Jackson moments sum_j w_j q^{jk} of precomputed lattice terms w_j = f(anchor q^j) q^j.
struct Moments {
  std::vector<double> w;
  std::vector<double> qj;
  std::vector<double> power;

  explicit Moments(std::vector<double> terms, double q) : w(std::move(terms)) {
    qj.resize(w.size());
    power.assign(w.size(), 1.0);
    for (std::size_t j = 0; j < w.size(); ++j) qj[j] = std::pow(q, static_cast<double>(j));
  }

  // Moment of the current order, then advance the order by one.
  double next(double q, std::size_t k) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      s += w[j] * power[j];
      power[j] *= qj[j];
    }
    if (!w.empty()) {
      const double last = w.back() * std::pow(qj.back(), static_cast<double>(k));
      const double rho = std::pow(q, static_cast<double>(k + 1));
      s += last * rho / (1.0 - rho);
    }
    return s;
  }
};

std::vector<double> lattice_terms(const RealFn& f, double anchor, const QContext& ctx,
                                  const SeriesPolicy& policy) {
  const double q = ctx.q();
  std::vector<double> w;
  SeriesSum s(policy, q, false);
  double qk = 1.0;
  for (long k = 0;; ++k) {
    const double v = f(lattice_point(anchor, k, q)) * qk;
    w.push_back(v);
    if (s.add(v)) break;
    qk *= q;
  }
  return w;
}

Evaluation series_integral(const RealFn& f, double alpha, double a, double x, const QContext& ctx,
                           const SeriesPolicy& policy) {
  const double q = ctx.q();
  Moments mx(lattice_terms(f, x, ctx, policy), q);
  std::optional<Moments> ma;
  if (a > 0.0) ma.emplace(lattice_terms(f, a, ctx, policy), q);
  const double qa = std::pow(q, alpha);
  SeriesSum s(policy, qa);
  double c = 1.0;
  double ratio_pow = 1.0;
  for (std::size_t k = 0;; ++k) {
    double moment = x * mx.next(q, k);
    if (ma) moment -= a * ratio_pow * ma->next(q, k);
    if (s.add(c * moment)) break;
    const double qk1 = std::pow(q, static_cast<double>(k + 1));
    c *= (qa - qk1) / (1.0 - qk1);
    ratio_pow *= a / x;
  }
  const double value =
      std::pow(x, alpha - 1.0) * recip_q_gamma(alpha, ctx, policy) * (1.0 - q) * s.value();
  return {value, mx.w.size() + (ma ? ma->w.size() : 0) + s.terms()};
}

Evaluation stieltjes_integral(const RealFn& f, double alpha, double a, double x,
                              const QContext& ctx, const SeriesPolicy& policy) {
  const double q = ctx.q();
  const double scale = std::pow(x, alpha) * recip_q_gamma(alpha + 1.0, ctx, policy);
  const double qa = std::pow(q, alpha);

  // P_k = (q^k;q)_alpha; P_0 = 0
  SeriesSum sx(policy, q);
  double p = 0.0;
  double p_next = poch_real(q, alpha, ctx, policy);
  double qk = q;
  for (long k = 0;; ++k) {
    if (sx.add(f(lattice_point(x, k, q)) * (p_next - p))) break;
    p = p_next;
    p_next = p * (1.0 - qk * qa) / (1.0 - qk);
    qk *= q;
  }
  double value = scale * sx.value();
  std::size_t terms = sx.terms();

  if (a > 0.0) {
    const double r = a / x;
    SeriesSum sa(policy, q);
    double v = poch_real(r, alpha, ctx, policy);
    double rq = r;
    for (long j = 0;; ++j) {
      const double den = 1.0 - rq;
      const double v_next = (v == 0.0 || std::abs(den) < 1e-8)
                                ? poch_real(rq * q, alpha, ctx, policy)
                                : v * (1.0 - rq * qa) / den;
      if (sa.add(f(lattice_point(a, j, q)) * (v_next - v))) break;
      v = v_next;
      rq *= q;
    }
    value -= scale * sa.value();
    terms += sa.terms();
  }
  return {value, terms};
}

Evaluation rl_at(const RealFn& f, double alpha, double a, double t, const QContext& ctx,
                 const SeriesPolicy& policy) {
  if (alpha <= 0.0) return kernel_integral(f, -alpha, a, t, ctx, policy);
  const int n = ceil_order(alpha);
  if (near_integer(alpha)) return {q_diff_n(f, t, static_cast<unsigned>(n), ctx), 0};
  const double gamma = n - alpha;
  std::size_t terms = 0;
  const QContext c = ctx;
  const SeriesPolicy p = policy;
  RealFn inner([&f, gamma, a, c, p, &terms](double s) {
    Evaluation e = kernel_integral(f, gamma, a, s, c, p);
    terms += e.terms;
    return e.value;
  }, "I");
  const double v = q_diff_n(inner, t, static_cast<unsigned>(n), ctx);
  return {v, terms};
}

Evaluation caputo_at(const RealFn& f, double alpha, double a, double t, const QContext& ctx,
                     const SeriesPolicy& policy) {
  if (alpha <= 0.0) return kernel_integral(f, -alpha, a, t, ctx, policy);
  const int n = ceil_order(alpha);
  if (near_integer(alpha)) return {q_diff_n(f, t, static_cast<unsigned>(n), ctx), 0};
  return kernel_integral(q_diff_fn(f, static_cast<unsigned>(n), ctx), n - alpha, a, t, ctx, policy);
}

void check_limits(double a, double x, const QContext& ctx) {
  if (!(a >= 0.0)) throw DomainError("lower limit a must be nonnegative");
  if (!(x > 0.0)) throw DomainError("evaluation point x must be positive");
  if (a > x) throw DomainError("lower limit a exceeds x");
  if (x > ctx.domain_upper() * (1.0 + 1e-12)) throw DomainError("x lies outside (0, b]");
}

bool same_point(double a, double x) { return std::abs(x - a) <= 1e-14 * x; }

}  // namespace

FracOperator::FracOperator(FracKind kind, double order, double lower, FracMethod method)
    : kind_(kind), order_(order), lower_(lower), method_(method) {
  if (!(lower >= 0.0)) throw DomainError("lower limit must be nonnegative");
  if (kind == FracKind::Integral && !(order >= 0.0))
    throw DomainError("fractional integral order must be nonnegative");
  if (!std::isfinite(order)) throw DomainError("order must be finite");
}

Evaluation FracOperator::apply(const RealFn& f, double x, const QContext& ctx,
                               const SeriesPolicy& policy) const {
  switch (kind_) {
    case FracKind::Integral: return frac_integral_eval(f, order_, lower_, x, method_, ctx, policy);
    case FracKind::RiemannLiouville: return rl_derivative_eval(f, order_, lower_, x, ctx, policy);
    case FracKind::Caputo: return caputo_derivative_eval(f, order_, lower_, x, ctx, policy);
  }
  throw DomainError("unknown operator kind");
}

RealFn FracOperator::bind(const RealFn& f, const QContext& ctx, const SeriesPolicy& policy) const {
  switch (kind_) {
    case FracKind::Integral: return frac_integral_fn(f, order_, lower_, ctx, policy);
    case FracKind::RiemannLiouville: return rl_derivative_fn(f, order_, lower_, ctx, policy);
    case FracKind::Caputo: return caputo_derivative_fn(f, order_, lower_, ctx, policy);
  }
  throw DomainError("unknown operator kind");
}

WeightFn::WeightFn(double alpha, const QContext& ctx, const SeriesPolicy& policy)
    : alpha_(alpha), ctx_(ctx), policy_(policy) {
  if (!(alpha > 0.0)) throw DomainError("weight order must be positive");
  inv_gamma_ = recip_q_gamma(alpha + 1.0, ctx, policy);
}

double WeightFn::operator()(double x, double t) const {
  const double xa = std::pow(x, alpha_);
  return (xa - xa * poch_real(t / x, alpha_, ctx_, policy_)) * inv_gamma_;
}

Evaluation frac_integral_eval(const RealFn& f, double alpha, double a, double x, FracMethod method,
                              const QContext& ctx, const SeriesPolicy& policy) {
  if (!(alpha >= 0.0)) throw DomainError("fractional integral order must be nonnegative");
  check_limits(a, x, ctx);
  if (alpha == 0.0) return {f(x), 1};
  if (same_point(a, x)) return {0.0, 0};
  switch (method) {
    case FracMethod::Kernel: return kernel_integral(f, alpha, a, x, ctx, policy);
    case FracMethod::Series: return series_integral(f, alpha, a, x, ctx, policy);
    case FracMethod::Stieltjes: return stieltjes_integral(f, alpha, a, x, ctx, policy);
  }
  throw DomainError("unknown method");
}

double frac_integral(const RealFn& f, double alpha, double a, double x, FracMethod method,
                     const QContext& ctx, const SeriesPolicy& policy) {
  return frac_integral_eval(f, alpha, a, x, method, ctx, policy).value;
}

double frac_integral(const RealFn& f, double alpha, double a, double x, const QContext& ctx,
                     const SeriesPolicy& policy) {
  return frac_integral_eval(f, alpha, a, x, FracMethod::Kernel, ctx, policy).value;
}

Evaluation rl_derivative_eval(const RealFn& f, double alpha, double a, double x,
                              const QContext& ctx, const SeriesPolicy& policy) {
  check_limits(a, x, ctx);
  return rl_at(f, alpha, a, x, ctx, policy);
}

double rl_derivative(const RealFn& f, double alpha, double a, double x, const QContext& ctx,
                     const SeriesPolicy& policy) {
  return rl_derivative_eval(f, alpha, a, x, ctx, policy).value;
}

Evaluation caputo_derivative_eval(const RealFn& f, double alpha, double a, double x,
                                  const QContext& ctx, const SeriesPolicy& policy) {
  check_limits(a, x, ctx);
  return caputo_at(f, alpha, a, x, ctx, policy);
}

double caputo_derivative(const RealFn& f, double alpha, double a, double x, const QContext& ctx,
                         const SeriesPolicy& policy) {
  return caputo_derivative_eval(f, alpha, a, x, ctx, policy).value;
}

RealFn frac_integral_fn(const RealFn& f, double alpha, double a, const QContext& ctx,
                        const SeriesPolicy& policy) {
  if (!(alpha >= 0.0)) throw DomainError("fractional integral order must be nonnegative");
  if (alpha == 0.0) return f;
  const QContext c = ctx;
  const SeriesPolicy p = policy;
  return RealFn([f, alpha, a, c, p](double t) { return kernel_integral(f, alpha, a, t, c, p).value; },
                "I(" + f.label() + ")");
}

RealFn rl_derivative_fn(const RealFn& f, double alpha, double a, const QContext& ctx,
                        const SeriesPolicy& policy) {
  if (alpha <= 0.0) return frac_integral_fn(f, -alpha, a, ctx, policy);
  if (near_integer(alpha)) return q_diff_fn(f, static_cast<unsigned>(ceil_order(alpha)), ctx);
  const QContext c = ctx;
  const SeriesPolicy p = policy;
  return RealFn([f, alpha, a, c, p](double t) { return rl_at(f, alpha, a, t, c, p).value; },
                "D(" + f.label() + ")");
}

RealFn caputo_derivative_fn(const RealFn& f, double alpha, double a, const QContext& ctx,
                            const SeriesPolicy& policy) {
  if (alpha <= 0.0) return frac_integral_fn(f, -alpha, a, ctx, policy);
  const unsigned n = static_cast<unsigned>(ceil_order(alpha));
  if (near_integer(alpha)) return q_diff_fn(f, n, ctx);
  return frac_integral_fn(q_diff_fn(f, n, ctx), n - alpha, a, ctx, policy);
}

RealFn scaled_power_kernel(double c, double lambda, double a, const QContext& ctx,
                           const SeriesPolicy& policy) {
  if (c == 0.0) return constant_fn(0.0);
  const QContext qc = ctx;
  const SeriesPolicy p = policy;
  auto eval = [c, lambda, a, qc, p](double t) {
    if (lambda == 0.0) return c;
    return c * std::pow(t, lambda) * poch_real(a / t, lambda, qc, p);
  };
  auto deriv = [c, lambda, a, qc, p] {
    return scaled_power_kernel(c * q_number(lambda, qc), lambda - 1.0, a, qc, p);
  };
  return RealFn(eval, "pk:" + std::to_string(lambda), deriv);
}

RealFn power_kernel(double lambda, double a, const QContext& ctx, const SeriesPolicy& policy) {
  if (!(lambda > -1.0)) throw DomainError("power kernel needs lambda > -1");
  if (!(a >= 0.0)) throw DomainError("power kernel needs a >= 0");
  return scaled_power_kernel(1.0, lambda, a, ctx, policy);
}

namespace {

void check_closed(double a, double x, double alpha) {
  if (!(a >= 0.0) || !(a < x)) throw DomainError("closed forms need 0 <= a < x");
  if (!(alpha > 0.0)) throw DomainError("closed forms need alpha > 0");
}

// x^s (a/x;q)_s / (q;q)_s, zero when 1/(q;q)_s vanishes.
double kernel_over_qfact(double s, double a, double x, const QContext& ctx,
                         const SeriesPolicy& policy) {
  const double r = recip_q_gamma(s + 1.0, ctx, policy);
  if (r == 0.0) return 0.0;
  return std::pow(x, s) * poch_real(a / x, s, ctx, policy) * r * std::pow(1.0 - ctx.q(), -s);
}

}  // namespace

double closed_power_kernel(FracKind which, double lambda, double alpha, double a, double x,
                           const QContext& ctx, const SeriesPolicy& policy) {
  if (!(lambda > -1.0)) throw DomainError("closed power kernel needs lambda > -1");
  check_closed(a, x, alpha);
  const double g = q_gamma(lambda + 1.0, ctx, policy);
  if (which == FracKind::Integral) {
    const double s = lambda + alpha;
    return g * recip_q_gamma(s + 1.0, ctx, policy) * std::pow(x, s) * poch_real(a / x, s, ctx, policy);
  }
  if (which == FracKind::Caputo && near_integer(lambda) && lambda > -0.5 && alpha > lambda)
    return 0.0;
  const double s = lambda - alpha;
  const double r = recip_q_gamma(s + 1.0, ctx, policy);
  if (r == 0.0) return 0.0;
  return g * r * std::pow(x, s) * poch_real(a / x, s, ctx, policy);
}

namespace {

double monomial_sum(double sign, unsigned k_from, unsigned n, double alpha, double a, double x,
                    const QContext& ctx, const SeriesPolicy& policy) {
  const double q = ctx.q();
  double s = 0.0;
  for (unsigned k = k_from; k <= n; ++k) {
    const double coef = std::pow(a, static_cast<double>(n - k)) *
                        poch_int(std::pow(q, static_cast<double>(n - k + 1)), k, ctx);
    if (coef == 0.0) continue;
    s += coef * kernel_over_qfact(k + sign * alpha, a, x, ctx, policy);
  }
  return std::pow(1.0 - q, sign * alpha) * s;
}

}  // namespace

double closed_monomial(FracKind which, unsigned n, double alpha, double a, double x,
                       const QContext& ctx, const SeriesPolicy& policy) {
  check_closed(a, x, alpha);
  switch (which) {
    case FracKind::Integral: return monomial_sum(1.0, 0, n, alpha, a, x, ctx, policy);
    case FracKind::RiemannLiouville: return monomial_sum(-1.0, 0, n, alpha, a, x, ctx, policy);
    case FracKind::Caputo: {
      const int m = ceil_order(alpha);
      if (m > static_cast<int>(n)) return 0.0;
      return monomial_sum(-1.0, static_cast<unsigned>(m), n, alpha, a, x, ctx, policy);
    }
  }
  throw DomainError("unknown operator kind");
}

double closed_monomial_caputo_printed(unsigned n, double alpha, double a, double x,
                                      const QContext& ctx, const SeriesPolicy& policy) {
  check_closed(a, x, alpha);
  const int m = ceil_order(alpha);
  if (m > static_cast<int>(n)) return 0.0;
  const double pre = poch_int(std::pow(ctx.q(), static_cast<double>(n + 1 - m)),
                              static_cast<unsigned>(m), ctx);
  return pre * monomial_sum(-1.0, static_cast<unsigned>(m), n, alpha, a, x, ctx, policy);
}

double closed_qexp(QExpKind exp_kind, FracKind which, double alpha, double a, double x, unsigned N,
                   const QContext& ctx, const SeriesPolicy& policy) {
  check_closed(a, x, alpha);
  if (exp_kind == QExpKind::SmallE && !(a > 0.0 && x < 1.0))
    throw DomainError("e_q closed form needs 0 < a < x < 1");
  if (exp_kind == QExpKind::BigE && !(a > 0.0))
    throw DomainError("E_q closed form needs 0 < a < x");
  const double q = ctx.q();
  const double sign = which == FracKind::Integral ? 1.0 : -1.0;
  const unsigned start = which == FracKind::Caputo ? static_cast<unsigned>(ceil_order(alpha)) : 0;
  double s = 0.0;
  double big_factor = 1.0;  // q^{n(n-1)/2} / (-a;q)_n
  for (unsigned n = 0; n < N; ++n) {
    if (n >= start) {
      const double term = kernel_over_qfact(n + sign * alpha, a, x, ctx, policy);
      s += exp_kind == QExpKind::BigE ? big_factor * term : term;
    }
    big_factor *= std::pow(q, static_cast<double>(n)) / (1.0 + a * std::pow(q, static_cast<double>(n)));
  }
  const double base = exp_kind == QExpKind::SmallE ? e_q(a, ctx, policy) : E_q(a, ctx, policy);
  return base * std::pow(1.0 - q, sign * alpha) * s;
}

double rl_from_caputo(const RealFn& f, double alpha, double a, double x, const QContext& ctx,
                      const SeriesPolicy& policy) {
  check_closed(a, x, alpha);
  double v = caputo_derivative(f, alpha, a, x, ctx, policy);
  const int m = ceil_order(alpha);
  for (int k = 0; k < m; ++k) {
    const double r = recip_q_gamma(1.0 + k - alpha, ctx, policy);
    if (r == 0.0) continue;
    if (k > 0 && a == 0.0) throw DomainError("D_q^k f(0) is undefined for k >= 1");
    const double dk = k == 0 ? f(a) : q_diff_n(f, a, static_cast<unsigned>(k), ctx);
    v += dk * r * std::pow(x, k - alpha) * poch_real(a / x, k - alpha, ctx, policy);
  }
  return v;
}

}  // namespace qfrac
