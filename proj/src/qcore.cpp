#include "qfrac/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qfrac {

QContext::QContext(double q, double domain_upper) : q_(q), b_(domain_upper) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0,1), got " + std::to_string(q));
  if (!(domain_upper > 0.0)) throw DomainError("domain_upper must be positive");
}

SeriesPolicy::SeriesPolicy(double rel_tol, double abs_tol, std::size_t max_terms)
    : rel_tol_(rel_tol), abs_tol_(abs_tol), max_terms_(max_terms) {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_terms < 1)
    throw DomainError("SeriesPolicy needs rel_tol > 0, abs_tol > 0, max_terms >= 1");
}

bool near_integer(double v, double tol) {
  return std::abs(v - std::round(v)) <= tol * std::max(1.0, std::abs(v));
}

SeriesSum::SeriesSum(const SeriesPolicy& policy, double ratio_hint, bool add_tail)
    : policy_(policy), ratio_hint_(ratio_hint), add_tail_(add_tail) {}

bool SeriesSum::add(double term) {
  if (n_ >= policy_.max_terms())
    throw ConvergenceError("series did not converge within " +
                           std::to_string(policy_.max_terms()) + " terms");
  if (!std::isfinite(term)) throw ConvergenceError("non-finite series term");
  // Neumaier summation
  const double t = sum_ + term;
  if (std::abs(sum_) >= std::abs(term))
    comp_ += (sum_ - t) + term;
  else
    comp_ += (term - t) + sum_;
  sum_ = t;
  last_[0] = last_[1];
  last_[1] = last_[2];
  last_[2] = term;
  ++n_;
  if (n_ < 3) return false;

  const double m = std::max({std::abs(last_[0]), std::abs(last_[1]), std::abs(last_[2])});
  double rho;
  double signed_rho;
  if (ratio_hint_ >= 0.0) {
    rho = ratio_hint_;
    signed_rho = ratio_hint_;
  } else if (m == 0.0) {
    rho = 0.0;
    signed_rho = 0.0;
  } else if (last_[1] == 0.0 || last_[0] == 0.0) {
    hits_ = 0;
    return false;
  } else {
    signed_rho = last_[2] / last_[1];
    rho = std::max(std::abs(signed_rho), std::abs(last_[1] / last_[0]));
  }
  if (rho >= 1.0) {
    hits_ = 0;
    return false;
  }
  const double bound = m * rho / (1.0 - rho);
  const double s = std::abs(sum_ + comp_);
  if (bound <= policy_.rel_tol() * s || bound <= policy_.abs_tol())
    ++hits_;
  else
    hits_ = 0;
  if (hits_ < 3) return false;
  sum_ += comp_;
  comp_ = 0.0;
  if (add_tail_ && std::abs(signed_rho) < 1.0) tail_ = term * signed_rho / (1.0 - signed_rho);
  return true;
}

namespace {

// prod_{i>=0} (1 - z q^i) / (1 - w q^i); w = 0 gives (z;q)_inf.
double ratio_product(double z, double w, double q, const SeriesPolicy& policy) {
  const double cut = std::min(0.25, 1.0 - q);
  double prod = 1.0;
  bool zero = false;
  double qi = 1.0;
  std::size_t i = 0;
  while (std::abs(z * qi) >= cut || std::abs(w * qi) >= cut) {
    if (i >= policy.max_terms())
      throw ConvergenceError("q-Pochhammer product exceeded " +
                             std::to_string(policy.max_terms()) + " factors");
    const double num = 1.0 - z * qi;
    const double den = 1.0 - w * qi;
    if (std::abs(den) < kLatticeSnap)
      throw SingularityError("q-Pochhammer denominator factor vanishes");
    if (std::abs(num) < kLatticeSnap)
      zero = true;
    else
      prod *= num / den;
    ++i;
    qi = (i % 64 == 0) ? std::pow(q, static_cast<double>(i)) : qi * q;
  }
  if (zero) return 0.0;
  // log of the remaining tail: -sum_m (z_N^m - w_N^m) / (m (1 - q^m))
  const double zn = z * qi;
  const double wn = w * qi;
  double log_tail = 0.0;
  double zm = 1.0, wm = 1.0, qm = 1.0;
  for (int m = 1; m < 400; ++m) {
    zm *= zn;
    wm *= wn;
    qm *= q;
    const double term = (zm - wm) / (m * (1.0 - qm));
    log_tail -= term;
    if (std::abs(term) <= 1e-18 * (1.0 + std::abs(log_tail))) break;
  }
  return prod * std::exp(log_tail);
}

double lattice_factor(double z) {
  const double f = 1.0 - z;
  return std::abs(f) < kLatticeSnap ? 0.0 : f;
}

}  // namespace

double q_number(double alpha, const QContext& ctx) {
  const double q = ctx.q();
  return -std::expm1(alpha * std::log(q)) / (1.0 - q);
}

double q_factorial(unsigned n, const QContext& ctx) {
  double r = 1.0;
  for (unsigned k = 1; k <= n; ++k) r *= q_number(k, ctx);
  return r;
}

double poch_int(double a, unsigned k, const QContext& ctx) {
  double r = 1.0;
  for (unsigned i = 0; i < k; ++i) r *= lattice_factor(a * std::pow(ctx.q(), i));
  return r;
}

double poch_inf(double a, const QContext& ctx, const SeriesPolicy& policy) {
  if (a == 0.0) return 1.0;
  return ratio_product(a, 0.0, ctx.q(), policy);
}

double poch_real(double a, double alpha, const QContext& ctx, const SeriesPolicy& policy) {
  if (a == 0.0 || alpha == 0.0) return 1.0;
  const double q = ctx.q();
  if (near_integer(alpha)) {
    const long n = std::lround(alpha);
    if (n >= 0) return poch_int(a, static_cast<unsigned>(n), ctx);
    double d = 1.0;
    for (long j = 1; j <= -n; ++j) d *= lattice_factor(a * std::pow(q, -static_cast<double>(j)));
    if (d == 0.0) throw SingularityError("negative-order q-Pochhammer hits a zero factor");
    return 1.0 / d;
  }
  return ratio_product(a, a * std::pow(q, alpha), q, policy);
}

double q_binomial(double alpha, unsigned k, const QContext& ctx) {
  const double q = ctx.q();
  double r = 1.0;
  for (unsigned i = 0; i < k; ++i)
    r *= lattice_factor(std::pow(q, alpha - i)) / (1.0 - std::pow(q, i + 1.0));
  return r;
}

static bool is_pole(double x) {
  return std::abs(x - std::round(x)) < kPoleSnap && std::round(x) <= 0.0;
}

double q_gamma(double x, const QContext& ctx, const SeriesPolicy& policy) {
  if (is_pole(x)) throw PoleError("q-gamma pole at x = " + std::to_string(x));
  const double q = ctx.q();
  if (x == 1.0 || x == 2.0) return 1.0;
  return ratio_product(q, std::pow(q, x), q, policy) * std::pow(1.0 - q, 1.0 - x);
}

double recip_q_gamma(double x, const QContext& ctx, const SeriesPolicy& policy) {
  if (is_pole(x)) return 0.0;
  return 1.0 / q_gamma(x, ctx, policy);
}

double e_q(double x, const QContext& ctx, const SeriesPolicy& policy) {
  if (!(std::abs(x) < 1.0)) throw DomainError("e_q needs |x| < 1");
  if (x == 0.0) return 1.0;
  // the alternating series cancels; 1/(x;q)_inf is the same function
  if (x < 0.0) return 1.0 / poch_inf(x, ctx, policy);
  const double q = ctx.q();
  SeriesSum s(policy, std::abs(x));
  double t = 1.0, qn = 1.0;
  while (!s.add(t)) {
    qn *= q;
    t *= x / (1.0 - qn);
  }
  return s.value();
}

double E_q(double x, const QContext& ctx, const SeriesPolicy& policy) {
  if (x == 0.0) return 1.0;
  if (x < 0.0) return poch_inf(-x, ctx, policy);
  const double q = ctx.q();
  SeriesSum s(policy);
  double t = 1.0, qn = 1.0;
  while (!s.add(t)) {
    t *= qn * x / (1.0 - qn * q);
    qn *= q;
  }
  return s.value();
}

static bool terminating_parameter(double a, double q) {
  if (!(a >= 1.0)) return false;
  const double m = std::log(a) / -std::log(q);
  return near_integer(m, 1e-10);
}

double phi21(double a, double b, double c, double x, const QContext& ctx,
             const SeriesPolicy& policy) {
  const double q = ctx.q();
  if (!(std::abs(x) < 1.0) && !terminating_parameter(a, q) && !terminating_parameter(b, q))
    throw DomainError("phi21 needs |x| < 1 unless the series terminates");
  if (x == 0.0) return 1.0;
  SeriesSum s(policy, -1.0, std::abs(x) < 1.0);
  double t = 1.0, qn = 1.0;
  while (!s.add(t)) {
    const double num = lattice_factor(a * qn) * lattice_factor(b * qn);
    if (num == 0.0) break;
    const double den = lattice_factor(c * qn);
    if (den == 0.0) throw SingularityError("phi21: (c;q)_n vanishes");
    t *= num * x / (den * (1.0 - qn * q));
    qn *= q;
  }
  return s.value();
}

SSeries s_series(double alpha, double beta, double mu, const QContext& ctx,
                 const SeriesPolicy& policy) {
  if (!(alpha > 0.0) || !(beta > 0.0) || mu < 0.0)
    throw DomainError("s_series needs alpha, beta > 0 and mu >= 0");
  const double q = ctx.q();
  const double norm =
      poch_real(q, alpha - 1.0, ctx, policy) * poch_real(q, beta - 1.0, ctx, policy);
  SeriesSum s(policy);
  for (std::size_t n = 0;; ++n) {
    const double dn = static_cast<double>(n);
    const double qn = std::pow(q, dn);
    const double t = poch_real(mu * q / qn, alpha - 1.0, ctx, policy) *
                     poch_real(q * qn, beta - 1.0, ctx, policy) *
                     std::pow(q, alpha * dn) / norm;
    if (s.add(t)) break;
  }
  return {s.value(), s_series_closed(alpha, beta, mu, ctx, policy), s.terms()};
}

double s_series_closed(double alpha, double beta, double mu, const QContext& ctx,
                       const SeriesPolicy& policy) {
  const double q = ctx.q();
  return poch_real(mu * q, alpha + beta - 1.0, ctx, policy) /
         poch_real(q, alpha + beta - 1.0, ctx, policy);
}

}  // namespace qfrac
