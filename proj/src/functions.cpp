#include "qfrac/functions.hpp"

#include <charconv>
#include <cmath>

#include "qfrac/fractional.hpp"

namespace qfrac {

namespace {

double parse_number(const std::string& s, const std::string& whole) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
    throw DomainError("bad number '" + s + "' in function spec '" + whole + "'");
  return v;
}

}  // namespace

FnSpec FnSpec::parse(const std::string& text) {
  FnSpec spec;
  spec.text_ = text;
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  const bool has_arg = colon != std::string::npos;
  auto no_arg = [&](Kind k) {
    if (has_arg) throw DomainError("function '" + name + "' takes no parameter");
    spec.kind_ = k;
  };
  if (name == "one") {
    no_arg(Kind::One);
  } else if (name == "x") {
    no_arg(Kind::X);
  } else if (name == "x2") {
    no_arg(Kind::X2);
  } else if (name == "eq") {
    no_arg(Kind::SmallE);
  } else if (name == "Eq") {
    no_arg(Kind::BigE);
  } else if (name == "xn" || name == "pk" || name == "delta") {
    if (!has_arg) throw DomainError("function '" + name + "' needs a parameter");
    const double v = parse_number(arg, text);
    if (name == "xn") {
      if (v < 0.0 || v != std::floor(v) || v > 1000.0)
        throw DomainError("xn needs a nonnegative integer exponent");
      spec.kind_ = Kind::Xn;
    } else if (name == "pk") {
      if (!(v > -1.0)) throw DomainError("pk needs lambda > -1");
      spec.kind_ = Kind::PowerKernel;
    } else {
      if (!(v > 0.0)) throw DomainError("delta needs a positive support point");
      spec.kind_ = Kind::Delta;
    }
    spec.params_.push_back(v);
  } else if (name == "poly") {
    if (!has_arg || arg.empty()) throw DomainError("poly needs coefficients");
    std::size_t start = 0;
    while (start <= arg.size()) {
      const auto end = arg.find_first_of(",;", start);
      spec.params_.push_back(parse_number(arg.substr(start, end - start), text));
      if (end == std::string::npos) break;
      start = end + 1;
    }
    spec.kind_ = Kind::Poly;
  } else {
    throw DomainError("unknown function '" + text + "'");
  }
  return spec;
}

RealFn FnSpec::make(double a, const QContext& ctx, const SeriesPolicy& policy) const {
  RealFn f = [&]() -> RealFn {
    switch (kind_) {
      case Kind::One: return polynomial_fn({1.0}, ctx);
      case Kind::X: return polynomial_fn({0.0, 1.0}, ctx);
      case Kind::X2: return polynomial_fn({0.0, 0.0, 1.0}, ctx);
      case Kind::Xn: {
        std::vector<double> c(static_cast<std::size_t>(params_[0]) + 1, 0.0);
        c.back() = 1.0;
        return polynomial_fn(c, ctx);
      }
      case Kind::PowerKernel: return power_kernel(params_[0], a, ctx, policy);
      case Kind::SmallE: return small_e_fn(1.0, ctx, policy);
      case Kind::BigE: return big_e_fn(1.0, 0, ctx, policy);
      case Kind::Poly: return polynomial_fn(params_, ctx);
      case Kind::Delta: return point_mass_fn(params_[0]);
    }
    throw DomainError("unknown function kind");
  }();
  return f;
}

RealFn polynomial_fn(std::vector<double> coeffs, const QContext& ctx) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  if (coeffs.empty()) coeffs.push_back(0.0);
  const QContext c = ctx;
  auto eval = [coeffs](double t) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * t + *it;
    return v;
  };
  auto deriv = [coeffs, c] {
    if (coeffs.size() <= 1) return polynomial_fn({0.0}, c);
    std::vector<double> d(coeffs.size() - 1);
    for (std::size_t k = 1; k < coeffs.size(); ++k) d[k - 1] = coeffs[k] * q_number(k, c);
    return polynomial_fn(d, c);
  };
  return RealFn(eval, "poly", deriv);
}

RealFn small_e_fn(double c, const QContext& ctx, const SeriesPolicy& policy) {
  const QContext qc = ctx;
  const SeriesPolicy p = policy;
  return RealFn([c, qc, p](double t) { return c * e_q(t, qc, p); }, "eq",
                [c, qc, p] { return small_e_fn(c / (1.0 - qc.q()), qc, p); });
}

RealFn big_e_fn(double c, int s, const QContext& ctx, const SeriesPolicy& policy) {
  const QContext qc = ctx;
  const SeriesPolicy p = policy;
  const double qs = std::pow(ctx.q(), s);
  return RealFn([c, qs, qc, p](double t) { return c * E_q(qs * t, qc, p); }, "Eq",
                [c, s, qs, qc, p] { return big_e_fn(c * qs / (1.0 - qc.q()), s + 1, qc, p); });
}

RealFn point_mass_fn(double t0) {
  return RealFn([t0](double t) { return std::abs(t - t0) <= 1e-12 * t0 ? 1.0 : 0.0; }, "delta");
}

}  // namespace qfrac
