#include <cmath>
#include <string>

#include "doctest.h"
#include "qfrac/fractional.hpp"
#include "qfrac/functions.hpp"
#include "support.hpp"

using namespace qfrac;

namespace {
const QContext h(0.5);
}

TEST_SUITE("functions") {

TEST_CASE("registry names evaluate as documented") {
  const double t = 0.7;
  CHECK(FnSpec::parse("one").make(0.3, h)(t) == 1.0);
  CHECK(FnSpec::parse("x").make(0.3, h)(t) == t);
  CHECK(FnSpec::parse("x2").make(0.3, h)(t) == doctest::Approx(t * t).epsilon(1e-15));
  CHECK(FnSpec::parse("xn:3").make(0.3, h)(t) == doctest::Approx(t * t * t).epsilon(1e-15));
  CHECK(FnSpec::parse("xn:0").make(0.3, h)(t) == 1.0);
  CHECK_REL(FnSpec::parse("pk:1").make(0.3, h)(t), t - 0.3, 1e-15);
  CHECK_REL(FnSpec::parse("pk:0.5").make(0.3, h)(t), power_kernel(0.5, 0.3, h)(t), 1e-15);
  CHECK_REL(FnSpec::parse("eq").make(0.3, h)(t), e_q(t, h), 1e-15);
  CHECK_REL(FnSpec::parse("Eq").make(0.3, h)(t), E_q(t, h), 1e-15);
  CHECK_REL(FnSpec::parse("poly:1,-2,0.5").make(0.3, h)(t), 1.0 - 2.0 * t + 0.5 * t * t, 1e-15);
  CHECK_REL(FnSpec::parse("poly:1;-2;0.5").make(0.3, h)(t), 1.0 - 2.0 * t + 0.5 * t * t, 1e-15);
  const RealFn d = FnSpec::parse("delta:0.3").make(0.3, h);
  CHECK(d(0.3) == 1.0);
  CHECK(d(0.15) == 0.0);
  CHECK(d(0.3000001) == 0.0);
}

TEST_CASE("kinds and the unit-interval flag") {
  CHECK(FnSpec::parse("eq").needs_unit_interval());
  CHECK_FALSE(FnSpec::parse("Eq").needs_unit_interval());
  CHECK(FnSpec::parse("pk:2.5").kind() == FnSpec::Kind::PowerKernel);
  CHECK(FnSpec::parse("poly:3").kind() == FnSpec::Kind::Poly);
  CHECK(FnSpec::parse("xn:4").text() == "xn:4");
}

TEST_CASE("malformed specs are rejected") {
  for (const char* bad : {"", "foo", "X2", "one:1", "xn", "xn:", "xn:-1", "xn:1.5", "pk", "pk:abc",
                          "pk:-1", "pk:-2.5", "poly", "poly:", "poly:1,,2", "poly:1,x", "delta:0",
                          "delta:-0.3", "eq:2", "pk:1e999"}) {
    INFO(bad);
    CHECK_THROWS_AS(FnSpec::parse(bad), DomainError);
  }
}

TEST_CASE("exact q-derivatives match difference quotients") {
  for (const char* spec : {"x2", "xn:5", "poly:1,-2,0.5,3", "eq", "Eq", "pk:1", "pk:2.5"}) {
    const RealFn f = FnSpec::parse(spec).make(0.2, h);
    for (unsigned n = 0; n <= 3; ++n)
      for (double x : {0.4, 0.6, 0.9}) {
        INFO(spec << " n=" << n << " x=" << x);
        const double exact = q_diff_n(f, x, n, h);
        CHECK_ABS(exact, q_diff_n(f.without_qderivative(), x, n, h), 1e-8 * std::max(1.0, std::fabs(exact)));
      }
  }
}

}  // TEST_SUITE
