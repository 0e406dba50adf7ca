#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qfrac/cli.hpp"
#include "qfrac/fractional.hpp"
#include "qfrac/functions.hpp"
#include "cli_cases.hpp"
#include "support.hpp"

using namespace qfrac;
using namespace clitest;

namespace {

// Scoped QFRAC_MAX_TERMS.
struct EnvVar {
  explicit EnvVar(const char* v) { setenv("QFRAC_MAX_TERMS", v, 1); }
  ~EnvVar() { unsetenv("QFRAC_MAX_TERMS"); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("golden outputs") {
  const std::filesystem::path dir = QFRAC_GOLDEN_DIR;
  const bool update = std::getenv("QFRAC_UPDATE_GOLDEN") != nullptr;
  for (const Golden& g : kGolden) {
    INFO(std::string(g.args));
    const Run r = run(split(g.args));
    CHECK(r.code == g.code);
    if (update) {
      std::ofstream(dir / g.file, std::ios::binary) << r.out;
      continue;
    }
    REQUIRE(std::filesystem::exists(dir / g.file));
    CHECK(r.out == slurp(dir / g.file));
    CHECK(run(split(g.args)).out == r.out);
  }
}

TEST_CASE("eval adds no arithmetic") {
  const QContext c(0.5);
  const Run r = run(split("eval --op I --alpha 0.5 --a 0.3 --x 1 --q 0.5 --fn pk:1"));
  REQUIRE(r.code == 0);
  const double v = std::stod(r.out);
  CHECK(v == frac_integral(FnSpec::parse("pk:1").make(0.3, c), 0.5, 0.3, 1.0, c));
  CHECK_REL(v, closed_power_kernel(FracKind::Integral, 1.0, 0.5, 0.3, 1.0, c), 1e-10);
  CHECK(std::stod(run(split("eval --op I --alpha 1 --a 0.3 --x 1 --q 0.5 --fn one")).out) ==
        doctest::Approx(0.7).epsilon(1e-15));
  CHECK(run(split("eval --op C --alpha 0.5 --a 0.3 --x 1 --q 0.5 --fn one")).out == "0\n");
}

TEST_CASE("table values") {
  const Run r = run(split("table --op D --alpha 0.5 --a 0.3 --x 1 --q 0.5 --fn x2 --points 4 --format csv"));
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,value,method,alpha,a,q,terms_used");
  const QContext c(0.5);
  int rows = 0;
  double prev_x = 0.3;
  while (std::getline(in, line)) {
    const double x = std::stod(line.substr(0, line.find(',')));
    const double v = std::stod(line.substr(line.find(',') + 1));
    CHECK(x > prev_x);
    prev_x = x;
    CHECK_REL(v, closed_monomial(FracKind::RiemannLiouville, 2, 0.5, 0.3, x, c), 1e-10);
    ++rows;
  }
  CHECK(rows == 4);
  const Run t = run(split("table --op I --alpha 1 --a 0 --x 1 --q 0.5 --fn x --points 2 --format csv"));
  CHECK(t.out.find("0.16666666666666666") != std::string::npos);
  CHECK(t.out.find("0.66666666666666663") != std::string::npos);
}

TEST_CASE("table --out writes the same bytes") {
  const auto path = std::filesystem::temp_directory_path() / "qfrac_table_out.csv";
  std::filesystem::remove(path);
  const std::string args = "table --op I --alpha 1 --a 0 --x 1 --q 0.5 --fn x --points 2 --format csv";
  const Run r = run(split(args + " --out " + path.string()));
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(path) == run(split(args)).out);
  std::filesystem::remove(path);
}

TEST_CASE("failed tables print nothing") {
  const Run r = run(split("table --op I --alpha 0.5 --a 0 --x 1 --q 0.9 --fn one --points 3 --max-terms 20"));
  CHECK(r.code == 3);
  CHECK(r.out.empty());
  CHECK(r.err.find("ConvergenceError") != std::string::npos);
}

TEST_CASE("sweep output does not depend on --jobs") {
  for (const char* fmt : {"json", "csv"}) {
    const std::string base = std::string("sweep semigroup --tol 1e-8 --format ") + fmt;
    const Run one = run(split(base + " --jobs 1"));
    CHECK(one.code == 0);
    CHECK(run(split(base + " --jobs 4")).out == one.out);
  }
}

TEST_CASE("sweep summary") {
  const Run r = run(split("sweep semigroup --tol 1e-8"));
  CHECK(r.code == 0);
  CHECK(r.out.find("\"failed\": 0") != std::string::npos);
  const Run csv = run(split("sweep poch_fp4 --grid n=1,2,3 --grid k=0,1 --tol 1e-10 --format csv"));
  CHECK(csv.out.find("\n\ntotal,passed,failed,skipped,max_rel_residual\n") != std::string::npos);
}

TEST_CASE("exit-code matrix") {
  for (const ExitCase& c : kExitCases) {
    INFO(std::string(c.args));
    const Run r = run(split(c.args));
    CHECK(r.code == c.code);
    if (c.code == 2 || c.code == 3) CHECK_FALSE(r.err.empty());
  }
}

TEST_CASE("QFRAC_MAX_TERMS") {
  const std::string slow = "eval --op I --alpha 0.5 --a 0 --x 1 --q 0.9 --fn one";
  {
    EnvVar e("5");
    CHECK(run(split(slow)).code == 3);
    CHECK(run(split(slow + " --max-terms 10000")).code == 0);
  }
  {
    EnvVar e("abc");
    CHECK(run(split(slow)).code == 2);
  }
  {
    EnvVar e("0");
    CHECK(run(split(slow)).code == 2);
  }
  CHECK(run(split(slow)).code == 0);
}

}  // TEST_SUITE
