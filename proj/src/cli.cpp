#include "qfrac/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "qfrac/fractional.hpp"
#include "qfrac/functions.hpp"
#include "qfrac/identities.hpp"

namespace qfrac {

namespace {

// Bad flags or values; exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<std::size_t> env_max_terms() {
  const char* s = std::getenv("QFRAC_MAX_TERMS");
  if (!s) return std::nullopt;
  const std::string text(s);
  unsigned long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || v == 0)
    throw UsageError("QFRAC_MAX_TERMS must be a positive integer");
  return static_cast<std::size_t>(v);
}

SeriesPolicy make_policy(std::optional<double> rel_tol, std::optional<long long> max_terms_flag) {
  SeriesPolicy p;
  if (auto env = env_max_terms()) p = p.with_max_terms(*env);
  if (max_terms_flag) {
    if (*max_terms_flag <= 0) throw UsageError("--max-terms must be positive");
    p = p.with_max_terms(static_cast<std::size_t>(*max_terms_flag));
  }
  if (rel_tol) {
    if (!(*rel_tol > 0.0 && *rel_tol < 1.0)) throw UsageError("--tol must lie in (0,1)");
    p = p.with_rel_tol(*rel_tol);
  }
  return p;
}

struct OpArgs {
  std::string op;
  double alpha = 0.0;
  double a = 0.0;
  double x = 0.0;
  double q = 0.0;
  std::string fn;
  std::string method = "kernel";
  std::optional<double> tol;
  std::optional<long long> max_terms;
};

void add_op_flags(CLI::App* cmd, OpArgs& o) {
  cmd->add_option("--op", o.op, "Operator: I (integral), D (Riemann-Liouville), C (Caputo)")
      ->required()
      ->check(CLI::IsMember({"I", "D", "C"}));
  cmd->add_option("--alpha", o.alpha, "Order")->required();
  cmd->add_option("--a", o.a, "Lower limit")->required();
  cmd->add_option("--x", o.x, "Evaluation point")->required();
  cmd->add_option("--q", o.q, "Base q in (0,1)")->required();
  cmd->add_option("--fn", o.fn, "Function: one|x|x2|xn:<n>|pk:<lambda>|eq|Eq|poly:<c0,c1,...>|delta:<t0>")
      ->required();
  cmd->add_option("--method", o.method, "Integral method: kernel|series|stieltjes")
      ->check(CLI::IsMember({"kernel", "series", "stieltjes"}));
  cmd->add_option("--tol", o.tol, "Series relative tolerance");
  cmd->add_option("--max-terms", o.max_terms, "Series term cap");
}

struct Prepared {
  FracKind kind;
  FracMethod method;
  QContext ctx;
  SeriesPolicy policy;
  RealFn f;
};

Prepared prepare(const OpArgs& o, double upper_x) {
  FracKind kind = o.op == "I" ? FracKind::Integral
                  : o.op == "D" ? FracKind::RiemannLiouville
                                : FracKind::Caputo;
  const FracMethod method = parse_method(o.method);
  if (kind != FracKind::Integral && method != FracMethod::Kernel)
    throw UsageError("--method applies to --op I only");
  if (!(o.q > 0.0 && o.q < 1.0)) throw UsageError("--q must lie in (0,1)");
  if (!(o.a >= 0.0)) throw UsageError("--a must be nonnegative");
  if (!(o.x > 0.0)) throw UsageError("--x must be positive");
  if (o.a > o.x) throw UsageError("--a must not exceed --x");
  if (kind == FracKind::Integral && !(o.alpha >= 0.0))
    throw UsageError("--alpha must be nonnegative for --op I");
  if (!std::isfinite(o.alpha)) throw UsageError("--alpha must be finite");
  const FnSpec spec = FnSpec::parse(o.fn);
  if (spec.needs_unit_interval() && upper_x >= 1.0) throw UsageError("eq needs x < 1");
  const SeriesPolicy policy = make_policy(o.tol, o.max_terms);
  const QContext ctx(o.q, std::max({1.0, upper_x, o.a}));
  return {kind, method, ctx, policy, spec.make(o.a, ctx, policy)};
}

Evaluation apply(const Prepared& p, const OpArgs& o, double x) {
  switch (p.kind) {
    case FracKind::Integral:
      return frac_integral_eval(p.f, o.alpha, o.a, x, p.method, p.ctx, p.policy);
    case FracKind::RiemannLiouville: return rl_derivative_eval(p.f, o.alpha, o.a, x, p.ctx, p.policy);
    case FracKind::Caputo: return caputo_derivative_eval(p.f, o.alpha, o.a, x, p.ctx, p.policy);
  }
  throw UsageError("unknown operator");
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw UsageError("cannot write '" + path + "'");
}

int cmd_eval(const OpArgs& o, std::ostream& out) {
  const Prepared p = prepare(o, o.x);
  out << shortest(apply(p, o, o.x).value) << "\n";
  return 0;
}

int cmd_table(const OpArgs& o, long long points, const std::string& format,
              const std::string& path, std::ostream& out) {
  if (points < 1) throw UsageError("--points must be positive");
  const Prepared p = prepare(o, o.x);
  const std::string method = to_string(p.method);
  std::vector<std::pair<double, Evaluation>> rows;
  for (long long k = 1; k <= points; ++k) {
    const double x = k == points ? o.x : o.a + static_cast<double>(k) * (o.x - o.a) / points;
    rows.emplace_back(x, apply(p, o, x));
  }
  std::string text;
  if (format == "csv") {
    text = "x,value,method,alpha,a,q,terms_used\n";
    for (const auto& [x, e] : rows)
      text += g17(x) + "," + g17(e.value) + "," + method + "," + g17(o.alpha) + "," + g17(o.a) +
              "," + g17(o.q) + "," + std::to_string(e.terms) + "\n";
  } else {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [x, e] : rows) {
      nlohmann::ordered_json row;
      row["x"] = x;
      row["value"] = std::isfinite(e.value) ? nlohmann::ordered_json(e.value) : nullptr;
      row["method"] = method;
      row["alpha"] = o.alpha;
      row["a"] = o.a;
      row["q"] = o.q;
      row["terms_used"] = e.terms;
      arr.push_back(row);
    }
    text = arr.dump(2) + "\n";
  }
  write_output(text, path, out);
  return 0;
}

const std::vector<std::string> kCheckKeys = {"q",  "a",   "x", "c", "alpha", "beta", "lambda",
                                             "n",  "mu",  "eps", "k", "m",   "mc",   "N",
                                             "form", "z", "w", "fn"};

ParamValue param_value(const std::string& key, const std::string& text) {
  if (key == "fn") {
    FnSpec::parse(text);
    return text;
  }
  ParamValue v = parse_param(text);
  if (!std::holds_alternative<double>(v))
    throw UsageError("parameter '" + key + "' needs a number, got '" + text + "'");
  return v;
}

int check_exit(const CheckReport& r) {
  if (r.numeric_error) return 3;
  return r.behaves ? 0 : 1;
}

int cmd_check(const std::string& id, const std::map<std::string, std::string>& given,
              std::optional<double> tol, const std::string& format, std::optional<long long> max_terms,
              std::ostream& out, std::ostream& err) {
  const CatalogEntry& entry = catalog_entry(id);
  Params overrides;
  for (const auto& key : kCheckKeys) {
    auto it = given.find(key);
    if (it != given.end()) overrides.set(key, param_value(key, it->second));
  }
  const Params resolved = resolve_params(id, overrides);
  if (auto why = inadmissible(id, resolved)) throw UsageError(*why);
  const double t = tol.value_or(entry.default_tol);
  if (!(t > 0.0)) throw UsageError("--tol must be positive");
  const SeriesPolicy policy = make_policy(std::nullopt, max_terms);
  const CheckReport r = run_check({id, overrides, t}, policy);
  out << (format == "csv" ? reports_csv({r}) : report_json(r));
  if (r.numeric_error) err << "qfrac: " << r.notes << "\n";
  return check_exit(r);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

int cmd_sweep(const std::string& id, const std::vector<std::string>& grids,
              std::optional<double> tol, const std::string& format, std::optional<long long> max_terms,
              unsigned jobs, std::ostream& out) {
  const CatalogEntry& entry = catalog_entry(id);
  ParamGrid g;
  for (const auto& spec : grids) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("--grid expects key=v1,v2,..., got '" + spec + "'");
    const std::string key = spec.substr(0, eq);
    std::vector<ParamValue> values;
    for (const auto& v : split(spec.substr(eq + 1), ',')) {
      if (v.empty()) throw UsageError("empty value in --grid " + key);
      values.push_back(param_value(key, v));
    }
    if (values.empty()) throw UsageError("--grid " + key + " has no values");
    g.set(key, values);
  }
  const double t = tol.value_or(entry.default_tol);
  if (!(t > 0.0)) throw UsageError("--tol must be positive");
  if (jobs == 0) throw UsageError("--jobs must be positive");
  const SeriesPolicy policy = make_policy(std::nullopt, max_terms);
  const SweepResult s = run_sweep(id, g, t, policy, jobs);
  if (format == "csv")
    out << reports_csv(s.reports) << "\n" << summary_csv(s.summary);
  else
    out << sweep_json(s);
  return s.behaves ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional q-integrals and q-derivatives: evaluation and identity checks",
               "qfrac"};
  app.require_subcommand(1);

  OpArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate an operator at one point");
  add_op_flags(eval, eval_args);

  OpArgs table_args;
  long long points = 0;
  std::string table_format = "csv";
  std::string out_path;
  CLI::App* table = app.add_subcommand("table", "Tabulate an operator on x = a + k(x-a)/N");
  add_op_flags(table, table_args);
  table->add_option("--points", points, "Number of grid points N")->required();
  table->add_option("--format", table_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  table->add_option("--out", out_path, "Write to this file instead of standard output");

  std::string check_id;
  std::map<std::string, std::string> check_params;
  std::optional<double> check_tol;
  std::string check_format = "json";
  std::optional<long long> check_max_terms;
  CLI::App* check = app.add_subcommand("check", "Run one identity check");
  check->add_option("check_id", check_id, "Catalog entry")->required();
  for (const auto& key : kCheckKeys)
    check->add_option("--" + key, check_params[key], "Parameter " + key);
  check->add_option("--tol", check_tol, "Residual tolerance");
  check->add_option("--format", check_format, "json|csv")->check(CLI::IsMember({"csv", "json"}));
  check->add_option("--max-terms", check_max_terms, "Series term cap");

  std::string sweep_id;
  std::vector<std::string> grids;
  std::optional<double> sweep_tol;
  std::string sweep_format = "json";
  std::optional<long long> sweep_max_terms;
  unsigned jobs = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a check over a parameter grid");
  sweep->add_option("check_id", sweep_id, "Catalog entry")->required();
  sweep->add_option("--grid", grids, "key=v1,v2,... (repeatable); replaces that default axis")
      ->take_all()
      ->allow_extra_args(false);
  sweep->add_option("--tol", sweep_tol, "Residual tolerance");
  sweep->add_option("--format", sweep_format, "json|csv")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--max-terms", sweep_max_terms, "Series term cap");
  sweep->add_option("--jobs", jobs, "Worker threads");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  }

  try {
    if (*eval) return cmd_eval(eval_args, out);
    if (*table) return cmd_table(table_args, points, table_format, out_path, out);
    if (*check) {
      std::map<std::string, std::string> given;
      for (const auto& key : kCheckKeys)
        if (check->count("--" + key) > 0) given[key] = check_params[key];
      return cmd_check(check_id, given, check_tol, check_format, check_max_terms, out, err);
    }
    if (*sweep)
      return cmd_sweep(sweep_id, grids, sweep_tol, sweep_format, sweep_max_terms, jobs, out);
  } catch (const UsageError& e) {
    err << "qfrac: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "qfrac: DomainError: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "qfrac: " << e.kind() << ": " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace qfrac
