#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qfrac/qcore.hpp"

namespace qfrac {

using ParamValue = std::variant<double, std::string>;

std::string format_param(const ParamValue& v);
// Numbers become doubles; anything else stays a string.
ParamValue parse_param(const std::string& text);

// Named parameters in insertion order.
class Params {
 public:
  Params() = default;
  Params(std::initializer_list<std::pair<std::string, ParamValue>> items);

  bool has(const std::string& key) const;
  void set(const std::string& key, ParamValue v);
  void erase(const std::string& key);
  double num(const std::string& key) const;
  std::string str(const std::string& key) const;
  int integer(const std::string& key) const;
  const std::vector<std::pair<std::string, ParamValue>>& items() const noexcept { return items_; }

 private:
  std::vector<std::pair<std::string, ParamValue>> items_;
};

// Per-key value lists, enumerated as a cross product with the first key
// varying slowest.
class ParamGrid {
 public:
  void set(const std::string& key, std::vector<ParamValue> values);
  const std::vector<std::pair<std::string, std::vector<ParamValue>>>& axes() const noexcept {
    return axes_;
  }
  std::size_t size() const;
  Params point(std::size_t index) const;

 private:
  std::vector<std::pair<std::string, std::vector<ParamValue>>> axes_;
};

struct CheckSpec {
  std::string check_id;
  Params params;
  double tol = 1e-8;
};

struct CheckReport {
  std::string check_id;
  Params params;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  bool passed = false;
  std::size_t terms_used = 0;
  std::string notes;
  // Not serialized.
  bool numeric_error = false;
  bool expected_failure = false;
  bool behaves = false;
};

struct CatalogEntry {
  std::string id;
  std::string statement;
  ParamGrid default_grid;
  double default_tol = 1e-8;
  bool expected_failure = false;
  std::size_t max_terms = 0;  // 0: use the caller's policy
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& id);
std::vector<std::string> expected_failures();

// Parameters the check understands (grid keys, plus a for m and c for mc).
std::vector<std::string> accepted_keys(const std::string& id);

// Defaults (first value of each default-grid axis) overridden by `overrides`.
// An explicit a replaces m and an explicit c replaces mc.
Params resolve_params(const std::string& id, const Params& overrides);

// Reason the point violates the check's preconditions, if it does.
std::optional<std::string> inadmissible(const std::string& id, const Params& resolved);

CheckReport run_check(const CheckSpec& spec, const SeriesPolicy& policy = {});

struct SweepSummary {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  double max_rel_residual = 0.0;
};

struct SweepResult {
  std::vector<CheckReport> reports;
  SweepSummary summary;
  bool behaves = false;
};

// The default grid with the given axes replaced. Inadmissible points are skipped.
SweepResult run_sweep(const std::string& check_id, const ParamGrid& overrides, double tol,
                      const SeriesPolicy& policy = {}, unsigned jobs = 1);

std::string report_json(const CheckReport& r);
std::string reports_json(const std::vector<CheckReport>& rs);
std::string sweep_json(const SweepResult& s);
std::string reports_csv(const std::vector<CheckReport>& rs);
std::string summary_csv(const SweepSummary& s);

}  // namespace qfrac
