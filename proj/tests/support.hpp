#pragma once

#include <algorithm>
#include <cmath>

#include "doctest.h"

namespace testutil {

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max({std::fabs(got), std::fabs(want), 1e-300});
}

}  // namespace testutil

#define CHECK_REL(got, want, tol)                                                   \
  do {                                                                              \
    const double got_ = (got), want_ = (want);                                      \
    INFO("got " << got_ << " want " << want_ << " rel " << testutil::rel_err(got_, want_)); \
    CHECK(testutil::rel_err(got_, want_) <= (tol));                                 \
  } while (0)

#define CHECK_ABS(got, want, tol)                        \
  do {                                                   \
    const double got_ = (got), want_ = (want);           \
    INFO("got " << got_ << " want " << want_);           \
    CHECK(std::fabs(got_ - want_) <= (tol));             \
  } while (0)
