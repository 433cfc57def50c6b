#pragma once

// Two-sample pooled-variance t-test.

#include <cmath>
#include <limits>
#include <numeric>
#include <span>

#include <boost/math/distributions/students_t.hpp>

#include "blm/error.hpp"

namespace blm {

struct TTestResult {
  double t = 0.0;
  int df = 0;
  double se = 0.0;  // standard error of mean(a) - mean(b)
  double p = 1.0;   // two-sided
  bool degenerate = false;  // zero pooled variance with unequal means: t is +-inf
};

inline TTestResult t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw InvalidArgument("t-test needs at least 2 values per sample");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / na;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / nb;
  double ssa = 0.0, ssb = 0.0;
  for (double x : a) ssa += (x - ma) * (x - ma);
  for (double x : b) ssb += (x - mb) * (x - mb);

  TTestResult r;
  r.df = static_cast<int>(a.size() + b.size()) - 2;
  const double pooled = (ssa + ssb) / r.df;
  r.se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  const double diff = ma - mb;
  if (r.se == 0.0) {
    if (diff == 0.0) return r;
    r.degenerate = true;
    r.t = std::copysign(std::numeric_limits<double>::infinity(), diff);
    r.p = 0.0;
    return r;
  }
  r.t = diff / r.se;
  const boost::math::students_t dist(r.df);
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  return r;
}

}  // namespace blm
