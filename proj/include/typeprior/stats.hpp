#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace typeprior {

enum class TestSide {
  two,   // H1: mean difference != 0
  right  // H1: mean difference > 0
};

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  bool significant = false;
};

inline constexpr double kSignificanceLevel = 0.05;

// Paired t-test on x - y with n - 1 degrees of freedom. Zero-variance
// differences are decided by the sign of the mean: a nonzero mean is
// significant with p = 0 (in its direction), a zero mean never is.
inline TTestResult paired_ttest(std::span<const double> x, std::span<const double> y, TestSide side,
                                double alpha = kSignificanceLevel) {
  if (x.size() != y.size()) throw std::invalid_argument("paired t-test needs equal-length samples");
  if (x.size() < 2) throw std::invalid_argument("paired t-test needs at least two pairs");
  const std::size_t n = x.size();
  double mean = 0;
  for (std::size_t i = 0; i < n; ++i) mean += x[i] - y[i];
  mean /= static_cast<double>(n);
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i] - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  TTestResult r;
  // Differences equal up to rounding count as zero variance.
  const double scale = std::max(1.0, std::abs(mean));
  if (sd <= 1e-12 * scale) {
    if (std::abs(mean) <= 1e-12) {
      r.t = 0.0;
      r.p = side == TestSide::two ? 1.0 : 0.5;
      r.significant = false;
      return r;
    }
    r.t = mean > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    r.p = (side == TestSide::two || mean > 0) ? 0.0 : 1.0;
    r.significant = r.p < alpha;
    return r;
  }
  r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  if (side == TestSide::two) {
    r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  } else {
    r.p = boost::math::cdf(boost::math::complement(dist, r.t));
  }
  r.p = std::min(1.0, r.p);
  r.significant = r.p < alpha;
  return r;
}

inline TTestResult paired_ttest(const std::vector<double>& x, const std::vector<double>& y, TestSide side) {
  return paired_ttest(std::span<const double>(x), std::span<const double>(y), side);
}

// values[play][slice] for one prior and one criterion.
using SliceValues = std::vector<std::vector<double>>;

// Percentage of slice indices at which `x` is significantly different from
// (two-sided) or higher than (right-sided) `base`, pairing over plays.
inline double significant_slice_percentage(const SliceValues& x, const SliceValues& base, TestSide side) {
  if (x.size() != base.size() || x.empty()) throw std::invalid_argument("series must pair the same plays");
  const std::size_t slices = x.front().size();
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k].size() != slices || base[k].size() != slices) throw std::invalid_argument("unequal slice counts");
  if (slices == 0) return 0.0;
  std::size_t hits = 0;
  std::vector<double> a(x.size()), b(x.size());
  for (std::size_t s = 0; s < slices; ++s) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      a[k] = x[k][s];
      b[k] = base[k][s];
    }
    if (paired_ttest(a, b, side).significant) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(slices);
}

}  // namespace typeprior
