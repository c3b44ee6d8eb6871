#pragma once

// Goodness-of-fit helpers comparing a sample histogram with a PMF table.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace dstable {

/// Counts for values 0..last plus one pooled bin for everything above.
struct Histogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t beyond = 0;
  std::uint64_t total = 0;
};

template <typename Int>
Histogram make_histogram(std::span<const Int> xs, std::size_t last) {
  Histogram h;
  h.counts.assign(last + 1, 0);
  for (Int x : xs) {
    if (static_cast<std::uint64_t>(x) <= last) {
      ++h.counts[static_cast<std::size_t>(x)];
    } else {
      ++h.beyond;
    }
  }
  h.total = xs.size();
  return h;
}

/// Half the L1 distance between the empirical law and probs[0..last] plus the
/// pooled tail 1 - sum(probs).
inline double tv_distance(const Histogram& h, std::span<const double> probs) {
  const double n = static_cast<double>(h.total);
  double dist = 0.0, head = 0.0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double p = i < probs.size() ? probs[i] : 0.0;
    head += p;
    dist += std::abs(static_cast<double>(h.counts[i]) / n - p);
  }
  dist += std::abs(static_cast<double>(h.beyond) / n - std::max(0.0, 1.0 - head));
  return std::min(1.0, 0.5 * dist);
}

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;
};

/// Pearson chi-square with adjacent cells merged until each expected count is
/// at least min_expected. The final cell pools everything above the table.
inline ChiSquareResult chi_square_gof(const Histogram& h, std::span<const double> probs,
                                      double min_expected = 5.0) {
  const double n = static_cast<double>(h.total);
  std::vector<double> exp_cells, obs_cells;
  double e = 0.0, o = 0.0, head = 0.0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double p = i < probs.size() ? probs[i] : 0.0;
    head += p;
    e += n * p;
    o += static_cast<double>(h.counts[i]);
    if (e >= min_expected) {
      exp_cells.push_back(e);
      obs_cells.push_back(o);
      e = o = 0.0;
    }
  }
  e += n * std::max(0.0, 1.0 - head);
  o += static_cast<double>(h.beyond);
  if (e >= min_expected || exp_cells.empty()) {
    exp_cells.push_back(e);
    obs_cells.push_back(o);
  } else {
    exp_cells.back() += e;
    obs_cells.back() += o;
  }

  ChiSquareResult r;
  r.bins = exp_cells.size();
  for (std::size_t i = 0; i < exp_cells.size(); ++i) {
    if (exp_cells[i] > 0.0) {
      const double d = obs_cells[i] - exp_cells[i];
      r.statistic += d * d / exp_cells[i];
    } else if (obs_cells[i] > 0.0) {
      r.statistic = std::numeric_limits<double>::infinity();
    }
  }
  r.dof = static_cast<int>(r.bins) - 1;
  if (r.dof < 1) {
    r.p_value = 1.0;
  } else if (!std::isfinite(r.statistic)) {
    r.p_value = 0.0;
  } else {
    r.p_value = boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic);
  }
  return r;
}

}  // namespace dstable
