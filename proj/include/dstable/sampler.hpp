#pragma once

// Random variates for Poisson, bSib and DS laws. DS draws use the compound
// representation: N ~ Poisson(lambda), then a sum of N bSib summands.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "dstable/genfun.hpp"
#include "dstable/params.hpp"
#include "dstable/pmf.hpp"
#include "dstable/rng.hpp"
#include "dstable/stats.hpp"

namespace dstable {

using Count = std::uint64_t;

/// Ceiling for variates; heavy tails (alpha < 1) reach it with small but
/// positive probability and saturate there.
inline constexpr Count kMaxVariate = Count{1} << 62;

namespace detail {

inline Count saturating_add(Count a, Count b) {
  return a > kMaxVariate - std::min(b, kMaxVariate) ? kMaxVariate : a + b;
}

inline Count poisson_multiplication(double rate, RngStream& rng) {
  const double limit = std::exp(-rate);
  Count k = 0;
  double prod = rng.uniform();
  while (prod > limit) {
    ++k;
    prod *= rng.uniform();
  }
  return k;
}

// Hormann's PTRS transformed rejection; O(1) expected draws for rate >= 10.
inline Count poisson_ptrs(double rate, RngStream& rng) {
  const double slam = std::sqrt(rate);
  const double loglam = std::log(rate);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + rate + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<Count>(std::min(k, double(kMaxVariate)));
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -rate + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<Count>(std::min(k, double(kMaxVariate)));
    }
  }
}

// log Gamma(n - alpha) - log Gamma(n) for large n, as a difference of
// Stirling series so the two huge lgamma values never cancel.
inline double log_gamma_ratio(double n, double alpha) {
  const double x = n - alpha;
  auto tail = [](double t) {
    const double t2 = t * t;
    return 1.0 / (12.0 * t) - 1.0 / (360.0 * t * t2) + 1.0 / (1260.0 * t * t2 * t2);
  };
  return (n - 0.5) * std::log1p(-alpha / n) - alpha * std::log(x) + alpha + tail(x) - tail(n);
}

}  // namespace detail

inline Count sample_poisson(double rate, RngStream& rng) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw Error(Errc::DomainError, "Poisson rate must be finite and >= 0, got " + detail::num(rate));
  }
  if (rate == 0.0) return 0;
  return rate < 10.0 ? detail::poisson_multiplication(rate, rng) : detail::poisson_ptrs(rate, rng);
}

/// Inverse-survival sampler for bSib(alpha, rho). The survival function
/// S(n) = P(X >= n) is tabulated lazily (doubling up to kTableCap entries)
/// from S(n) = (1-rho) prod_{j<n}(j-alpha)/(n-1)! for n >= 2, or rho/(n-1)
/// at alpha = 1; past the table the Gamma-function closed form is inverted.
class BSibSampler {
 public:
  static constexpr std::size_t kTableCap = std::size_t{1} << 16;

  explicit BSibSampler(const BSibParams& b) : b_(b) { grow(64); }

  const BSibParams& params() const { return b_; }

  Count operator()(RngStream& rng) {
    const double v = rng.uniform_pos();
    if (surv_[2] < v) return 1;
    while (!(surv_.back() < v) && surv_.size() < kTableCap + 1) grow(2 * (surv_.size() - 1));
    if (surv_.back() < v) {
      const auto it = std::partition_point(surv_.begin() + 2, surv_.end(),
                                           [v](double s) { return s >= v; });
      return static_cast<Count>(it - surv_.begin()) - 1;
    }
    return far_inverse(v);
  }

  /// P(X >= n).
  double survival(Count n) {
    if (n <= 1) return 1.0;
    if (n < surv_.size()) return surv_[n];
    if (n <= kTableCap) {
      grow(std::max<std::size_t>(2 * (surv_.size() - 1), static_cast<std::size_t>(n)));
      return surv_[n];
    }
    return far_survival(n);
  }

 private:
  void grow(std::size_t last) {
    last = std::min(last, kTableCap);
    const double a = b_.alpha(), r = b_.rho();
    std::size_t n = surv_.size();
    if (n == 0) {
      surv_ = {1.0, 1.0};
      n = 2;
      t_ = 1.0 - a;
    }
    for (; n <= last; ++n) {
      if (n > 2) t_ *= (static_cast<double>(n - 1) - a) / static_cast<double>(n - 1);
      const double s = a == 1.0 ? r / static_cast<double>(n - 1) : (1.0 - r) * t_;
      surv_.push_back(std::max(0.0, s));
    }
  }

  double far_survival(Count n) const {
    const double nd = static_cast<double>(n);
    if (b_.alpha() == 1.0) return b_.rho() / (nd - 1.0);
    return std::abs(1.0 - b_.rho()) *
           std::exp(detail::log_gamma_ratio(nd, b_.alpha()) - std::lgamma(1.0 - b_.alpha()));
  }

  Count far_inverse(double v) const {
    Count lo = surv_.size() - 1;  // S(lo) >= v
    Count hi = lo;
    do {
      lo = hi;
      if (hi >= kMaxVariate / 2) {
        hi = kMaxVariate;
        if (far_survival(hi) >= v) return kMaxVariate;
        break;
      }
      hi *= 2;
    } while (far_survival(hi) >= v);
    while (hi - lo > 1) {
      const Count mid = lo + (hi - lo) / 2;
      (far_survival(mid) >= v ? lo : hi) = mid;
    }
    return lo;
  }

  BSibParams b_;
  std::vector<double> surv_;
  double t_ = 0.0;
};

/// DS variates through the compound representation. Owns the summand table,
/// so reuse one instance for repeated draws.
class DSSampler {
 public:
  explicit DSSampler(const DSParams& p) : params_(p) {
    if (!p.degenerate()) {
      const CompoundRep c = ds_to_compound(p);
      lambda_ = c.lambda;
      unit_jumps_ = c.summand.alpha() == 1.0 && c.summand.rho() == 0.0;
      summand_.emplace(c.summand);
    }
  }

  const DSParams& params() const { return params_; }

  Count operator()(RngStream& rng) {
    if (!summand_) return 0;
    const Count jumps = sample_poisson(lambda_, rng);
    if (unit_jumps_) return jumps;
    Count total = 0;
    for (Count i = 0; i < jumps; ++i) total = detail::saturating_add(total, (*summand_)(rng));
    return total;
  }

 private:
  DSParams params_;
  double lambda_ = 0.0;
  bool unit_jumps_ = false;
  std::optional<BSibSampler> summand_;
};

/// One bSib draw. Builds the survival table each call; prefer BSibSampler
/// for repeated draws.
inline Count sample_bsib(const BSibParams& b, RngStream& rng) { return BSibSampler(b)(rng); }

/// One DS draw; prefer DSSampler for repeated draws.
inline Count sample_ds(const DSParams& p, RngStream& rng) { return DSSampler(p)(rng); }

/// Binomial thinning a∘x.
inline Count thin(Count x, double a, RngStream& rng) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw Error(Errc::DomainError, "thinning fraction must lie in [0, 1], got " + detail::num(a));
  }
  if (a == 0.0 || x == 0) return 0;
  if (a == 1.0) return x;
  std::binomial_distribution<Count> bin(x, a);
  return bin(rng);
}

/// Poisson translation x ⊕ m for m >= 0.
inline Count translate(Count x, double m, RngStream& rng) {
  if (!(m >= 0.0)) {
    throw Error(Errc::DomainError,
                "sampling cannot realise a negative translation, got " + detail::num(m));
  }
  return detail::saturating_add(x, sample_poisson(m, rng));
}

struct ExperimentResult {
  std::size_t n_samples = 0;
  double mu = 0.0;
  double tv_distance = 0.0;
  double chi_square_stat = 0.0;
  double chi_square_p_value = 1.0;
  std::size_t bins_used = 0;
};

inline constexpr std::size_t kExperimentTableMax = 4096;
inline constexpr double kExperimentCoverage = 1e-6;

/// Draws rho∘X1 + s∘X2 with s = (1-rho^alpha)^{1/alpha} and compares it with
/// DS ⊕ mu. Bins are 0..N with N the first index covering 1 - 1e-6 of the
/// target, cut back to the last bin with expected count >= 5, plus a pooled
/// tail bin.
inline ExperimentResult stability_experiment(const DSParams& p, double rho, std::size_t n_samples,
                                             RngStream& rng,
                                             std::optional<double> mu_override = {}) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(Errc::DomainError, "rho must lie in (0, 1), got " + detail::num(rho));
  }
  if (n_samples < 1000) throw Error(Errc::DomainError, "stability experiment needs >= 1000 samples");

  ExperimentResult res;
  res.n_samples = n_samples;
  res.mu = mu_override.value_or(stability_mu(p, rho));
  const DSParams target = translate_params(p, res.mu);
  const PmfTable table = ds_pmf(target, kExperimentTableMax, kExperimentCoverage);

  const auto f = table.masses();
  const double n = static_cast<double>(n_samples);
  std::size_t last = f.size() - 1;
  std::size_t last_dense = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (n * f[i] >= 5.0) last_dense = i;
  }
  last = std::min(last, last_dense);

  const double s = stability_partner(p.alpha(), rho);
  DSSampler draw(p);
  std::vector<Count> ys(n_samples);
  for (auto& y : ys) {
    const Count x1 = draw(rng);
    const Count x2 = draw(rng);
    y = detail::saturating_add(thin(x1, rho, rng), thin(x2, s, rng));
  }

  const Histogram h = make_histogram<Count>(ys, last);
  const std::span<const double> head = f.first(last + 1);
  res.tv_distance = tv_distance(h, head);
  const ChiSquareResult chi = chi_square_gof(h, head);
  res.chi_square_stat = chi.statistic;
  res.chi_square_p_value = chi.p_value;
  res.bins_used = last + 2;
  return res;
}

}  // namespace dstable
