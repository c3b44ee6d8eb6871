#pragma once

// Probability masses: closed-form bSib masses, DS masses by the compound
// Poisson recursion, an independent coefficient-extraction route, and the
// table utilities built on them (cdf, quantile, moments, modes).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dstable/genfun.hpp"
#include "dstable/params.hpp"

namespace dstable {

namespace detail {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double clamp_dust(double x) { return (x < 0.0 && x > -1e-15) ? 0.0 : x; }

}  // namespace detail

/// P(X = n) for X ~ bSib(alpha, rho), n >= 1. O(n) via the ratio recurrence.
inline double bsib_pmf(const BSibParams& b, std::size_t n) {
  if (n == 0) throw Error(Errc::DomainError, "bSib support starts at 1");
  const double a = b.alpha(), r = b.rho();
  if (a == 1.0) {
    if (n == 1) return 1.0 - r;
    const double nn = static_cast<double>(n);
    return r / (nn * (nn - 1.0));
  }
  if (n == 1) return detail::clamp_dust(r + (1.0 - r) * a);
  // c_n = alpha * prod_{j<n} (j - alpha) / n!, c_2 = alpha(1-alpha)/2.
  double c = a * (1.0 - a) / 2.0;
  for (std::size_t k = 2; k < n; ++k) {
    c *= (static_cast<double>(k) - a) / static_cast<double>(k + 1);
  }
  return detail::clamp_dust((1.0 - r) * c);
}

/// Masses p_0..p_{n_max} of bSib (p_0 = 0) in one O(n_max) pass.
inline std::vector<double> bsib_pmf_table(const BSibParams& b, std::size_t n_max) {
  std::vector<double> p(n_max + 1, 0.0);
  if (n_max == 0) return p;
  const double a = b.alpha(), r = b.rho();
  p[1] = bsib_pmf(b, 1);
  if (a == 1.0) {
    for (std::size_t n = 2; n <= n_max; ++n) {
      const double nn = static_cast<double>(n);
      p[n] = r / (nn * (nn - 1.0));
    }
    return p;
  }
  double c = a * (1.0 - a) / 2.0;
  for (std::size_t n = 2; n <= n_max; ++n) {
    if (n > 2) c *= (static_cast<double>(n - 1) - a) / static_cast<double>(n);
    p[n] = detail::clamp_dust((1.0 - r) * c);
  }
  return p;
}

/// Truncated PMF with honest tail mass 1 - sum(masses).
class PmfTable {
 public:
  PmfTable(std::vector<double> masses, std::string tag, double tail_bound = 0.0)
      : masses_(std::move(masses)), tag_(std::move(tag)) {
    if (masses_.empty()) throw Error(Errc::InternalConsistency, "empty PMF table");
    cumulative_.reserve(masses_.size());
    detail::CompensatedSum s;
    for (double& m : masses_) {
      m = detail::clamp_dust(m);
      if (m < 0.0 || !std::isfinite(m)) {
        throw Error(Errc::InternalConsistency, "negative or non-finite mass in " + tag_);
      }
      s.add(m);
      cumulative_.push_back(std::min(s.value(), 1.0));
    }
    tail_mass_ = std::max(0.0, 1.0 - cumulative_.back());
    tail_bound_reached_ = tail_mass_ <= tail_bound;
  }

  std::span<const double> masses() const { return masses_; }
  std::span<const double> cumulative() const { return cumulative_; }
  double mass(std::size_t n) const { return n < masses_.size() ? masses_[n] : 0.0; }
  std::size_t last_index() const { return masses_.size() - 1; }
  double tail_mass() const { return tail_mass_; }
  const std::string& tag() const { return tag_; }
  /// False when n_max stopped the table before the requested tail bound.
  bool tail_bound_reached() const { return tail_bound_reached_; }

 private:
  std::vector<double> masses_;
  std::vector<double> cumulative_;
  std::string tag_;
  double tail_mass_ = 0.0;
  bool tail_bound_reached_ = false;
};

inline constexpr std::size_t kDefaultNMax = 1'000'000;
inline constexpr double kDefaultTailBound = 1e-12;

/// DS masses by the compound Poisson recursion
///   f(0) = e^{-lambda},  n f(n) = sum_{k=1}^{n} lambda k p_k f(n-k).
/// Stops at cumulative >= 1 - tail_bound or at n_max. All terms are
/// nonnegative. Values are carried as g(n) = f(n) 2^scale so that
/// e^{-lambda} does not underflow for large lambda.
inline PmfTable ds_pmf(const DSParams& p, std::size_t n_max = kDefaultNMax,
                       double tail_bound = kDefaultTailBound) {
  if (p.degenerate()) return PmfTable({1.0}, p.describe(), tail_bound);
  const CompoundRep c = ds_to_compound(p);
  const double lambda = c.lambda;
  const BSibParams& b = c.summand;

  // Summands with finite support: point mass at one, and {1,2} at alpha=2.
  std::size_t support = std::numeric_limits<std::size_t>::max();
  if (b.alpha() == 1.0 && b.rho() == 0.0) support = 1;
  if (b.alpha() == 2.0) support = 2;

  std::vector<double> w;  // w[k] = lambda * k * p_k
  auto grow_weights = [&](std::size_t need) {
    std::size_t size = std::max<std::size_t>(64, w.size());
    while (size <= need) size *= 2;
    if (support != std::numeric_limits<std::size_t>::max()) size = std::min(size, support + 1);
    const auto pk = bsib_pmf_table(b, size - 1);
    w.assign(pk.size(), 0.0);
    for (std::size_t k = 1; k < pk.size(); ++k) w[k] = lambda * static_cast<double>(k) * pk[k];
  };
  grow_weights(1);

  int scale = 0;
  double g0;
  if (lambda < 700.0) {
    g0 = std::exp(-lambda);
  } else {
    scale = static_cast<int>(std::floor(lambda / std::numbers::ln2));
    g0 = std::exp(-lambda + scale * std::numbers::ln2);
  }
  constexpr int kRescaleBits = 600;
  const double rescale_limit = std::ldexp(1.0, kRescaleBits);

  std::vector<double> g{g0};
  detail::CompensatedSum cum;
  cum.add(std::ldexp(g0, -scale));

  for (std::size_t n = 1; n <= n_max && cum.value() < 1.0 - tail_bound; ++n) {
    const std::size_t kmax = std::min(n, support);
    if (kmax >= w.size()) grow_weights(kmax);
    double acc = 0.0;
    const double* gn = g.data() + n;
    for (std::size_t k = 1; k <= kmax; ++k) acc += w[k] * gn[-static_cast<std::ptrdiff_t>(k)];
    double gv = acc / static_cast<double>(n);
    if (gv > rescale_limit) {
      for (double& x : g) x = std::ldexp(x, -kRescaleBits);
      gv = std::ldexp(gv, -kRescaleBits);
      scale -= kRescaleBits;
    }
    g.push_back(gv);
    cum.add(std::ldexp(gv, -scale));
  }

  for (double& x : g) x = std::ldexp(x, -scale);
  return PmfTable(std::move(g), p.describe(), tail_bound);
}

namespace detail {

inline void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<std::complex<double>> tw(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    tw[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                static_cast<double>(n));
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * tw[k * step];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

}  // namespace detail

/// Coefficient extraction from the PGF by the trapezoid rule on a circle of
/// radius r < 1: f(n) = r^{-n} (1/M) sum_j G(r w^j) w^{-jn}, w = e^{2 pi i/M}.
/// r = eps^{1/(M+n_max)} balances aliasing r^M against roundoff eps r^{-n}.
inline PmfTable ds_pmf_inversion(const DSParams& p, std::size_t n_max, std::size_t quad_points) {
  if (quad_points <= 2 * n_max) {
    throw Error(Errc::DomainError, "quad_points must exceed 2*n_max");
  }
  const std::size_t m = quad_points;
  const double md = static_cast<double>(m);
  const double log_r = std::log(std::numeric_limits<double>::epsilon()) /
                       static_cast<double>(m + n_max);
  const double r = std::exp(log_r);

  std::vector<std::complex<double>> vals(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / md;
    vals[j] = pgf(p, std::polar(r, theta));
  }

  std::vector<std::complex<double>> coef(n_max + 1);
  if ((m & (m - 1)) == 0) {
    detail::fft_inplace(vals);
    for (std::size_t n = 0; n <= n_max; ++n) coef[n] = vals[n] / md;
  } else {
    std::vector<std::complex<double>> roots(m);
    for (std::size_t k = 0; k < m; ++k) {
      roots[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / md);
    }
    for (std::size_t n = 0; n <= n_max; ++n) {
      std::complex<double> acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += vals[j] * roots[(j * n) % m];
      coef[n] = acc / md;
    }
  }

  std::vector<double> masses(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double gain = std::exp(-static_cast<double>(n) * log_r);
    const double re = coef[n].real() * gain;
    const double im = coef[n].imag() * gain;
    if (std::abs(im) > 1e-8 || re < -1e-8) {
      throw Error(Errc::QuadratureInsufficiency,
                  "coefficient " + std::to_string(n) + " has residue " + detail::num(im) +
                      "; increase quad_points");
    }
    masses[n] = std::max(re, 0.0);
  }
  return PmfTable(std::move(masses), p.describe() + " [inversion]");
}

/// P(X <= n). n < 0 gives 0; n beyond the table is an error.
inline double cdf(const PmfTable& t, long long n) {
  if (n < 0) return 0.0;
  if (static_cast<std::size_t>(n) > t.last_index()) {
    throw Error(Errc::IndexBeyondTable,
                "index " + std::to_string(n) + " beyond table end " +
                    std::to_string(t.last_index()));
  }
  return t.cumulative()[static_cast<std::size_t>(n)];
}

/// Smallest n with cdf(n) >= q.
inline std::size_t quantile(const PmfTable& t, double q) {
  if (!(q >= 0.0 && q < 1.0)) {
    throw Error(Errc::DomainError, "quantile level must lie in [0, 1), got " + detail::num(q));
  }
  if (q >= 1.0 - t.tail_mass()) {
    throw Error(Errc::QuantileBeyondTable,
                "level " + detail::num(q) + " exceeds tabulated mass " +
                    detail::num(1.0 - t.tail_mass()));
  }
  const auto c = t.cumulative();
  const auto it = std::lower_bound(c.begin(), c.end(), q);
  return static_cast<std::size_t>(it - c.begin());
}

struct MomentReport {
  double mean = 0.0;      // +infinity when not finite
  double variance = 0.0;  // +infinity when not finite
  bool mean_finite() const { return std::isfinite(mean); }
  bool variance_finite() const { return std::isfinite(variance); }
};

inline MomentReport moments(const DSParams& p) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  MomentReport m;
  const bool poisson_like = p.gamma() == 0.0;
  m.mean = (p.alpha() > 1.0 || poisson_like) ? p.delta() : inf;
  if (p.alpha() == 2.0) {
    m.variance = p.delta() + 2.0 * p.gamma();
  } else if (poisson_like) {
    m.variance = p.delta();
  } else {
    m.variance = inf;
  }
  return m;
}

/// Jump rates omega_n = lambda p_n; element n holds omega_n, element 0 is 0.
inline std::vector<double> levy_weights(const CompoundRep& c, std::size_t n_max) {
  auto w = bsib_pmf_table(c.summand, n_max);
  for (double& x : w) x *= c.lambda;
  return w;
}

struct ModeReport {
  std::vector<std::pair<std::size_t, std::size_t>> modes;  // closed index intervals
  bool unimodal = false;
  std::size_t scanned_to = 0;
  double tail_mass_at_scan = 0.0;
};

/// Local maxima of the table, with neighbours within plateau_tol (relative)
/// merged into one plateau. Exact zeros never join a plateau. A plateau at
/// the right edge counts only if the tail mass (an upper bound on the next
/// mass) lies below it.
inline ModeReport mode_scan(const PmfTable& t, double plateau_tol = 1e-12) {
  const auto f = t.masses();
  const std::size_t n = f.size();
  ModeReport rep;
  rep.scanned_to = n - 1;
  rep.tail_mass_at_scan = t.tail_mass();

  auto close = [&](double a, double b) {
    return a > 0.0 && b > 0.0 && std::abs(a - b) <= plateau_tol * std::max(a, b);
  };
  std::size_t lo = 0;
  while (lo < n) {
    std::size_t hi = lo;
    double top = f[lo];
    while (hi + 1 < n && close(f[hi], f[hi + 1])) {
      ++hi;
      top = std::max(top, f[hi]);
    }
    if (top > 0.0) {
      const bool left = lo == 0 || f[lo - 1] < top;
      const bool right = hi + 1 < n ? f[hi + 1] < top : t.tail_mass() < top;
      if (left && right) rep.modes.emplace_back(lo, hi);
    }
    lo = hi + 1;
  }
  rep.unimodal = rep.modes.size() == 1;
  return rep;
}

}  // namespace dstable
