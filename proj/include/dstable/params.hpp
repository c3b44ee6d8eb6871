#pragma once

// Parameter domains of the discrete stable family DS(alpha, gamma, delta),
// its broad-Sibuya summand law, the compound Poisson form and the extreme
// stable mixing law, plus conversions and classification.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "dstable/error.hpp"

namespace dstable {

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// cos(pi*alpha/2) evaluated as -sin(pi*(alpha-1)/2). alpha-1 is exact near
// alpha=1 so the sign of the result is right even there, and alpha=2 gives -1.
inline double cos_half_pi(double alpha) {
  return -std::sin(std::numbers::pi * (alpha - 1.0) / 2.0);
}

inline double sec_half_pi(double alpha) { return 1.0 / cos_half_pi(alpha); }

}  // namespace detail

class DSParams;
class BSibParams;
DSParams validate_ds(double alpha, double gamma, double delta);
BSibParams validate_bsib(double alpha, double rho);

/// DS(alpha, gamma, delta). Only constructible through validate_ds, so every
/// instance satisfies the dilation constraint and delta >= alpha*gamma.
class DSParams {
 public:
  double alpha() const noexcept { return alpha_; }
  double gamma() const noexcept { return gamma_; }
  double delta() const noexcept { return delta_; }

  bool unit_alpha() const noexcept { return alpha_ == 1.0; }

  /// Non-fatal: 0 < |alpha-1| < 1e-8 puts sec(pi*alpha/2) close to its pole.
  bool near_alpha_one() const noexcept {
    const double d = std::abs(alpha_ - 1.0);
    return d > 0.0 && d < 1e-8;
  }

  /// Point mass at zero, DS(1, 0, 0).
  bool degenerate() const noexcept { return gamma_ == 0.0 && delta_ == 0.0; }

  std::string describe() const {
    return "DS(" + detail::num(alpha_) + ", " + detail::num(gamma_) + ", " +
           detail::num(delta_) + ")";
  }

  friend bool operator==(const DSParams&, const DSParams&) = default;

 private:
  DSParams(double a, double g, double d) : alpha_(a), gamma_(g), delta_(d) {}
  friend DSParams validate_ds(double, double, double);

  double alpha_;
  double gamma_;
  double delta_;
};

/// Broad Sibuya bSib(alpha, rho), a count law on {1, 2, ...}.
class BSibParams {
 public:
  double alpha() const noexcept { return alpha_; }
  double rho() const noexcept { return rho_; }

  std::string describe() const {
    return "bSib(" + detail::num(alpha_) + ", " + detail::num(rho_) + ")";
  }

  friend bool operator==(const BSibParams&, const BSibParams&) = default;

 private:
  BSibParams(double a, double r) : alpha_(a), rho_(r) {}
  friend BSibParams validate_bsib(double, double);

  double alpha_;
  double rho_;
};

/// Poisson(lambda)-stopped sum of bSib summands.
struct CompoundRep {
  double lambda;
  BSibParams summand;
};

/// Extreme stable ES(alpha, sigma, delta), i.e. skewness fixed at one.
struct ESParams {
  double alpha;
  double sigma;
  double delta;
};

struct Classification {
  bool strict = false;
  bool self_decomposable = false;
  bool is_poisson = false;
  bool is_degenerate = false;
  bool mean_finite = false;
  bool variance_finite = false;
};

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw Error(Errc::AlphaOutOfRange,
                "alpha must lie in (0, 2], got " + detail::num(alpha));
  }
}

inline DSParams validate_ds(double alpha, double gamma, double delta) {
  check_alpha(alpha);
  if (!std::isfinite(gamma) || !std::isfinite(delta)) {
    throw Error(Errc::DomainError, "gamma and delta must be finite");
  }
  if (gamma == 0.0 && alpha != 1.0) {
    throw Error(Errc::PoissonConventionViolation,
                "gamma = 0 (Poisson or point mass) requires alpha = 1, got alpha = " +
                    detail::num(alpha));
  }
  if (alpha < 1.0 && !(gamma < 0.0)) {
    throw Error(Errc::GammaSignViolation,
                "gamma < 0 required for alpha in (0,1), got " + detail::num(gamma));
  }
  if (alpha == 1.0 && !(gamma >= 0.0)) {
    throw Error(Errc::GammaSignViolation,
                "gamma >= 0 required for alpha = 1, got " + detail::num(gamma));
  }
  if (alpha > 1.0 && !(gamma > 0.0)) {
    throw Error(Errc::GammaSignViolation,
                "gamma > 0 required for alpha in (1,2], got " + detail::num(gamma));
  }
  if (!(delta >= alpha * gamma)) {
    throw Error(Errc::DeltaBelowAlphaGamma,
                "delta >= alpha*gamma = " + detail::num(alpha * gamma) +
                    " required, got delta = " + detail::num(delta));
  }
  return DSParams(alpha, gamma, delta);
}

inline BSibParams validate_bsib(double alpha, double rho) {
  check_alpha(alpha);
  if (alpha < 1.0) {
    const double lo = -alpha / (1.0 - alpha);
    if (!(rho >= lo && rho < 1.0)) {
      throw Error(Errc::RhoOutOfRange, "rho must lie in [" + detail::num(lo) +
                                           ", 1) for alpha = " + detail::num(alpha) +
                                           ", got " + detail::num(rho));
    }
  } else if (alpha == 1.0) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
      throw Error(Errc::RhoOutOfRange,
                  "rho must lie in [0, 1] for alpha = 1, got " + detail::num(rho));
    }
  } else {
    const double hi = alpha / (alpha - 1.0);
    if (!(rho > 1.0 && rho <= hi)) {
      throw Error(Errc::RhoOutOfRange, "rho must lie in (1, " + detail::num(hi) +
                                           "] for alpha = " + detail::num(alpha) +
                                           ", got " + detail::num(rho));
    }
  }
  return BSibParams(alpha, rho);
}

inline CompoundRep validate_compound(double lambda, double alpha, double rho) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(Errc::DomainError,
                "lambda must be positive and finite, got " + detail::num(lambda));
  }
  return CompoundRep{lambda, validate_bsib(alpha, rho)};
}

inline CompoundRep ds_to_compound(const DSParams& p) {
  const double a = p.alpha(), g = p.gamma(), d = p.delta();
  if (p.degenerate()) {
    throw Error(Errc::DegenerateDistribution,
                "DS(1, 0, 0) is a point mass at zero and has no compound form with lambda > 0");
  }
  if (a != 1.0) {
    const double lambda = d - g;
    double rho = d / lambda;
    // delta >= alpha*gamma maps onto the closed rho endpoint; keep rounding
    // in d/(d-g) from stepping over it.
    if (a < 1.0) {
      rho = std::max(rho, -a / (1.0 - a));
    } else {
      rho = std::min(rho, a / (a - 1.0));
    }
    return CompoundRep{lambda, validate_bsib(a, rho)};
  }
  if (g == 0.0) return CompoundRep{d, validate_bsib(1.0, 0.0)};
  return CompoundRep{d, validate_bsib(1.0, g / d)};
}

inline DSParams compound_to_ds(const CompoundRep& c) {
  const double a = c.summand.alpha(), r = c.summand.rho(), l = c.lambda;
  if (a == 1.0) return validate_ds(1.0, l * r, l);
  const double gamma = l * (r - 1.0);
  double delta = l * r;
  // A summand at the rho endpoint lands exactly on delta = alpha*gamma;
  // absorb the last-ulp rounding of the two products.
  const double floor = a * gamma;
  if (delta < floor && floor - delta <= 4.0 * 2.220446049250313e-16 * std::abs(floor)) {
    delta = floor;
  }
  return validate_ds(a, gamma, delta);
}

inline DSParams es_to_ds(const ESParams& e) {
  check_alpha(e.alpha);
  if (e.alpha != 1.0 ? !(e.sigma > 0.0) : !(e.sigma >= 0.0)) {
    throw Error(Errc::DomainError, "sigma must be > 0 (>= 0 at alpha = 1), got " +
                                       detail::num(e.sigma));
  }
  const double gamma = e.alpha != 1.0
                           ? -detail::sec_half_pi(e.alpha) * std::pow(e.sigma, e.alpha)
                           : 2.0 * e.sigma / std::numbers::pi;
  if (!(e.delta >= e.alpha * gamma)) {
    throw Error(Errc::DeltaLimViolation,
                "location must satisfy delta >= " + detail::num(e.alpha * gamma) +
                    " for the mixed Poisson law to exist, got " + detail::num(e.delta));
  }
  return validate_ds(e.alpha, gamma, e.delta);
}

inline ESParams ds_to_es(const DSParams& p) {
  const double a = p.alpha(), g = p.gamma();
  if (a == 1.0) return ESParams{1.0, std::numbers::pi * g / 2.0, p.delta()};
  const double base = -g * detail::cos_half_pi(a);
  if (!(base > 0.0)) {
    throw Error(Errc::NoScaleForDegenerate,
                "no positive scale solves gamma = -sec(pi*alpha/2)*sigma^alpha for " +
                    p.describe());
  }
  return ESParams{a, std::pow(base, 1.0 / a), p.delta()};
}

inline Classification classify(const DSParams& p) {
  const double a = p.alpha(), g = p.gamma(), d = p.delta();
  Classification c;
  c.strict = (a < 1.0 && d == 0.0) || (a == 1.0 && g == 0.0);
  c.self_decomposable = a != 1.0 ? d >= a * a * g : d >= 2.0 * g;
  c.is_poisson = g == 0.0 && d > 0.0;
  c.is_degenerate = p.degenerate();
  c.mean_finite = a > 1.0 || g == 0.0;
  c.variance_finite = a == 2.0 || g == 0.0;
  return c;
}

}  // namespace dstable
