#pragma once

// Generating functions of DS and bSib laws and the closure algebra
// (thinning, Poisson translation, convolution, stability shift,
// self-decomposition remainder).

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "dstable/params.hpp"

namespace dstable {

using ComplexPoint = std::complex<double>;

struct StabilityReport {
  double rho = 0.0;
  double mu = 0.0;
  double max_residual = 0.0;
  std::vector<double> grid;
};

namespace detail {

inline constexpr double kDiskSlack = 1e-12;

inline void check_disk(ComplexPoint z) {
  if (!(std::abs(z) <= 1.0 + kDiskSlack)) {
    throw Error(Errc::DomainError, "generating function argument must satisfy |z| <= 1");
  }
}

inline void check_open_unit(double rho, const char* what) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(Errc::DomainError, std::string(what) + " must lie in (0, 1), got " + num(rho));
  }
}

}  // namespace detail

/// log G(z) on the real segment z <= 1.
inline double log_pgf(const DSParams& p, double z) {
  if (z == 1.0) return 0.0;
  const double w = 1.0 - z;
  if (p.unit_alpha()) return -w * p.delta() + p.gamma() * w * std::log(w);
  return -w * p.delta() + p.gamma() * std::pow(w, p.alpha());
}

inline double pgf(const DSParams& p, double z) {
  if (!(std::abs(z) <= 1.0 + detail::kDiskSlack)) {
    throw Error(Errc::DomainError, "generating function argument must satisfy |z| <= 1");
  }
  return std::exp(log_pgf(p, z));
}

/// Principal branch throughout; Re(1-z) >= 0 on the closed disk so no cut is
/// crossed. z = 1 returns exactly 1 (0*log 0 = 0).
inline ComplexPoint pgf(const DSParams& p, ComplexPoint z) {
  detail::check_disk(z);
  if (z == ComplexPoint(1.0, 0.0)) return {1.0, 0.0};
  if (z.imag() == 0.0) return {pgf(p, z.real()), 0.0};
  const ComplexPoint w = 1.0 - z;
  const ComplexPoint tail = p.unit_alpha() ? w * std::log(w) : std::pow(w, p.alpha());
  return std::exp(-w * p.delta() + p.gamma() * tail);
}

/// Factorial cumulant generating function log G(1+t), t in [-1, 0].
inline double fcgf(const DSParams& p, double t) {
  if (!(t >= -1.0 && t <= 0.0)) {
    throw Error(Errc::DomainError, "fcgf argument must lie in [-1, 0], got " + detail::num(t));
  }
  if (t == 0.0) return 0.0;
  if (p.unit_alpha()) return t * p.delta() + p.gamma() * (-t) * std::log(-t);
  return t * p.delta() + p.gamma() * std::pow(-t, p.alpha());
}

/// R-function d/dz log G(z) on [0, 1).
inline double rfunc(const DSParams& p, double z) {
  if (!(z >= 0.0 && z < 1.0)) {
    throw Error(Errc::DomainError, "rfunc argument must lie in [0, 1), got " + detail::num(z));
  }
  if (p.unit_alpha()) return p.delta() - p.gamma() * (1.0 + std::log1p(-z));
  return p.delta() - p.gamma() * p.alpha() * std::pow(1.0 - z, p.alpha() - 1.0);
}

inline ComplexPoint bsib_pgf(const BSibParams& b, ComplexPoint z) {
  detail::check_disk(z);
  if (z == ComplexPoint(0.0, 0.0)) return {0.0, 0.0};
  if (z == ComplexPoint(1.0, 0.0)) return {1.0, 0.0};
  const ComplexPoint w = 1.0 - z;
  const double r = b.rho();
  if (b.alpha() == 1.0) return z + r * w * std::log(w);
  const ComplexPoint wa =
      z.imag() == 0.0 ? ComplexPoint(std::pow(w.real(), b.alpha()), 0.0) : std::pow(w, b.alpha());
  return 1.0 - (r * w + (1.0 - r) * wa);
}

/// Parameters of the binomial thinning a∘X, a in (0, 1].
inline DSParams thin_params(const DSParams& p, double a) {
  if (!(a > 0.0 && a <= 1.0)) {
    throw Error(Errc::DomainError, "thinning fraction must lie in (0, 1], got " + detail::num(a));
  }
  if (a == 1.0) return p;
  if (p.unit_alpha()) {
    return validate_ds(1.0, a * p.gamma(), a * (p.delta() - p.gamma() * std::log(a)));
  }
  return validate_ds(p.alpha(), p.gamma() * std::pow(a, p.alpha()), a * p.delta());
}

/// Parameters of the Poisson translation X ⊕ m. Negative m is allowed only
/// while the result stays a valid law.
inline DSParams translate_params(const DSParams& p, double m) {
  if (!std::isfinite(m)) throw Error(Errc::DomainError, "translation must be finite");
  const double d = p.delta() + m;
  if (!(d >= p.alpha() * p.gamma())) {
    throw Error(Errc::InvalidTranslation,
                "translated delta " + detail::num(d) + " falls below alpha*gamma = " +
                    detail::num(p.alpha() * p.gamma()));
  }
  return validate_ds(p.alpha(), p.gamma(), d);
}

inline DSParams convolve_params(const DSParams& p1, const DSParams& p2) {
  if (p1.alpha() != p2.alpha()) {
    throw Error(Errc::AlphaMismatch, "convolution needs equal alpha, got " +
                                         detail::num(p1.alpha()) + " and " +
                                         detail::num(p2.alpha()));
  }
  return validate_ds(p1.alpha(), p1.gamma() + p2.gamma(), p1.delta() + p2.delta());
}

/// Fraction applied to the second copy, (1 - rho^alpha)^(1/alpha).
inline double stability_partner(double alpha, double rho) {
  return std::pow(1.0 - std::pow(rho, alpha), 1.0 / alpha);
}

/// Poisson translation mu making rho∘X1 + s∘X2 equal in law to X ⊕ mu.
inline double stability_mu(const DSParams& p, double rho) {
  detail::check_open_unit(rho, "rho");
  if (p.unit_alpha()) {
    return -p.gamma() * (rho * std::log(rho) + (1.0 - rho) * std::log1p(-rho));
  }
  return p.delta() * (stability_partner(p.alpha(), rho) - (1.0 - rho));
}

inline std::vector<double> default_stability_grid() {
  std::vector<double> g;
  for (int i = 0; i < 10; ++i) g.push_back(i / 10.0);
  g.push_back(0.99);
  return g;
}

/// max |G(z)e^{mu(z-1)} - G(1-rho(1-z)) G(1-s(1-z))| over the grid. mu comes
/// from stability_mu unless overridden.
inline StabilityReport stability_residual(const DSParams& p, double rho,
                                          std::span<const double> zgrid,
                                          std::optional<double> mu_override = {}) {
  detail::check_open_unit(rho, "rho");
  if (zgrid.empty()) throw Error(Errc::DomainError, "z grid must be nonempty");
  StabilityReport rep;
  rep.rho = rho;
  rep.mu = mu_override.value_or(stability_mu(p, rho));
  rep.grid.assign(zgrid.begin(), zgrid.end());
  const double s = stability_partner(p.alpha(), rho);
  for (double z : zgrid) {
    if (!(z >= 0.0 && z < 1.0)) {
      throw Error(Errc::DomainError, "stability grid points must lie in [0, 1)");
    }
    const double w = 1.0 - z;
    const double lhs = pgf(p, z) * std::exp(-rep.mu * w);
    const double rhs = pgf(p, 1.0 - rho * w) * pgf(p, 1.0 - s * w);
    rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs));
  }
  return rep;
}

/// Law of the remainder X_rho in X = rho∘X' + X_rho. Throws when the
/// remainder is not a valid DS law at this rho.
inline DSParams selfdecomp_remainder(const DSParams& p, double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw Error(Errc::DomainError, "rho must lie in [0, 1), got " + detail::num(rho));
  }
  if (rho == 0.0) return p;
  double g, d;
  if (p.unit_alpha()) {
    g = p.gamma() * (1.0 - rho);
    d = (1.0 - rho) * p.delta() + p.gamma() * rho * std::log(rho);
  } else {
    g = p.gamma() * (1.0 - std::pow(rho, p.alpha()));
    d = (1.0 - rho) * p.delta();
  }
  if (!(d >= p.alpha() * g)) {
    throw Error(Errc::NotSelfDecomposableAtRho,
                p.describe() + " at rho = " + detail::num(rho) + ": remainder delta " +
                    detail::num(d) + " < alpha*gamma = " + detail::num(p.alpha() * g));
  }
  return validate_ds(p.alpha(), g, d);
}

}  // namespace dstable
