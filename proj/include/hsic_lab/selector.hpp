#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hsic_lab/distribution.hpp"
#include "hsic_lab/errors.hpp"
#include "hsic_lab/hsic.hpp"
#include "hsic_lab/kernel.hpp"
#include "hsic_lab/subset.hpp"

namespace hsic_lab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Values within this distance of the best candidate count as ties.
inline constexpr double kTieTolerance = 1e-12;

/// l_q norm for q in [1, inf]; q = inf is the max norm.
inline double lq_norm(std::span<const double> v, double q) {
  if (!(q >= 1.0)) throw domain_error("norm order q must be >= 1");
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), q);
  return std::pow(s, 1.0 / q);
}

struct AuditEntry {
  FeatureSubset subset;
  std::vector<double> weights;  // empty for discrete candidates
  double value = 0.0;
};

struct SelectionResult {
  FeatureSubset subset;
  std::optional<WeightVector> weights;
  HsicValue attained;
  std::vector<AuditEntry> audit;
};

struct ContinuousSearchConfig {
  double q = kInfinity;
  double r = 1.0;
  int grid_points_per_axis = 513;
  int refine_iterations = 3;
  double support_tolerance = 1e-9;

  void validate() const {
    if (!(q >= 1.0)) throw domain_error("q must lie in [1, inf]");
    if (!(r >= 0.0) || !std::isfinite(r)) throw domain_error("radius r must be finite and >= 0");
    if (grid_points_per_axis < 33) throw domain_error("grid needs at least 33 points per axis");
    if (refine_iterations < 0) throw domain_error("refine_iterations must be >= 0");
    if (!(support_tolerance > 0.0)) throw domain_error("support tolerance must be positive");
  }
};

inline constexpr int kMaxSubsetDimension = 20;

/// Exhaustive argmax of HSIC(X_S; Y) over all 2^p subsets. Ties (within
/// kTieTolerance of the maximum) go to the smallest subset, then the
/// lexicographically first. The audit lists every subset in that order.
inline SelectionResult select_subset(const FiniteJointDistribution& dist, const RadialXKernel& kx,
                                     const ResponseKernel& ky) {
  const int p = dist.p();
  if (p > kMaxSubsetDimension) {
    throw enumeration_error("subset enumeration limited to p <= 20, got p = " + std::to_string(p));
  }
  std::vector<FeatureSubset> candidates;
  candidates.reserve(std::size_t{1} << p);
  for (unsigned long mask = 0; mask < (1UL << p); ++mask) {
    candidates.push_back(FeatureSubset::from_mask(mask, p));
  }
  std::sort(candidates.begin(), candidates.end());

  SelectionResult result;
  result.audit.reserve(candidates.size());
  double best = -kInfinity;
  for (const auto& s : candidates) {
    const double v = exact_hsic_subset(dist, kx, ky, s).value;
    result.audit.push_back(AuditEntry{s, {}, v});
    best = std::max(best, v);
  }
  for (const auto& entry : result.audit) {
    if (entry.value >= best - kTieTolerance) {
      result.subset = entry.subset;
      result.attained = HsicValue{entry.value, kx.describe(), ky.describe()};
      break;
    }
  }
  return result;
}

inline constexpr std::size_t kMaxContinuousGridPoints = std::size_t{1} << 24;

namespace detail {

/// Largest t >= 0 with |beta with coordinate j replaced by t|_q <= r.
inline double coordinate_upper_bound(const std::vector<double>& beta, std::size_t j, double q,
                                     double r) {
  if (std::isinf(q)) return r;
  double rest = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (i != j) rest += std::pow(std::abs(beta[i]), q);
  }
  const double slack = std::pow(r, q) - rest;
  return slack > 0.0 ? std::pow(slack, 1.0 / q) : 0.0;
}

template <class F>
double golden_section_argmax(F&& f, double lo, double hi) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + std::abs(hi)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

inline FeatureSubset support_of(const std::vector<double>& beta, double tol) {
  std::vector<int> idx;
  for (std::size_t j = 0; j < beta.size(); ++j) {
    if (std::abs(beta[j]) > tol) idx.push_back(static_cast<int>(j) + 1);
  }
  return FeatureSubset(std::move(idx), static_cast<int>(beta.size()));
}

}  // namespace detail

/// Maximises HSIC(beta (.) X; Y) over the nonnegative part of the l_q ball of
/// radius r (the objective is invariant under coordinate sign flips).
///
/// A dense grid of r * k / (G - 1), k = 0..G-1 per axis is scanned, keeping
/// only points inside the ball; the best grid point is then polished by
/// coordinate-wise golden-section rounds, each coordinate searched over its
/// feasible segment with both endpoints also tried. A move is accepted only if
/// it gains more than kTieTolerance; near a flat optimum golden section lands
/// ~1e-8 off the true point and would otherwise win on roundoff alone. The
/// audit holds the grid winner and every refinement proposal.
inline SelectionResult select_continuous(const FiniteJointDistribution& dist,
                                         const RadialXKernel& kx, const ResponseKernel& ky,
                                         const ContinuousSearchConfig& cfg) {
  if (cfg.r < 0.0) throw domain_error("radius r must be >= 0");
  cfg.validate();
  const auto p = static_cast<std::size_t>(dist.p());
  const auto objective = [&](const std::vector<double>& beta) {
    return exact_hsic_weighted(dist, kx, ky, WeightVector(beta)).value;
  };

  SelectionResult result;
  if (cfg.r == 0.0) {
    std::vector<double> zero(p, 0.0);
    result.subset = FeatureSubset({}, dist.p());
    result.weights = WeightVector(zero);
    result.attained = HsicValue{objective(zero), kx.describe(), ky.describe()};
    result.audit.push_back(AuditEntry{result.subset, zero, result.attained.value});
    return result;
  }

  const auto g = static_cast<std::size_t>(cfg.grid_points_per_axis);
  std::size_t total = 1;
  for (std::size_t j = 0; j < p; ++j) {
    if (total > kMaxContinuousGridPoints / g) {
      throw enumeration_error("continuous grid of " + std::to_string(g) + "^" +
                              std::to_string(p) + " points is too large; lower --grid");
    }
    total *= g;
  }

  const double step = cfg.r / static_cast<double>(g - 1);
  const double limit = cfg.r * (1.0 + 1e-12);
  std::vector<std::size_t> index(p, 0);
  std::vector<double> beta(p, 0.0), best_beta(p, 0.0);
  double best = -kInfinity;
  for (std::size_t n = 0; n < total; ++n) {
    for (std::size_t j = 0; j < p; ++j) {
      beta[j] = index[j] == g - 1 ? cfg.r : static_cast<double>(index[j]) * step;
    }
    if (lq_norm(beta, cfg.q) <= limit) {
      const double v = objective(beta);
      if (v > best) {
        best = v;
        best_beta = beta;
      }
    }
    for (std::size_t j = p; j-- > 0;) {
      if (++index[j] < g) break;
      index[j] = 0;
    }
  }
  result.audit.push_back(
      AuditEntry{detail::support_of(best_beta, cfg.support_tolerance), best_beta, best});

  for (int round = 0; round < cfg.refine_iterations; ++round) {
    for (std::size_t j = 0; j < p; ++j) {
      const double hi = detail::coordinate_upper_bound(best_beta, j, cfg.q, cfg.r);
      auto trial = best_beta;
      const auto along = [&](double t) {
        trial[j] = t;
        return objective(trial);
      };
      const double golden = hi > 0.0 ? detail::golden_section_argmax(along, 0.0, hi) : 0.0;
      for (double t : {golden, 0.0, hi}) {
        trial[j] = t;
        const double v = objective(trial);
        result.audit.push_back(
            AuditEntry{detail::support_of(trial, cfg.support_tolerance), trial, v});
        if (v > best + kTieTolerance) {
          best = v;
          best_beta = trial;
        }
      }
    }
  }

  result.subset = detail::support_of(best_beta, cfg.support_tolerance);
  result.weights = WeightVector(best_beta);
  result.attained = HsicValue{best, kx.describe(), ky.describe()};
  return result;
}

struct ConditionCheck {
  bool holds = false;
  double lhs = 0.0;  // phi_X(4 beta1^2) / phi_X(0)
  double rhs = 0.0;  // (d1^2 - d2^2) / (d1^2 + d2^2)
};

/// Elimination condition: zeroing the weaker weight strictly raises the
/// objective at this beta1 whenever lhs < rhs.
inline ConditionCheck check_elimination_condition(const RadialXKernel& kx, double beta1,
                                                  const DeltaParams& params) {
  if (!(beta1 > 0.0)) throw domain_error("beta1 must be positive");
  const double d1 = params.delta1 * params.delta1;
  const double d2 = params.delta2 * params.delta2;
  if (d1 + d2 == 0.0) throw domain_error("condition undefined for delta1 = delta2 = 0");
  ConditionCheck c;
  c.lhs = schoenberg_ratio(kx, 4.0 * beta1 * beta1);
  c.rhs = (d1 - d2) / (d1 + d2);
  c.holds = c.lhs < c.rhs;
  return c;
}

/// Fixes delta1 = 0.9 and halves delta2 from 0.1 until the elimination
/// condition holds at beta1 = b0.
inline DeltaParams pick_delta(const RadialXKernel& kx, double b0, int p = 2) {
  if (!(b0 > 0.0)) throw domain_error("b0 must be positive");
  if (!(schoenberg_ratio(kx, 4.0 * b0 * b0) < 1.0)) {
    throw domain_error("b0 too small: phi_X(4 b0^2) / phi_X(0) rounds to 1");
  }
  double delta2 = 0.1;
  while (!check_elimination_condition(kx, b0, DeltaParams(0.9, delta2, p)).holds) {
    delta2 *= 0.5;
    if (delta2 == 0.0) throw domain_error("no positive delta2 satisfies the condition");
  }
  return DeltaParams(0.9, delta2, p);
}

/// b0 with |(b0, b0)|_q = r.
inline double radius_to_b0(double q, double r) {
  if (!(r > 0.0)) throw domain_error("radius r must be positive");
  const std::array<double, 2> ones{1.0, 1.0};
  return r / lq_norm(ones, q);
}

}  // namespace hsic_lab
