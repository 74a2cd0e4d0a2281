#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hsic_lab/distribution.hpp"
#include "hsic_lab/errors.hpp"
#include "hsic_lab/kernel.hpp"
#include "hsic_lab/subset.hpp"

namespace hsic_lab {

/// Per-feature weights beta; the kernel sees beta (.) x coordinate-wise.
struct WeightVector {
  std::vector<double> beta;

  WeightVector() = default;
  explicit WeightVector(std::vector<double> b) : beta(std::move(b)) {
    for (double v : beta) {
      if (!std::isfinite(v)) throw domain_error("weights must be finite");
    }
  }

  std::size_t size() const noexcept { return beta.size(); }
};

struct HsicValue {
  double value = 0.0;
  std::string kernel_x;
  std::string kernel_y;
};

namespace detail {

struct GramPair {
  std::vector<double> kx;  // row-major m x m
  std::vector<double> ky;
  bool x_constant = true;
};

inline GramPair gram_matrices(const FiniteJointDistribution& dist, const RadialXKernel& kx,
                              const ResponseKernel& ky, std::span<const double> w) {
  const std::size_t m = dist.size();
  const auto& atoms = dist.atoms();
  std::vector<std::vector<double>> z(m);
  for (std::size_t a = 0; a < m; ++a) {
    z[a].resize(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) z[a][j] = w[j] * atoms[a].x[j];
  }
  GramPair g;
  g.kx.resize(m * m);
  g.ky.resize(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (z[a] != z[b]) g.x_constant = false;
      g.kx[a * m + b] = eval_x_kernel(kx, z[a], z[b]);
      g.ky[a * m + b] = eval_y_kernel(ky, atoms[a].y, atoms[b].y);
    }
  }
  return g;
}

}  // namespace detail

/// Population HSIC of (w (.) X, Y) by direct double summation of
///   E[kx ky] + E[kx] E[ky] - 2 E_{X',Y'}[ E[kx | X'] E[ky | Y'] ]
/// over atom pairs. Returns exactly 0 when the weighted features are constant.
inline HsicValue exact_hsic_weighted(const FiniteJointDistribution& dist, const RadialXKernel& kx,
                                     const ResponseKernel& ky, const WeightVector& w) {
  if (w.size() != static_cast<std::size_t>(dist.p())) {
    throw dimension_error("weight vector has length " + std::to_string(w.size()) +
                          ", distribution has p = " + std::to_string(dist.p()));
  }
  HsicValue out{0.0, kx.describe(), ky.describe()};
  const auto g = detail::gram_matrices(dist, kx, ky, w.beta);
  if (g.x_constant) return out;

  const std::size_t m = dist.size();
  const auto& atoms = dist.atoms();
  double joint = 0.0, mean_kx = 0.0, mean_ky = 0.0, cross = 0.0;
  for (std::size_t b = 0; b < m; ++b) {
    double row_kx = 0.0, row_ky = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      const double pa = atoms[a].prob;
      const double kxab = g.kx[a * m + b];
      const double kyab = g.ky[a * m + b];
      joint += pa * atoms[b].prob * kxab * kyab;
      row_kx += pa * kxab;
      row_ky += pa * kyab;
    }
    const double pb = atoms[b].prob;
    mean_kx += pb * row_kx;
    mean_ky += pb * row_ky;
    cross += pb * row_kx * row_ky;
  }
  out.value = joint + mean_kx * mean_ky - 2.0 * cross;
  return out;
}

/// HSIC(X_S, Y) with the induced kernel phi_X(|x_S - x'_S|^2). Evaluated as the
/// weighted HSIC at the 0/1 indicator of S; the empty subset gives 0.
inline HsicValue exact_hsic_subset(const FiniteJointDistribution& dist, const RadialXKernel& kx,
                                   const ResponseKernel& ky, const FeatureSubset& subset) {
  for (int i : subset.indices()) {
    if (i < 1 || i > dist.p()) {
      throw dimension_error("subset index " + std::to_string(i) + " outside 1.." +
                            std::to_string(dist.p()));
    }
  }
  return exact_hsic_weighted(dist, kx, ky, WeightVector(subset.indicator(dist.p())));
}

/// Closed-form objective on the counterexample family:
///   (phi(0) - phi(4 b1^2 + 4 b2^2)) (d1^2 + d2^2) - (phi(4 b1^2) - phi(4 b2^2)) (d1^2 - d2^2).
inline double closed_form_L(const DeltaParams& params, std::array<double, 2> beta,
                            const RadialXKernel& kx) {
  const double s1 = 4.0 * beta[0] * beta[0];
  const double s2 = 4.0 * beta[1] * beta[1];
  const double d1 = params.delta1 * params.delta1;
  const double d2 = params.delta2 * params.delta2;
  return (kx.phi(0.0) - kx.phi(s1 + s2)) * (d1 + d2) - (kx.phi(s1) - kx.phi(s2)) * (d1 - d2);
}

/// Constant a with HSIC(beta (.) X; Y) = a * closed_form_L(beta) when Y is
/// uniform on {+-1}. Product form: (phi(1) - phi(-1)) / 8. Distance form:
/// (phi(0) - phi(2)) / 8, since |y - y'| only takes the values 0 and 2.
inline double proportionality_constant(const ResponseKernel& ky) {
  const double c = ky.form() == ResponseKernel::Form::product
                       ? (ky.phi(1.0) - ky.phi(-1.0)) / 8.0
                       : (ky.phi(0.0) - ky.phi(2.0)) / 8.0;
  if (!(c > 0.0)) {
    throw admissibility_error("response kernel " + ky.describe() +
                              " gives a nonpositive proportionality constant");
  }
  return c;
}

/// Second evaluation route for balanced {+-1}-valued Y. Shifting the response
/// kernel by c = (k(1,1) + k(1,-1)) / 2 makes E[k~(Y, Y') | Y'] vanish, which
/// kills the last two HSIC terms:
///   HSIC = E[kx(X, X') (ky(Y, Y') - c)].
/// Throws domain_error if Y is not balanced on {+-1} within 1e-12.
inline HsicValue centered_hsic(const FiniteJointDistribution& dist, const RadialXKernel& kx,
                               const ResponseKernel& ky, const WeightVector& w) {
  if (w.size() != static_cast<std::size_t>(dist.p())) {
    throw dimension_error("weight vector length does not match distribution");
  }
  double p_plus = 0.0;
  for (const auto& a : dist.atoms()) {
    if (a.y != 1.0 && a.y != -1.0) throw domain_error("centering route needs Y in {+-1}");
    if (a.y == 1.0) p_plus += a.prob;
  }
  if (std::abs(p_plus - 0.5) > 1e-12) throw domain_error("centering route needs balanced Y");

  const double shift = 0.5 * (eval_y_kernel(ky, 1.0, 1.0) + eval_y_kernel(ky, 1.0, -1.0));
  const auto& atoms = dist.atoms();
  double sum = 0.0;
  for (const auto& a : atoms) {
    for (const auto& b : atoms) {
      std::vector<double> za(w.size()), zb(w.size());
      for (std::size_t j = 0; j < w.size(); ++j) {
        za[j] = w.beta[j] * a.x[j];
        zb[j] = w.beta[j] * b.x[j];
      }
      sum += a.prob * b.prob * eval_x_kernel(kx, za, zb) * (eval_y_kernel(ky, a.y, b.y) - shift);
    }
  }
  return HsicValue{sum, kx.describe(), ky.describe()};
}

/// Plug-in (V-statistic) estimator: the exact HSIC of the empirical law with
/// weight 1/n per row. Identical rows are merged before the double sum, so the
/// cost is O(n log n + m^2) for m distinct rows.
inline double empirical_hsic(const Dataset& data, const RadialXKernel& kx, const ResponseKernel& ky,
                             const WeightVector& w) {
  if (data.rows.empty()) throw domain_error("empirical HSIC of an empty dataset");
  const auto law = FiniteJointDistribution::empirical(data.p, data.rows);
  return exact_hsic_weighted(law, kx, ky, w).value;
}

}  // namespace hsic_lab
