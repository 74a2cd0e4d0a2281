#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hsic_lab/errors.hpp"
#include "hsic_lab/subset.hpp"

namespace hsic_lab {

struct Atom {
  std::vector<double> x;
  double y = 0.0;
  double prob = 0.0;
};

/// Joint law of (X, Y) with finitely many support points. Every atom has
/// positive probability, the (x, y) pairs are distinct, and the
/// probabilities sum to one within `kProbabilityTolerance`.
class FiniteJointDistribution {
 public:
  static constexpr double kProbabilityTolerance = 1e-12;

  FiniteJointDistribution(int p, std::vector<Atom> atoms) : p_(p), atoms_(std::move(atoms)) {
    validate(/*check_total=*/true);
  }

  int p() const noexcept { return p_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  /// Law with every x extended by `extra` zero coordinates.
  FiniteJointDistribution padded(int extra) const {
    if (extra < 0) throw domain_error("padding must be nonnegative");
    auto atoms = atoms_;
    for (auto& a : atoms) a.x.resize(a.x.size() + static_cast<std::size_t>(extra), 0.0);
    return FiniteJointDistribution(p_ + extra, std::move(atoms));
  }

  /// Builds the empirical law of the rows, merging identical rows into one
  /// atom of weight count / n. Atom order is the lexicographic order of (x, y).
  static FiniteJointDistribution empirical(int p,
                                           const std::vector<std::pair<std::vector<double>, double>>& rows) {
    if (rows.empty()) throw domain_error("empirical distribution of an empty dataset");
    std::map<std::pair<std::vector<double>, double>, std::size_t> counts;
    for (const auto& r : rows) ++counts[r];
    const double n = static_cast<double>(rows.size());
    std::vector<Atom> atoms;
    atoms.reserve(counts.size());
    for (const auto& [key, count] : counts) {
      atoms.push_back(Atom{key.first, key.second, static_cast<double>(count) / n});
    }
    // count / n rounding accumulates over many distinct rows, so the total is
    // not held to the file-level tolerance.
    return FiniteJointDistribution(p, std::move(atoms), unchecked_total{});
  }

 private:
  struct unchecked_total {};

  FiniteJointDistribution(int p, std::vector<Atom> atoms, unchecked_total)
      : p_(p), atoms_(std::move(atoms)) {
    validate(/*check_total=*/false);
  }

  void validate(bool check_total) const {
    if (p_ < 1) throw format_error("distribution dimension p must be positive");
    if (atoms_.empty()) throw format_error("distribution has no atoms");
    double total = 0.0;
    for (const auto& a : atoms_) {
      if (a.x.size() != static_cast<std::size_t>(p_)) {
        throw dimension_error("atom x has length " + std::to_string(a.x.size()) +
                              ", expected p = " + std::to_string(p_));
      }
      if (!(a.prob > 0.0) || a.prob > 1.0) {
        throw format_error("atom probability must lie in (0, 1]");
      }
      if (!std::isfinite(a.y) ||
          !std::all_of(a.x.begin(), a.x.end(), [](double v) { return std::isfinite(v); })) {
        throw format_error("atom coordinates must be finite");
      }
      total += a.prob;
    }
    if (check_total && std::abs(total - 1.0) > kProbabilityTolerance) {
      throw format_error("atom probabilities sum to " + std::to_string(total) + ", not 1");
    }
    std::vector<std::pair<std::vector<double>, double>> keys;
    keys.reserve(atoms_.size());
    for (const auto& a : atoms_) keys.emplace_back(a.x, a.y);
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
      throw format_error("distribution has repeated (x, y) atoms");
    }
  }

  int p_;
  std::vector<Atom> atoms_;
};

/// Signal strengths of the two informative features, with Delta1 >= Delta2.
struct DeltaParams {
  double delta1 = 0.0;
  double delta2 = 0.0;
  int p = 2;

  DeltaParams() = default;
  DeltaParams(double d1, double d2, int dim = 2) : delta1(d1), delta2(d2), p(dim) {
    if (!(0.0 <= d2 && d2 <= d1 && d1 <= 1.0)) {
      throw domain_error("delta parameters need 0 <= delta2 <= delta1 <= 1");
    }
    if (dim < 2) throw domain_error("counterexample dimension p must be >= 2");
  }
};

/// The eight-point law on {+-1}^2 x {+-1}:
///   P(x1, x2, y) = (1/8)(1 + delta1 x1 y)(1 + delta2 x2 y),
/// so Y is balanced and X1, X2 are independent given Y. Coordinates 3..p are
/// zero. Zero-probability cells (delta_i = 1) are dropped.
inline FiniteJointDistribution build_counterexample(const DeltaParams& params) {
  std::vector<Atom> atoms;
  for (double x1 : {1.0, -1.0}) {
    for (double x2 : {1.0, -1.0}) {
      for (double y : {1.0, -1.0}) {
        const double prob =
            0.125 * (1.0 + params.delta1 * x1 * y) * (1.0 + params.delta2 * x2 * y);
        if (prob <= 0.0) continue;
        std::vector<double> x(static_cast<std::size_t>(params.p), 0.0);
        x[0] = x1;
        x[1] = x2;
        atoms.push_back(Atom{std::move(x), y, prob});
      }
    }
  }
  return FiniteJointDistribution(params.p, std::move(atoms));
}

inline std::vector<double> project(const std::vector<double>& x, const FeatureSubset& subset) {
  std::vector<double> out;
  out.reserve(subset.size());
  for (int i : subset.indices()) out.push_back(x[static_cast<std::size_t>(i - 1)]);
  return out;
}

/// E[Y | X_S = x_S] for every x_S of positive probability, keyed by the exact
/// coordinate tuple. The empty subset yields a single entry with key {} and
/// value E[Y].
inline std::map<std::vector<double>, double> conditional_expectation(
    const FiniteJointDistribution& dist, const FeatureSubset& subset) {
  for (int i : subset.indices()) {
    if (i > dist.p()) throw dimension_error("subset index exceeds distribution dimension");
  }
  std::map<std::vector<double>, std::pair<double, double>> acc;  // (sum p*y, sum p)
  for (const auto& a : dist.atoms()) {
    auto& [py, pm] = acc[project(a.x, subset)];
    py += a.prob * a.y;
    pm += a.prob;
  }
  std::map<std::vector<double>, double> out;
  for (const auto& [key, sums] : acc) out.emplace(key, sums.first / sums.second);
  return out;
}

/// L2(P) norm of E[Y|X] - E[Y|X_S], by enumeration over atoms.
inline double l2_gap(const FiniteJointDistribution& dist, const FeatureSubset& subset) {
  const auto full = conditional_expectation(dist, FeatureSubset::all(dist.p()));
  const auto part = conditional_expectation(dist, subset);
  double sum = 0.0;
  for (const auto& a : dist.atoms()) {
    const double d = full.at(a.x) - part.at(project(a.x, subset));
    sum += a.prob * d * d;
  }
  return std::sqrt(sum);
}

struct Dataset {
  int p = 0;
  std::vector<std::pair<std::vector<double>, double>> rows;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return rows.size(); }
};

/// n i.i.d. draws by inverse CDF over the atoms in stored order. The uniform
/// variate is built from the top 53 bits of mt19937_64, so output depends only
/// on (dist, n, seed).
inline Dataset sample(const FiniteJointDistribution& dist, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw domain_error("sample size must be positive");
  std::vector<double> cdf;
  cdf.reserve(dist.size());
  double running = 0.0;
  for (const auto& a : dist.atoms()) {
    running += a.prob;
    cdf.push_back(running);
  }
  std::mt19937_64 rng(seed);
  Dataset data{dist.p(), {}, seed};
  data.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * running;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    const auto& a = dist.atoms()[static_cast<std::size_t>(it - cdf.begin())];
    data.rows.emplace_back(a.x, a.y);
  }
  return data;
}

}  // namespace hsic_lab
