#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "hsic_lab/distribution.hpp"
#include "hsic_lab/kernel.hpp"

namespace hsic_lab::random_instances {

// Generators for randomized property checks. All draws come from a caller-owned
// mt19937_64, so a seed fixes every instance.

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline std::vector<double> normalized_weights(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& v : w) {
    v = uniform(rng, 0.05, 1.0);
    total += v;
  }
  for (auto& v : w) v /= total;
  return w;
}

/// Coordinates on a coarse lattice so that atoms often share x or y values.
inline double lattice_value(std::mt19937_64& rng) {
  return 0.5 * static_cast<double>(uniform_int(rng, -4, 4));
}

/// Arbitrary joint law with at most `max_atoms` atoms and p in [1, 4].
inline FiniteJointDistribution joint(std::mt19937_64& rng, int max_atoms = 64) {
  const int p = uniform_int(rng, 1, 4);
  const int target = uniform_int(rng, 1, max_atoms);
  std::set<std::pair<std::vector<double>, double>> seen;
  std::vector<std::pair<std::vector<double>, double>> support;
  for (int tries = 0; static_cast<int>(support.size()) < target && tries < 8 * target; ++tries) {
    std::vector<double> x(static_cast<std::size_t>(p));
    for (auto& v : x) v = lattice_value(rng);
    const double y = lattice_value(rng);
    if (seen.emplace(x, y).second) support.emplace_back(std::move(x), y);
  }
  const auto w = normalized_weights(rng, support.size());
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < support.size(); ++i) {
    atoms.push_back(Atom{support[i].first, support[i].second, w[i]});
  }
  return FiniteJointDistribution(p, std::move(atoms));
}

/// Law of the form P(x) Q(y), at most `max_atoms` atoms in total.
inline FiniteJointDistribution product(std::mt19937_64& rng, int max_atoms = 64) {
  const int p = uniform_int(rng, 1, 4);
  const int nx = uniform_int(rng, 1, 8);
  const int ny = uniform_int(rng, 1, std::max(1, max_atoms / nx));
  std::set<std::vector<double>> xs;
  std::set<double> ys;
  for (int i = 0; i < 4 * nx && static_cast<int>(xs.size()) < nx; ++i) {
    std::vector<double> x(static_cast<std::size_t>(p));
    for (auto& v : x) v = lattice_value(rng);
    xs.insert(std::move(x));
  }
  for (int i = 0; i < 4 * ny && static_cast<int>(ys.size()) < ny; ++i) ys.insert(lattice_value(rng));
  const auto px = normalized_weights(rng, xs.size());
  const auto py = normalized_weights(rng, ys.size());
  std::vector<Atom> atoms;
  std::size_t i = 0;
  for (const auto& x : xs) {
    std::size_t j = 0;
    for (double y : ys) atoms.push_back(Atom{x, y, px[i] * py[j++]});
    ++i;
  }
  return FiniteJointDistribution(p, std::move(atoms));
}

inline RadialXKernel x_kernel(std::mt19937_64& rng) {
  switch (uniform_int(rng, 0, 2)) {
    case 0:
      return RadialXKernel::gaussian();
    case 1:
      return RadialXKernel::laplace();
    default: {
      std::vector<MixtureAtom> atoms(static_cast<std::size_t>(uniform_int(rng, 1, 4)));
      for (auto& a : atoms) a = MixtureAtom{uniform(rng, 0.05, 5.0), uniform(rng, 0.1, 2.0)};
      return RadialXKernel::mixture(std::move(atoms));
    }
  }
}

inline ResponseKernel y_kernel(std::mt19937_64& rng) {
  return ResponseKernel(static_cast<ResponseKernel::Profile>(uniform_int(rng, 0, 3)));
}

}  // namespace hsic_lab::random_instances
