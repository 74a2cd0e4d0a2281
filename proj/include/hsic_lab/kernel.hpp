#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "hsic_lab/errors.hpp"

namespace hsic_lab {

namespace detail {

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline double parse_double(std::string_view text) {
  const std::string owned(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(owned, &used);
  } catch (const std::exception&) {
    throw format_error("not a number: '" + owned + "'");
  }
  if (used != owned.size() || !std::isfinite(value)) {
    throw format_error("not a finite number: '" + owned + "'");
  }
  return value;
}

}  // namespace detail

/// One exponential component w * exp(-t z) of a mixture profile.
struct MixtureAtom {
  double rate;    // t > 0
  double weight;  // w > 0
};

/// Radial kernel on feature vectors, k(x, x') = phi(|x - x'|^2), where phi is
/// a positive mixture of decaying exponentials.
///
/// Three profiles are supported:
///   gaussian             phi(z) = exp(-z)          (unit mass at t = 1)
///   laplace              phi(z) = exp(-sqrt(z))    (non-atomic mixing measure)
///   exponential_mixture  phi(z) = sum_i w_i exp(-t_i z), all t_i, w_i > 0
///
/// Every admitted profile is strictly decreasing on [0, inf) with phi(0) > 0.
class RadialXKernel {
 public:
  struct Gaussian {};
  struct Laplace {};
  struct ExponentialMixture {
    std::vector<MixtureAtom> atoms;
  };
  using Profile = std::variant<Gaussian, Laplace, ExponentialMixture>;

  static RadialXKernel gaussian() { return RadialXKernel(Gaussian{}); }
  static RadialXKernel laplace() { return RadialXKernel(Laplace{}); }

  static RadialXKernel mixture(std::vector<MixtureAtom> atoms) {
    if (atoms.empty()) {
      throw admissibility_error("exponential mixture needs at least one atom");
    }
    for (const auto& a : atoms) {
      if (!(a.rate > 0.0) || !(a.weight > 0.0) || !std::isfinite(a.rate) ||
          !std::isfinite(a.weight)) {
        throw admissibility_error(
            "exponential mixture atoms need finite rate > 0 and weight > 0");
      }
    }
    return RadialXKernel(ExponentialMixture{std::move(atoms)});
  }

  /// Parses `gaussian`, `laplace` or `mix:t1:w1,t2:w2,...`.
  static RadialXKernel parse(std::string_view text) {
    if (text == "gaussian") return gaussian();
    if (text == "laplace") return laplace();
    constexpr std::string_view prefix = "mix:";
    if (text.substr(0, prefix.size()) == prefix) {
      std::vector<MixtureAtom> atoms;
      for (auto item : detail::split(text.substr(prefix.size()), ',')) {
        const auto fields = detail::split(item, ':');
        if (fields.size() != 2) {
          throw format_error("mixture atom must be rate:weight, got '" +
                             std::string(item) + "'");
        }
        atoms.push_back(MixtureAtom{detail::parse_double(fields[0]),
                                    detail::parse_double(fields[1])});
      }
      return mixture(std::move(atoms));
    }
    throw format_error("unknown x-kernel '" + std::string(text) +
                       "' (expected gaussian|laplace|mix:t:w,...)");
  }

  const Profile& profile() const noexcept { return profile_; }

  /// Profile value phi(z) for z >= 0.
  double phi(double z) const {
    return std::visit(
        [z](const auto& p) -> double {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, Gaussian>) {
            return std::exp(-z);
          } else if constexpr (std::is_same_v<P, Laplace>) {
            return std::exp(-std::sqrt(z));
          } else {
            double sum = 0.0;
            for (const auto& a : p.atoms) sum += a.weight * std::exp(-a.rate * z);
            return sum;
          }
        },
        profile_);
  }

  /// Total mass of the mixing measure, equal to phi(0).
  double total_mass() const { return phi(0.0); }

  /// Canonical text form, accepted back by parse().
  std::string describe() const {
    return std::visit(
        [](const auto& p) -> std::string {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, Gaussian>) {
            return "gaussian";
          } else if constexpr (std::is_same_v<P, Laplace>) {
            return "laplace";
          } else {
            std::string out = "mix:";
            char buf[64];
            for (std::size_t i = 0; i < p.atoms.size(); ++i) {
              if (i) out += ',';
              std::snprintf(buf, sizeof buf, "%.17g:%.17g", p.atoms[i].rate,
                            p.atoms[i].weight);
              out += buf;
            }
            return out;
          }
        },
        profile_);
  }

 private:
  explicit RadialXKernel(Profile profile) : profile_(std::move(profile)) {}

  Profile profile_;
};

/// Kernel on a scalar response, either phi(y y') or phi(|y - y'|).
class ResponseKernel {
 public:
  enum class Form { product, distance };
  enum class Profile {
    identity,           // phi(t) = t, product form
    exp_product,        // phi(t) = exp(t), product form
    gaussian_distance,  // phi(d) = exp(-d^2), distance form
    laplace_distance,   // phi(d) = exp(-d), distance form
  };

  explicit ResponseKernel(Profile profile) : profile_(profile) {}

  static ResponseKernel parse(std::string_view text) {
    if (text == "product-identity") return ResponseKernel(Profile::identity);
    if (text == "product-exp") return ResponseKernel(Profile::exp_product);
    if (text == "dist-gaussian") return ResponseKernel(Profile::gaussian_distance);
    if (text == "dist-laplace") return ResponseKernel(Profile::laplace_distance);
    throw format_error(
        "unknown y-kernel '" + std::string(text) +
        "' (expected product-identity|product-exp|dist-gaussian|dist-laplace)");
  }

  Profile profile() const noexcept { return profile_; }

  Form form() const noexcept {
    switch (profile_) {
      case Profile::identity:
      case Profile::exp_product:
        return Form::product;
      default:
        return Form::distance;
    }
  }

  double phi(double t) const {
    switch (profile_) {
      case Profile::identity:
        return t;
      case Profile::exp_product:
        return std::exp(t);
      case Profile::gaussian_distance:
        return std::exp(-t * t);
      case Profile::laplace_distance:
        return std::exp(-t);
    }
    return 0.0;
  }

  std::string describe() const {
    switch (profile_) {
      case Profile::identity:
        return "product-identity";
      case Profile::exp_product:
        return "product-exp";
      case Profile::gaussian_distance:
        return "dist-gaussian";
      case Profile::laplace_distance:
        return "dist-laplace";
    }
    return {};
  }

 private:
  Profile profile_;
};

/// phi_X(|x - x'|^2). Zero-length vectors give phi_X(0).
inline double eval_x_kernel(const RadialXKernel& kernel, std::span<const double> x,
                            std::span<const double> x_prime) {
  if (x.size() != x_prime.size()) {
    throw dimension_error("eval_x_kernel: vectors of length " +
                          std::to_string(x.size()) + " and " +
                          std::to_string(x_prime.size()));
  }
  double dist2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - x_prime[i];
    dist2 += d * d;
  }
  return kernel.phi(dist2);
}

inline double eval_y_kernel(const ResponseKernel& kernel, double y, double y_prime) {
  if (kernel.form() == ResponseKernel::Form::product) return kernel.phi(y * y_prime);
  return kernel.phi(std::abs(y - y_prime));
}

/// Normalised Laplace transform of the mixing measure,
/// (1/|mu|) * integral of exp(-z t) mu(dt), which equals phi_X(z) / phi_X(0).
inline double schoenberg_ratio(const RadialXKernel& kernel, double z) {
  if (!(z >= 0.0)) throw domain_error("schoenberg_ratio: z must be >= 0");
  return kernel.phi(z) / kernel.phi(0.0);
}

}  // namespace hsic_lab
