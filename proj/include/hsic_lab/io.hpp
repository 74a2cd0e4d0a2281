#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsic_lab/distribution.hpp"
#include "hsic_lab/errors.hpp"
#include "hsic_lab/hsic.hpp"
#include "hsic_lab/kernel.hpp"
#include "hsic_lab/selector.hpp"
#include "hsic_lab/verifier.hpp"

namespace hsic_lab::io {

using json = nlohmann::ordered_json;

// Doubles are written by nlohmann's shortest round-trip formatter, so every
// value read back is bitwise identical to the one written.

inline json to_json(const FiniteJointDistribution& dist) {
  json atoms = json::array();
  for (const auto& a : dist.atoms()) atoms.push_back({{"x", a.x}, {"y", a.y}, {"prob", a.prob}});
  return {{"p", dist.p()}, {"atoms", std::move(atoms)}};
}

inline FiniteJointDistribution distribution_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("p") || !j.contains("atoms")) {
      throw format_error("distribution JSON needs \"p\" and \"atoms\"");
    }
    if (!j.at("p").is_number_integer()) throw format_error("\"p\" must be an integer");
    const int p = j.at("p").get<int>();
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) {
      if (!a.at("x").is_array() || !a.at("y").is_number() || !a.at("prob").is_number()) {
        throw format_error("atom needs numeric array \"x\" and numbers \"y\", \"prob\"");
      }
      atoms.push_back(Atom{a.at("x").get<std::vector<double>>(), a.at("y").get<double>(),
                           a.at("prob").get<double>()});
    }
    return FiniteJointDistribution(p, std::move(atoms));
  } catch (const json::exception& e) {
    throw format_error(std::string("malformed distribution JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw file_error("cannot open '" + path + "': file not found or unreadable");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw file_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw file_error("write to '" + path + "' failed");
}

inline FiniteJointDistribution read_distribution(const std::string& path) {
  const auto text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw format_error("'" + path + "' is not valid JSON: " + e.what());
  }
  return distribution_from_json(j);
}

inline json to_json(const FeatureSubset& s) { return s.indices(); }

inline json to_json(const SelectionResult& r) {
  json audit = json::array();
  for (const auto& e : r.audit) {
    json item = {{"subset", to_json(e.subset)}};
    if (!e.weights.empty()) item["weights"] = e.weights;
    item["value"] = e.value;
    audit.push_back(std::move(item));
  }
  json out = {{"subset", to_json(r.subset)}};
  if (r.weights) out["weights"] = r.weights->beta;
  out["hsic"] = r.attained.value;
  out["kernel_x"] = r.attained.kernel_x;
  out["kernel_y"] = r.attained.kernel_y;
  out["audit"] = std::move(audit);
  return out;
}

/// JSON has no infinity; q = inf is written as the string "inf".
inline json number_or_inf(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

inline json to_json(const CheckOutcome& o) {
  json w = json::object();
  for (const auto& x : o.witnesses) w[x.name] = number_or_inf(x.value);
  return {{"name", o.name},
          {"status", o.pass ? "pass" : "fail"},
          {"expected_fail", o.expected_fail},
          {"witnesses", std::move(w)},
          {"tolerance", o.tolerance},
          {"paper_anchor", o.paper_anchor}};
}

inline json to_json(const VerifyConfig& c) {
  json kx = json::array(), ky = json::array(), deltas = json::array(), norms = json::array();
  for (const auto& k : c.kernels_x) kx.push_back(k.describe());
  for (const auto& k : c.kernels_y) ky.push_back(k.describe());
  for (auto [d1, d2] : c.delta_grid) deltas.push_back({d1, d2});
  for (const auto& n : c.norms) norms.push_back({{"q", number_or_inf(n.q)}, {"r", n.r}});
  return {{"kernels_x", std::move(kx)},
          {"kernels_y", std::move(ky)},
          {"delta_grid", std::move(deltas)},
          {"beta_grid", c.beta_grid},
          {"norms", std::move(norms)},
          {"margin", c.margin},
          {"identity_tolerance", c.identity_tolerance},
          {"grid_points", c.grid_points},
          {"refine_iterations", c.refine_iterations},
          {"seed", c.seed},
          {"random_cases", c.random_cases},
          {"negative_controls", c.negative_controls}};
}

inline json to_json(const VerificationReport& r) {
  json outcomes = json::array();
  for (const auto& o : r.outcomes) outcomes.push_back(to_json(o));
  return {{"outcomes", std::move(outcomes)},
          {"config", to_json(r.config)},
          {"notes", r.notes},
          {"all_as_expected", r.ok()}};
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV of (beta1, beta2, L, hsic) over a grid x grid lattice on
/// [0, beta_max]^2, beta1 outer and beta2 inner. The hsic column is the exact
/// HSIC on the counterexample law with response kernel `ky`.
inline std::string emit_surface(const DeltaParams& params, const RadialXKernel& kx, int grid,
                                const ResponseKernel& ky = ResponseKernel(ResponseKernel::Profile::identity),
                                double beta_max = 1.0) {
  if (grid < 2) throw domain_error("surface grid must be >= 2");
  if (!(beta_max > 0.0) || !std::isfinite(beta_max)) throw domain_error("beta_max must be positive");
  const auto dist = build_counterexample(params);
  std::string out = "beta1,beta2,L,hsic\n";
  std::vector<double> axis(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    axis[static_cast<std::size_t>(i)] =
        i == grid - 1 ? beta_max : beta_max * static_cast<double>(i) / static_cast<double>(grid - 1);
  }
  std::vector<double> w(static_cast<std::size_t>(params.p), 0.0);
  for (double b1 : axis) {
    for (double b2 : axis) {
      w[0] = b1;
      w[1] = b2;
      out += format_double(b1) + ',' + format_double(b2) + ',' +
             format_double(closed_form_L(params, {b1, b2}, kx)) + ',' +
             format_double(exact_hsic_weighted(dist, kx, ky, WeightVector(w)).value) + '\n';
    }
  }
  return out;
}

}  // namespace hsic_lab::io
