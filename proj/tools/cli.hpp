#pragma once

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hsic_lab/hsic_lab.hpp"

namespace hsic_lab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::uint64_t kDefaultSeed = 42;

/// HSIC_LAB_SEED if set and numeric, otherwise 42.
inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("HSIC_LAB_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw format_error(std::string("HSIC_LAB_SEED is not an unsigned integer: '") + env + "'");
  }
  return kDefaultSeed;
}

inline double parse_q(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInfinity;
  const double q = detail::parse_double(text);
  if (!(q >= 1.0)) throw domain_error("q must be >= 1 or 'inf'");
  return q;
}

/// Splits a comma list of x-kernels. Mixture specs contain commas themselves,
/// so pieces that do not start a new kernel name are glued to the previous one.
inline std::vector<RadialXKernel> parse_x_kernel_list(const std::string& text) {
  std::vector<std::string> specs;
  for (auto piece : detail::split(text, ',')) {
    const bool starts_new = piece == "gaussian" || piece == "laplace" || piece.substr(0, 4) == "mix:";
    if (starts_new || specs.empty()) {
      specs.emplace_back(piece);
    } else {
      specs.back() += ',';
      specs.back() += piece;
    }
  }
  std::vector<RadialXKernel> out;
  for (const auto& s : specs) out.push_back(RadialXKernel::parse(s));
  return out;
}

inline std::vector<ResponseKernel> parse_y_kernel_list(const std::string& text) {
  std::vector<ResponseKernel> out;
  for (auto piece : detail::split(text, ',')) out.push_back(ResponseKernel::parse(piece));
  return out;
}

inline std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (auto piece : detail::split(text, ',')) out.push_back(detail::parse_double(piece));
  return out;
}

inline FeatureSubset parse_subset(const std::string& text, int p) {
  std::vector<int> idx;
  if (!text.empty() && text != "{}" && text != "none") {
    for (double v : parse_number_list(text)) {
      if (v != std::floor(v)) throw format_error("subset indices must be integers");
      idx.push_back(static_cast<int>(v));
    }
  }
  return FeatureSubset(std::move(idx), p);
}

namespace detail_cli {

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    io::write_file(out_path, text);
  }
}

inline std::string dump(const io::json& j) { return j.dump(2) + "\n"; }

}  // namespace detail_cli

/// Parses argv and dispatches to the library. Returns 0 on success, 1 when a
/// check ran and failed, 2 on usage or input errors.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and empirical HSIC, HSIC-maximizing feature selection, and a "
               "numerical verifier for its failure modes"};
  app.require_subcommand(1);

  std::string kernel_x = "gaussian", kernel_y = "product-identity", out_path, dist_path;
  double delta1 = 0.9, delta2 = 0.1;
  int p = 2;

  // dist make-counterexample
  auto* dist_cmd = app.add_subcommand("dist", "Distribution construction");
  dist_cmd->require_subcommand(1);
  auto* make_cx = dist_cmd->add_subcommand("make-counterexample", "Write the eight-atom counterexample law");
  make_cx->add_option("--delta1", delta1, "Signal of feature 1")->required();
  make_cx->add_option("--delta2", delta2, "Signal of feature 2 (<= delta1)")->required();
  make_cx->add_option("--p", p, "Dimension, zero-padded beyond 2")->capture_default_str();
  make_cx->add_option("--out", out_path, "Output JSON file (stdout if omitted)");

  // hsic exact|empirical
  std::string subset_text, weights_text;
  std::size_t n = 100000;
  std::optional<std::uint64_t> seed;
  auto* hsic_cmd = app.add_subcommand("hsic", "Evaluate HSIC");
  hsic_cmd->require_subcommand(1);
  auto* exact_cmd = hsic_cmd->add_subcommand("exact", "Exact population HSIC");
  auto* emp_cmd = hsic_cmd->add_subcommand("empirical", "Plug-in estimate from a seeded sample");
  for (auto* c : {exact_cmd, emp_cmd}) {
    c->add_option("--dist", dist_path, "Distribution JSON")->required();
    c->add_option("--kernel-x", kernel_x, "gaussian|laplace|mix:t1:w1,...")->capture_default_str();
    c->add_option("--kernel-y", kernel_y, "product-identity|product-exp|dist-gaussian|dist-laplace")
        ->capture_default_str();
    auto* s = c->add_option("--subset", subset_text, "1-based feature indices, e.g. 1,2");
    auto* w = c->add_option("--weights", weights_text, "Weights, e.g. 1.0,0.5");
    s->excludes(w);
    c->add_option("--out", out_path, "Output JSON file (stdout if omitted)");
  }
  emp_cmd->add_option("--n", n, "Sample size")->capture_default_str();
  emp_cmd->add_option("--seed", seed, "Sampling seed (default HSIC_LAB_SEED or 42)");

  // select subset|continuous
  std::string q_text = "inf";
  double r = 1.0, support_tol = 1e-9;
  int grid = 513, refine = 3;
  auto* select_cmd = app.add_subcommand("select", "HSIC-maximizing feature selection");
  select_cmd->require_subcommand(1);
  auto* sel_subset = select_cmd->add_subcommand("subset", "Exhaustive subset argmax");
  auto* sel_cont = select_cmd->add_subcommand("continuous", "Weight argmax over an l_q ball");
  for (auto* c : {sel_subset, sel_cont}) {
    c->add_option("--dist", dist_path, "Distribution JSON")->required();
    c->add_option("--kernel-x", kernel_x)->capture_default_str();
    c->add_option("--kernel-y", kernel_y)->capture_default_str();
    c->add_option("--out", out_path, "Output JSON file (stdout if omitted)");
  }
  sel_cont->add_option("--q", q_text, "Norm order, number >= 1 or inf")->capture_default_str();
  sel_cont->add_option("--r", r, "Radius")->capture_default_str();
  sel_cont->add_option("--grid", grid, "Grid points per axis")->capture_default_str();
  sel_cont->add_option("--refine", refine, "Golden-section refinement rounds")->capture_default_str();
  sel_cont->add_option("--support-tol", support_tol, "Zero threshold for weights")->capture_default_str();

  // condition check
  double beta1 = 1.0;
  auto* cond_cmd = app.add_subcommand("condition", "Elimination condition");
  cond_cmd->require_subcommand(1);
  auto* cond_check = cond_cmd->add_subcommand("check", "Evaluate both sides of the condition");
  cond_check->add_option("--beta1", beta1, "Dominant weight")->required();
  cond_check->add_option("--delta1", delta1)->required();
  cond_check->add_option("--delta2", delta2)->required();
  cond_check->add_option("--kernel-x", kernel_x)->capture_default_str();

  // verify all|theorem1|theorem2|lemmas
  std::string kx_list = "gaussian,laplace", ky_list = "product-identity,dist-gaussian";
  std::optional<double> forced_d1, forced_d2;
  double margin = 1e-6;
  auto* verify_cmd = app.add_subcommand("verify", "Numerical certificates");
  verify_cmd->require_subcommand(1);
  auto* v_all = verify_cmd->add_subcommand("all", "Run every check and write a report");
  auto* v_t1 = verify_cmd->add_subcommand("theorem1", "Subset-selection counterexample");
  auto* v_t2 = verify_cmd->add_subcommand("theorem2", "Weight-selection counterexample");
  auto* v_lem = verify_cmd->add_subcommand("lemmas", "Structural checks on the counterexample family");
  for (auto* c : {v_all, v_t1, v_t2, v_lem}) {
    c->add_option("--kernel-x", kx_list, "Comma list of x-kernels")->capture_default_str();
    c->add_option("--kernel-y", ky_list, "Comma list of y-kernels")->capture_default_str();
    c->add_option("--out", out_path, "Output JSON file (stdout if omitted)");
  }
  for (auto* c : {v_all, v_lem}) {
    c->add_option("--margin", margin, "Margin for strict inequalities")->capture_default_str();
  }
  v_all->add_option("--seed", seed, "Seed for randomized checks (default HSIC_LAB_SEED or 42)");
  v_t1->add_option("--delta1", forced_d1, "Force delta1 instead of choosing it");
  v_t1->add_option("--delta2", forced_d2, "Force delta2 instead of choosing it");
  for (auto* c : {v_all, v_t2}) {
    c->add_option("--grid", grid, "Grid points per axis")->capture_default_str();
    c->add_option("--refine", refine, "Refinement rounds")->capture_default_str();
  }
  v_t2->add_option("--q", q_text)->capture_default_str();
  v_t2->add_option("--r", r)->capture_default_str();

  // surface
  double beta_max = 1.0;
  int surface_grid = 101;
  auto* surface_cmd = app.add_subcommand("surface", "CSV of L and exact HSIC over a beta grid");
  surface_cmd->add_option("--delta1", delta1)->required();
  surface_cmd->add_option("--delta2", delta2)->required();
  surface_cmd->add_option("--kernel-x", kernel_x)->capture_default_str();
  surface_cmd->add_option("--kernel-y", kernel_y)->capture_default_str();
  surface_cmd->add_option("--grid", surface_grid, "Points per axis")->capture_default_str();
  surface_cmd->add_option("--beta-max", beta_max, "Upper end of each axis")->capture_default_str();
  surface_cmd->add_option("--out", out_path, "Output CSV file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    using detail_cli::dump;
    using detail_cli::emit;

    if (*make_cx) {
      const auto dist = build_counterexample(DeltaParams(delta1, delta2, p));
      emit(dump(io::to_json(dist)), out_path, out);
      return kExitOk;
    }

    if (*exact_cmd || *emp_cmd) {
      const auto dist = io::read_distribution(dist_path);
      const auto kx = RadialXKernel::parse(kernel_x);
      const auto ky = ResponseKernel::parse(kernel_y);
      io::json result;
      WeightVector w;
      if (!weights_text.empty()) {
        w = WeightVector(parse_number_list(weights_text));
        result["weights"] = w.beta;
      } else {
        const auto s = subset_text.empty() ? FeatureSubset::all(dist.p())
                                           : parse_subset(subset_text, dist.p());
        w = WeightVector(s.indicator(dist.p()));
        result["subset"] = io::to_json(s);
      }
      if (w.size() != static_cast<std::size_t>(dist.p())) {
        throw dimension_error("--weights needs " + std::to_string(dist.p()) + " entries");
      }
      if (*exact_cmd) {
        result["hsic"] = exact_hsic_weighted(dist, kx, ky, w).value;
        result["method"] = "exact";
      } else {
        const auto s = seed ? *seed : default_seed();
        result["hsic"] = empirical_hsic(sample(dist, n, s), kx, ky, w);
        result["method"] = "empirical";
        result["n"] = n;
        result["seed"] = s;
      }
      result["kernel_x"] = kx.describe();
      result["kernel_y"] = ky.describe();
      emit(dump(result), out_path, out);
      return kExitOk;
    }

    if (*sel_subset || *sel_cont) {
      const auto dist = io::read_distribution(dist_path);
      const auto kx = RadialXKernel::parse(kernel_x);
      const auto ky = ResponseKernel::parse(kernel_y);
      io::json result;
      if (*sel_subset) {
        result = io::to_json(select_subset(dist, kx, ky));
        result["mode"] = "subset";
      } else {
        ContinuousSearchConfig cfg;
        cfg.q = parse_q(q_text);
        cfg.r = r;
        cfg.grid_points_per_axis = grid;
        cfg.refine_iterations = refine;
        cfg.support_tolerance = support_tol;
        result = io::to_json(select_continuous(dist, kx, ky, cfg));
        result["mode"] = "continuous";
        result["q"] = io::number_or_inf(cfg.q);
        result["r"] = cfg.r;
      }
      emit(dump(result), out_path, out);
      return kExitOk;
    }

    if (*cond_check) {
      const auto kx = RadialXKernel::parse(kernel_x);
      const auto c = check_elimination_condition(kx, beta1, DeltaParams(delta1, delta2));
      io::json result = {{"holds", c.holds},
                         {"lhs", c.lhs},
                         {"rhs", c.rhs},
                         {"beta1", beta1},
                         {"delta1", delta1},
                         {"delta2", delta2},
                         {"kernel_x", kx.describe()}};
      out << dump(result);
      return c.holds ? kExitOk : kExitCheckFailed;
    }

    if (*v_all) {
      VerifyConfig cfg;
      cfg.kernels_x = parse_x_kernel_list(kx_list);
      cfg.kernels_y = parse_y_kernel_list(ky_list);
      cfg.margin = margin;
      cfg.grid_points = grid;
      cfg.refine_iterations = refine;
      cfg.seed = seed ? *seed : default_seed();
      const auto report = run_all(cfg);
      emit(dump(io::to_json(report)), out_path, out);
      for (const auto& o : report.outcomes) {
        err << (o.pass ? "pass " : "FAIL ") << (o.expected_fail ? "(expected) " : "") << o.name
            << "\n";
      }
      return report.ok() ? kExitOk : kExitCheckFailed;
    }

    if (*v_t1 || *v_t2 || *v_lem) {
      const auto kxs = parse_x_kernel_list(kx_list);
      const auto kys = parse_y_kernel_list(ky_list);
      std::vector<CheckOutcome> outcomes;
      if (*v_t1) {
        if (forced_d1.has_value() != forced_d2.has_value()) {
          throw domain_error("--delta1 and --delta2 must be given together");
        }
        std::optional<DeltaParams> forced;
        if (forced_d1) forced = DeltaParams(*forced_d1, *forced_d2);
        for (const auto& kx : kxs) {
          for (const auto& ky : kys) outcomes.push_back(check_theorem1(kx, ky, forced));
        }
      } else if (*v_t2) {
        const double q = parse_q(q_text);
        for (const auto& kx : kxs) {
          for (const auto& ky : kys) outcomes.push_back(check_theorem2(kx, ky, q, r, grid, refine));
        }
      } else {
        VerifyConfig cfg;
        cfg.kernels_x = kxs;
        cfg.kernels_y = kys;
        cfg.margin = margin;
        for (const auto& kx : kxs) {
          for (auto& o : check_landscape_suite(kx, cfg)) outcomes.push_back(std::move(o));
          for (const auto& ky : kys) {
            for (auto& o : check_lemma_suite(kx, ky, cfg)) outcomes.push_back(std::move(o));
          }
        }
      }
      io::json arr = io::json::array();
      bool ok = true;
      for (const auto& o : outcomes) {
        arr.push_back(io::to_json(o));
        ok = ok && o.as_expected();
      }
      emit(dump(io::json{{"outcomes", std::move(arr)}}), out_path, out);
      return ok ? kExitOk : kExitCheckFailed;
    }

    if (*surface_cmd) {
      const auto kx = RadialXKernel::parse(kernel_x);
      const auto ky = ResponseKernel::parse(kernel_y);
      emit(io::emit_surface(DeltaParams(delta1, delta2), kx, surface_grid, ky, beta_max), out_path,
           out);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hsic_lab::cli
