// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "infofair/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <fstream>
#include <optional>

#include "infofair/commands.hpp"
#include "infofair/error.hpp"
#include "infofair/samples.hpp"
#include "infofair/service.hpp"
#include "infofair/suites.hpp"

namespace infofair {
namespace {

std::string opt(const Json& j, const char* fmt_spec = "{:.6g}") {
  if (j.is_null()) return "-";
  if (j.is_number()) return fmt::format(fmt::runtime(fmt_spec), j.get<double>());
  return j.dump();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("io", fmt::format("cannot write \"{}\"", path));
  f << text;
  if (!f) throw Error("io", fmt::format("write to \"{}\" failed", path));
}

void print_audit(const Json& j, std::ostream& out) {
  out << fmt::format("predictor {}\n", j.at("predictor").get<std::string>());
  out << fmt::format("{:<6}{:>10}{:>14}{:>12}{:>12}{:>12}\n", "scope", "levels", "max dev",
                     "I", "I_ent", "L vs p*");
  for (const auto& row : j.at("scopes")) {
    const Json& info = row.at("information");
    const bool has = !info.is_null();
    out << fmt::format("{:<6}{:>10}{:>14.3g}{:>12}{:>12}{:>12}\n",
                       row.at("scope").get<std::string>(),
                       row.at("calibration").at("per_level").size(),
                       row.at("calibration").at("max_deviation").get<double>(),
                       has ? opt(info.at("content")) : "-",
                       has ? opt(info.at("entropic_content")) : "-",
                       has ? opt(info.at("loss_vs").at("loss")) : "-");
  }
}

void print_optimize(const Json& j, std::ostream& out) {
  out << fmt::format("status {}\n", j.at("status").get<std::string>());
  if (j.at("status") != "optimal") {
    for (const auto& d : j.at("diagnostics")) {
      out << fmt::format("  {}\n", d.at("message").get<std::string>());
    }
    return;
  }
  out << fmt::format("OPT {:.10g}   disparity {:.6g}\n", j.at("value").get<double>(),
                     j.at("disparity").get<double>());
  const Json& stats = j.at("stats");
  out << fmt::format("{:<6}{:>10}{:>10}{:>10}{:>10}{:>10}\n", "group", "beta", "TPR", "FPR",
                     "PPV", "Imp");
  for (const auto& [name, g] : stats.at("groups").items()) {
    out << fmt::format("{:<6}{:>10}{:>10}{:>10}{:>10}{:>10}\n", name,
                       opt(g.at("beta")), opt(g.at("tpr")), opt(g.at("fpr")), opt(g.at("ppv")),
                       opt(g.at("impact")));
  }
  out << fmt::format("U {:.6g}\n", stats.at("utility").get<double>());
  if (j.contains("cost_of_fairness")) {
    out << fmt::format("cost of fairness {}\n", opt(j.at("cost_of_fairness").at("cost")));
  }
}

Json suite_json(const SuiteOutcome& s) {
  Json j = {{"suite", s.suite},
            {"seeds", s.seeds},
            {"checks", s.checks},
            {"failures", s.failures},
            {"worst_slack", s.worst_slack},
            {"passed", s.passed()},
            {"messages", s.messages}};
  if (s.suite == "samples") {
    j["success_rate"] = s.success_rate;
    j["required_rate"] = s.required_rate;
  }
  return j;
}

void emit(const Json& j, bool pretty, std::ostream& out) {
  out << (pretty ? j.dump(2) : j.dump()) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information-theoretic fairness audits and fairness-constrained thresholds"};
  app.name(args.empty() ? "infofair" : args[0]);
  app.require_subcommand(1);
  app.fallthrough();  // lets --pretty follow the subcommand
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Human-readable tables instead of JSON");

  std::string pop_path;
  std::string predictor;
  std::string group = "all";

  auto* audit = app.add_subcommand("audit", "Calibration and information reports");
  audit->add_option("pop", pop_path, "Population file")->required();
  audit->add_option("--predictor", predictor)->required();
  audit->add_option("--group", group, "A, B or all");

  std::string z_name;
  std::string q_name;
  bool per_group = false;
  std::string out_path;
  std::string samples_path;
  double alpha = 0.1;
  double delta = 0.05;
  std::string merge_name;
  auto* merge = app.add_subcommand("merge", "Merge two calibrated predictors");
  merge->add_option("pop", pop_path)->required();
  merge->add_option("--z", z_name)->required();
  merge->add_option("--q", q_name)->required();
  merge->add_flag("--per-group", per_group);
  merge->add_option("--out", out_path, "Write the population file with the merged predictor");
  merge->add_option("--name", merge_name, "Name of the merged predictor");
  auto* samples_opt = merge->add_option("--samples", samples_path, "cell_id,y records");
  merge->add_option("--alpha", alpha)->needs(samples_opt);
  merge->add_option("--delta", delta)->needs(samples_opt);

  std::string objective = "utility";
  std::string h = "beta";
  OptimizationSpec spec;
  auto* optimize = app.add_subcommand("optimize", "Solve a fairness-constrained program");
  optimize->set_help_flag("--help", "Print this help message and exit");
  optimize->add_option("pop", pop_path)->required();
  optimize->add_option("--predictor", predictor)->required();
  optimize->add_option("--objective", objective, "utility|disparity|impact|combo");
  optimize->add_option("--h", h, "beta|tpr|fpr");
  optimize->add_option("--eps", spec.eps);
  optimize->add_option("--t-impact", spec.t_i);
  optimize->add_option("--t-utility", spec.t_u);
  optimize->add_option("--tau-u", spec.impact_params.tau_u);
  optimize->add_option("--tau-l", spec.impact_params.tau_l);
  optimize->add_flag("--risk-averse", spec.impact_params.risk_averse);
  optimize->add_option("--lambda-u", spec.lambda_u);
  optimize->add_option("--lambda-i", spec.lambda_i);
  optimize->add_option("--lambda-b", spec.lambda_beta);

  std::string sweep_group;
  std::size_t points = kDefaultCurvePoints;
  auto* sweep = app.add_subcommand("sweep", "Rate curves as CSV");
  sweep->add_option("pop", pop_path)->required();
  sweep->add_option("--predictor", predictor)->required();
  sweep->add_option("--group", sweep_group)->required()->check(CLI::IsMember({"A", "B"}));
  sweep->add_option("--points", points)->check(CLI::Range(2, 1000000));

  std::string suite;
  std::size_t seeds = 100;
  std::uint64_t first_seed = 1;
  auto* verify = app.add_subcommand("verify", "Run a seeded property suite");
  verify->add_option("--suite", suite)->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--seeds", seeds)->check(CLI::Range(1, 1000000));
  verify->add_option("--first-seed", first_seed);

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "Emit the constructed instances");
  demo->add_option("--name", demo_name)->check(CLI::IsMember(constructed_instance_names()));
  demo->add_option("--out", out_path);

  ServeOptions serve_options;
  auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP service");
  serve_cmd->add_option("--port", serve_options.port)->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", serve_options.host);
  serve_cmd->add_option("--cors-origin", serve_options.cors_origin);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*audit) {
      const auto file = load_population_file(pop_path);
      const Json j = audit_json(file, predictor, parse_scopes(group));
      if (pretty) {
        print_audit(j, out);
      } else {
        emit(j, false, out);
      }
      return kExitOk;
    }
    if (*merge) {
      auto file = load_population_file(pop_path);
      const Predictor& z = file.predictor(z_name);
      const Predictor& q = file.predictor(q_name);
      const Partition part = per_group ? Partition::PerGroup : Partition::Whole;
      const std::string name = merge_name.empty() ? default_merge_name(z, q) : merge_name;
      if (file.has_predictor(name)) {
        throw Error("duplicate-id", fmt::format("population already has a predictor \"{}\"", name));
      }
      MergeReport report = [&] {
        if (samples_path.empty()) return merge_oracle(file.population, z, q, part, name);
        std::ifstream in(samples_path);
        if (!in) throw Error("io", fmt::format("cannot read \"{}\"", samples_path));
        const auto samples = load_samples(file.population, in);
        // gamma is taken from the masses, which sample mode may read
        const double gamma = min_crossed_density(file.population, z, q, part);
        const auto budget = SampleBudget::from_bound(alpha, gamma, delta);
        return merge_from_samples(file.population, z, q, samples, budget, part, name);
      }();
      const Json j = to_json(file.population, report);
      if (!out_path.empty()) {
        file.predictors.push_back(report.result);
        write_file(out_path, serialize_population(file));
      }
      emit(j, pretty, out);
      return kExitOk;
    }
    if (*optimize) {
      const auto file = load_population_file(pop_path);
      spec.objective = parse_objective(objective);
      spec.fairness_metric = parse_fairness_metric(h);
      spec.validate();
      OptimizationResult result;
      const Json j = optimize_json(file, predictor, spec, &result);
      if (pretty) {
        print_optimize(j, out);
      } else {
        emit(j, false, out);
      }
      return result.status == LpStatus::Optimal ? kExitOk : kExitInfeasible;
    }
    if (*sweep) {
      const auto file = load_population_file(pop_path);
      const auto profile = score_profile(file.population, file.predictor(predictor));
      const Group g = parse_group(sweep_group);
      if (!profile.has(g)) {
        throw Error("empty-scope", fmt::format("group {} has no cells", sweep_group));
      }
      const auto rows = sweep_curves(profile.group(g), curve_grid(profile.group(g), points));
      out << curves_csv(rows);
      return kExitOk;
    }
    if (*verify) {
      const auto outcome = run_suite(suite, seeds, first_seed);
      if (pretty) {
        out << fmt::format("{}: {} seeds, {} checks, {} failures, worst slack {:.3g}{}\n",
                           outcome.suite, outcome.seeds, outcome.checks, outcome.failures,
                           outcome.worst_slack, outcome.passed() ? "" : "  FAILED");
        for (const auto& m : outcome.messages) out << "  " << m << '\n';
      } else {
        emit(suite_json(outcome), false, out);
      }
      return outcome.passed() ? kExitOk : kExitViolation;
    }
    if (*demo) {
      std::string text;
      if (!demo_name.empty()) {
        text = serialize_population(instance_file(constructed_instance(demo_name)));
      } else {
        Json all = Json::object();
        for (const auto& name : constructed_instance_names()) {
          all[name] = Json::parse(serialize_population(instance_file(constructed_instance(name))));
        }
        text = all.dump(2) + "\n";
      }
      if (out_path.empty()) {
        out << text;
      } else {
        write_file(out_path, text);
      }
      return kExitOk;
    }
    if (*serve_cmd) {
      Service service;
      if (!serve(service, serve_options, err)) {
        err << fmt::format("cannot bind {}:{}\n", serve_options.host, serve_options.port);
        return kExitUsage;
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << Json({{"error", e.code()}, {"message", e.what()}}).dump() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace infofair
