// command line front end: check | bundle | bootstrap | quantum | measure | lp-dump

#include "ctxkit/analysis.hpp"
#include "ctxkit/dot.hpp"
#include "ctxkit/model_io.hpp"
#include "ctxkit/quantum.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <limits>
#include <string>

namespace {

struct CapSettings {
  std::uint64_t atoms = ctxkit::sheaf::default_product_cap;
  bool user_set = false;

  std::uint64_t product_cap() const { return atoms; }
  // The coupling LP's column count is 2^variables; translate an atom budget
  // into the largest variable count whose atom count fits it.
  std::size_t cbd_variable_cap() const {
    if (!user_set) return ctxkit::cbd::default_variable_cap;
    std::size_t vars = 0;
    while (vars < 31 && (std::uint64_t{1} << (vars + 1)) <= atoms) ++vars;
    return vars;
  }
};

std::vector<std::uint64_t> parse_sizes(const std::string& text) {
  std::vector<std::uint64_t> sizes;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string part =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw CLI::ValidationError("--sizes", "expected a comma-separated list of counts");
    }
    sizes.push_back(std::stoull(part));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return sizes;
}

int run_check(const std::string& path, bool as_json, const CapSettings& caps) {
  ctxkit::AnalysisOptions options;
  options.product_cap = caps.product_cap();
  options.cbd_variable_cap = caps.cbd_variable_cap();

  const ctxkit::EmpiricalModel model = ctxkit::load_model(path);
  const ctxkit::AnalysisReport report = ctxkit::analyze(model, options);
  std::cout << (as_json ? ctxkit::report_to_json(report) : ctxkit::report_to_text(report));
  if (!report.validation.ok()) return 1;
  return report.hit_resource_cap ? 2 : 0;
}

int run_bundle(const std::string& path, const CapSettings& caps) {
  const ctxkit::EmpiricalModel model = ctxkit::load_model(path);
  const ctxkit::BundleDiagram diagram = ctxkit::bundle_dot(model, caps.product_cap());
  if (diagram.marks_omitted) {
    std::cerr << "note: model is signalling at the support level; "
                 "extendability marks omitted\n";
  }
  std::cout << diagram.dot;
  return 0;
}

int run_bootstrap(const std::string& path, std::uint64_t resamples, std::uint64_t seed,
                  const std::string& sizes_text) {
  const ctxkit::EmpiricalModel model = ctxkit::load_model(path);
  ctxkit::bootstrap::SampleSizePlan plan;
  if (sizes_text.empty()) {
    plan = ctxkit::bootstrap::infer_sample_sizes(model);
  } else {
    plan.sizes = parse_sizes(sizes_text);
    plan.provenance = ctxkit::bootstrap::SampleSizePlan::Provenance::user_supplied;
  }
  const auto result = ctxkit::bootstrap::bootstrap_noncontextuality(model, plan, resamples, seed);
  std::cout << ctxkit::bootstrap_to_json(result, plan);
  return 0;
}

int run_quantum(const std::string& path) {
  const ctxkit::quantum::QuantumScenario scenario = ctxkit::quantum::load_scenario(path);
  const ctxkit::EmpiricalModel model = ctxkit::quantum::born_model(scenario);
  std::cout << ctxkit::model_to_json(model);
  return 0;
}

int run_measure(const std::string& path, bool as_json) {
  const ctxkit::EmpiricalModel model = ctxkit::load_model(path);
  const ctxkit::cbd::Cyclic2Report report = ctxkit::cbd::cyclic2_analyze(model);
  std::cout << (as_json ? ctxkit::cyclic2_to_json(report) : ctxkit::cyclic2_to_text(report));
  return 0;
}

int run_lp_dump(const std::string& path, const std::string& kind, const CapSettings& caps) {
  const ctxkit::EmpiricalModel model = ctxkit::load_model(path);
  ctxkit::lp::LinearFeasibilityProblem problem;
  if (kind == "section") {
    problem = ctxkit::sheaf::build_global_section_lp(model, caps.product_cap());
  } else {
    const auto reduced = ctxkit::cbd::reduce_effective_outcomes(model);
    const auto system = ctxkit::cbd::dichotomize(reduced);
    problem = ctxkit::cbd::build_cbd_lp(system, caps.cbd_variable_cap());
  }
  ctxkit::lp::dump_problem(problem, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact analysis of context-indexed measurement data"};
  app.require_subcommand(1);

  std::string path;
  bool as_json = false;
  CapSettings caps;
  std::uint64_t resamples = 0;
  std::uint64_t seed = 0;
  std::string sizes_text;
  std::string lp_kind = "cbd";

  auto add_cap = [&](CLI::App* cmd) {
    cmd->add_option_function<std::uint64_t>(
           "--cap",
           [&caps](const std::uint64_t& value) {
             caps.atoms = value;
             caps.user_set = true;
           },
           "largest atom count the exhaustive stages may enumerate")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* check = app.add_subcommand("check", "full analysis pipeline for a model file");
  check->add_option("model", path, "model JSON file")->required();
  check->add_flag("--json", as_json, "emit the report as JSON");
  add_cap(check);

  CLI::App* bundle = app.add_subcommand("bundle", "bundle diagram (Graphviz) for a model file");
  bundle->add_option("model", path, "model JSON file")->required();
  add_cap(bundle);

  CLI::App* boot = app.add_subcommand("bootstrap", "resampling stability of the closed-form verdict");
  boot->add_option("model", path, "model JSON file")->required();
  boot->add_option("--resamples", resamples, "number of resamples")
      ->required()
      ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
  boot->add_option("--seed", seed, "random seed (default 0)");
  boot->add_option("--sizes", sizes_text,
                   "per-context sample sizes, comma separated (default: inferred "
                   "from the table denominators)");

  CLI::App* quantum = app.add_subcommand("quantum", "empirical model of a quantum scenario file");
  quantum->add_option("scenario", path, "scenario JSON file")->required();

  CLI::App* measure = app.add_subcommand("measure", "closed-form contextuality measure");
  measure->add_option("model", path, "model JSON file")->required();
  measure->add_flag("--json", as_json, "emit the result as JSON");

  CLI::App* lp_dump = app.add_subcommand("lp-dump", "print a stage's linear program");
  lp_dump->add_option("model", path, "model JSON file")->required();
  lp_dump->add_option("--kind", lp_kind, "which program: cbd (default) or section")
      ->check(CLI::IsMember({"cbd", "section"}));
  add_cap(lp_dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // keep the exit-code contract: any usage error is 1
  }

  try {
    if (*check) return run_check(path, as_json, caps);
    if (*bundle) return run_bundle(path, caps);
    if (*boot) return run_bootstrap(path, resamples, seed, sizes_text);
    if (*quantum) return run_quantum(path);
    if (*measure) return run_measure(path, as_json);
    if (*lp_dump) return run_lp_dump(path, lp_kind, caps);
  } catch (const ctxkit::SizeCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ctxkit::ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
