#pragma once

#include "ctxkit/bootstrap.hpp"
#include "ctxkit/cbd.hpp"
#include "ctxkit/model.hpp"
#include "ctxkit/sheaf.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ctxkit {

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

struct AnalysisOptions {
  std::uint64_t product_cap = sheaf::default_product_cap;
  std::size_t cbd_variable_cap = cbd::default_variable_cap;
  lp::SolveOptions lp_options{};
};

// Everything the full pipeline can say about one model. Stages that do not
// apply (or were skipped to respect a cap) carry a reason instead of a result.
struct AnalysisReport {
  std::string label;
  bool possibilistic = false;

  ValidationReport validation;
  std::optional<sheaf::SignallingReport> signalling;

  std::optional<sheaf::LogicalContextualityReport> logical;
  std::string logical_skip_reason;

  std::optional<cbd::Cyclic2Report> cyclic2;
  std::string cyclic2_skip_reason;

  std::optional<cbd::CbdVerdict> cbd_verdict;
  std::string cbd_skip_reason;

  std::vector<StageTiming> timings;
  bool hit_resource_cap = false;
};

// Runs validation, signalling, sheaf-level contextuality (when the model is
// non-signalling at the support level), the two-context closed form (when
// shaped for it), and the coupling LP. Caps turn stages into skips, never
// into crashes.
AnalysisReport analyze(const EmpiricalModel& model, const AnalysisOptions& options = {});

std::string report_to_text(const AnalysisReport& report);
std::string report_to_json(const AnalysisReport& report);

std::string cyclic2_to_text(const cbd::Cyclic2Report& report);
std::string cyclic2_to_json(const cbd::Cyclic2Report& report);

std::string bootstrap_to_json(const bootstrap::BootstrapResult& result,
                              const bootstrap::SampleSizePlan& plan);

}  // namespace ctxkit
