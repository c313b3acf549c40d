#pragma once

#include "ctxkit/errors.hpp"
#include "ctxkit/lp.hpp"
#include "ctxkit/model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ctxkit::sheaf {

// Guard for product-space enumeration (outcome tuples over all measurements).
inline constexpr std::uint64_t default_product_cap = std::uint64_t{1} << 24;

// One measurement whose marginal distribution differs between two contexts.
struct MarginalViolation {
  std::string measurement;
  int outcome;
  std::size_t context_first;
  std::size_t context_second;
  Rational probability_first;
  Rational probability_second;
};

// One measurement whose per-outcome possibility differs between two contexts.
struct SupportViolation {
  std::string measurement;
  int outcome;
  std::size_t context_first;
  std::size_t context_second;
  bool possible_first;
  bool possible_second;
};

struct SignallingReport {
  std::vector<MarginalViolation> violations;
  std::vector<SupportViolation> possibilistic_violations;
  bool is_signalling = false;                  // any exact marginal mismatch
  bool is_possibilistically_signalling = false;  // any support mismatch
};

// Thrown by analyses whose preconditions exclude signalling models.
struct SignallingModelError : Error {
  SignallingReport report;
  explicit SignallingModelError(SignallingReport r)
      : Error("model is signalling; the requested analysis requires context-independent marginals"),
        report(std::move(r)) {}
};

// Compares every shared measurement's marginals across all context pairs,
// exactly; also compares supports. Deterministic order: measurements in
// scenario order, context pairs ascending, outcomes ascending.
SignallingReport check_signalling(const EmpiricalModel& model);

// The support-level half alone, for purely possibilistic data.
SignallingReport check_support_signalling(const PossibilisticModel& poss);

// All outcome assignments g (one outcome per scenario measurement, scenario
// order) whose restriction to every context lies in that context's support.
// Throws SizeCapError when the full product space exceeds product_cap.
std::vector<OutcomeTuple> global_assignments(const PossibilisticModel& poss,
                                             std::uint64_t product_cap = default_product_cap);

struct NonExtendableSection {
  std::size_t context;
  std::string measurement;
  int outcome;
};

struct NonExtendableSupport {
  std::size_t context;
  OutcomeTuple tuple;  // context order
};

struct LogicalContextualityReport {
  std::vector<OutcomeTuple> consistent_global_assignments;
  // Support tuples with no consistent global extension, and the flattened
  // (context, measurement, outcome) components of those tuples.
  std::vector<NonExtendableSupport> non_extendable_supports;
  std::vector<NonExtendableSection> non_extendable_sections;
  bool is_logically_contextual = false;  // some support tuple does not extend
  bool is_strongly_contextual = false;   // no consistent global assignment at all
};

// Precondition: support-level non-signalling (throws SignallingModelError
// otherwise). Strong contextuality implies logical contextuality.
LogicalContextualityReport check_logical_contextuality(
    const PossibilisticModel& poss, std::uint64_t product_cap = default_product_cap);

// A joint distribution over full outcome assignments reproducing every
// context's table as a marginal.
struct GlobalSection {
  std::map<OutcomeTuple, Rational> distribution;  // nonzero atoms only
};

struct GlobalSectionResult {
  std::optional<GlobalSection> section;
  std::optional<lp::FarkasCertificate> certificate;  // set when none exists
  std::uint64_t pivot_count = 0;
  bool exists() const { return section.has_value(); }
};

// One variable per assignment in the full product space, one row per
// (context, tuple) marginal equation — zero-probability tuples included —
// plus a normalization row. Row order: contexts in model order, tuples
// lexicographic, normalization last.
lp::LinearFeasibilityProblem build_global_section_lp(
    const EmpiricalModel& model, std::uint64_t product_cap = default_product_cap);

// Decides whether the model is a marginal family of some global distribution.
// Precondition: non-signalling (throws SignallingModelError otherwise).
GlobalSectionResult solve_global_section(const EmpiricalModel& model,
                                         std::uint64_t product_cap = default_product_cap,
                                         const lp::SolveOptions& options = {});

}  // namespace ctxkit::sheaf
