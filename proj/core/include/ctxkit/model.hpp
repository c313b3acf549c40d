#pragma once

#include "ctxkit/rational.hpp"

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ctxkit {

struct Measurement {
  std::string name;
  std::vector<std::string> outcomes;  // index -> label

  bool operator==(const Measurement&) const = default;
};

// Outcome indices, one per measurement, in the owning structure's order.
using OutcomeTuple = std::vector<int>;

struct Context {
  std::vector<std::string> measurements;
  std::string orientation;  // free-form tag, "" = unoriented
  // Sparse joint table: tuples that are absent have probability zero.
  std::map<OutcomeTuple, Rational> table;

  // Position of a measurement inside this context, -1 when absent.
  int position_of(std::string_view measurement) const;
  // "adopt,boxer" or "adopt,boxer[verb-object]" — used in reports.
  std::string display_name() const;

  bool operator==(const Context&) const = default;
};

struct EmpiricalModel {
  std::string label;
  // True when the source carried only support information (probabilities here
  // are the uniform lift and should not be read as measured frequencies).
  bool possibilistic = false;
  std::vector<Measurement> measurements;
  std::vector<Context> contexts;

  int measurement_index(std::string_view name) const;  // -1 when absent
  const Measurement* find_measurement(std::string_view name) const;

  bool operator==(const EmpiricalModel&) const = default;
};

struct SupportContext {
  std::vector<std::string> measurements;
  std::string orientation;
  std::set<OutcomeTuple> support;

  int position_of(std::string_view measurement) const;
  std::string display_name() const;
};

struct PossibilisticModel {
  std::string label;
  std::vector<Measurement> measurements;
  std::vector<SupportContext> contexts;

  int measurement_index(std::string_view name) const;
};

struct ValidationIssue {
  std::string where;  // e.g. "measurements[2]" or "contexts[0].table"
  std::string what;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;  // one line per issue
};

// Structural and probabilistic checks. Collects every violation it can find
// rather than stopping at the first: outcome sets non-empty, unique names,
// contexts referencing known measurements, table keys in range, entries in
// [0,1], each context summing to exactly 1, no duplicate (set, orientation)
// context pairs.
ValidationReport validate(const EmpiricalModel& model);

// Forgets probabilities, keeping per-context sets of possible tuples.
PossibilisticModel support_of(const EmpiricalModel& model);

// Uniform distribution over each context's support. The result is marked
// possibilistic; round-tripping a possibilistic model through support_of and
// back is the identity.
EmpiricalModel uniform_lift(const PossibilisticModel& poss);

}  // namespace ctxkit
