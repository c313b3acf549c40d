#pragma once

#include "ctxkit/lp.hpp"
#include "ctxkit/model.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ctxkit::cbd {

// Guard on the number of binary variables (the LP has 2^n columns).
inline constexpr std::size_t default_variable_cap = 20;

// Strips outcomes that are impossible in every context containing their
// measurement, so dichotomization never introduces dead variables. Outcome
// labels are preserved; indices are compacted per measurement.
EmpiricalModel reduce_effective_outcomes(const EmpiricalModel& model);

// One 0/1 variable per (context, measurement, dichotomization). A binary
// measurement contributes a single variable (indicator of outcome 1); a
// k-outcome measurement with k >= 3 contributes k singleton-versus-rest
// indicators, one per outcome.
struct DichotomizedVariable {
  std::string measurement;
  int one_outcome;  // the variable equals 1 exactly when this outcome occurs
  std::size_t context;
};

// The same (measurement, dichotomization) seen in two different contexts,
// with the largest probabilities any coupling can put on agreement.
struct Connection {
  std::string measurement;
  int one_outcome;
  std::size_t context_first;
  std::size_t context_second;
  std::size_t variable_first;   // indices into DichotomizedSystem::variables
  std::size_t variable_second;
  Rational bound_one;   // min over the two contexts of P[variable = 1]
  Rational bound_zero;  // min over the two contexts of P[variable = 0]
};

struct DichotomizedSystem {
  std::vector<DichotomizedVariable> variables;  // context-major order
  std::vector<std::size_t> context_offsets;     // first variable index per context
  // Per context: distribution over variable patterns; bit b of a key is the
  // value of variables[context_offsets[c] + b].
  std::vector<std::map<std::uint32_t, Rational>> context_tables;
  std::vector<Connection> connections;
};

// Precondition: valid and effective-outcome reduced (throws ShapeError on a
// model with dead outcomes).
DichotomizedSystem dichotomize(const EmpiricalModel& reduced);

// Joint-distribution feasibility over all 2^n variable patterns:
// one row per (context, pattern) — every pattern, including zeros — a
// normalization row, and per connection two rows pinning the probability of
// joint agreement on 1 and on 0 to the connection's bounds (for binary
// variables that is exactly the maximally-agreeing coupling).
// Throws SizeCapError when n exceeds variable_cap.
lp::LinearFeasibilityProblem build_cbd_lp(const DichotomizedSystem& system,
                                          std::size_t variable_cap = default_variable_cap);

struct CbdVerdict {
  bool contextual = false;
  std::size_t variable_count = 0;    // dichotomized binary variables
  std::size_t atom_count = 0;        // LP columns, 2^variable_count
  std::size_t constraint_count = 0;  // LP rows
  std::size_t connection_count = 0;
  // Nonzero atoms of a witnessing joint distribution, keyed by pattern.
  std::optional<std::map<std::uint64_t, Rational>> witness;
  std::optional<lp::FarkasCertificate> certificate;
  std::uint64_t pivot_count = 0;
};

// Full pipeline: reduce, dichotomize, build, solve. Signalling models are
// fine here — that is the point of this criterion.
CbdVerdict check_cbd_contextuality(const EmpiricalModel& model,
                                   std::size_t variable_cap = default_variable_cap,
                                   const lp::SolveOptions& options = {});

// Closed form for systems of two contexts over the same two binary
// measurements, under the +1/-1 encoding (outcome 0 -> +1, outcome 1 -> -1).
struct Cyclic2Report {
  std::array<Rational, 2> expectation_a;   // <A> per context
  std::array<Rational, 2> expectation_b;   // <B> per context
  std::array<Rational, 2> expectation_ab;  // <AB> per context
  Rational delta;    // |<A>_1 - <A>_2| + |<B>_1 - <B>_2|
  Rational d_value;  // |<AB>_1 - <AB>_2| - delta
  bool contextual = false;  // d > 0
  Rational measure;         // max(0, d) / 4
};

// True when the model has exactly two contexts over one shared pair of
// two-outcome measurements.
bool cyclic2_shaped(const EmpiricalModel& model);

// Throws ShapeError when cyclic2_shaped is false. A is the measurement that
// comes first in scenario order.
Cyclic2Report cyclic2_analyze(const EmpiricalModel& model);

}  // namespace ctxkit::cbd
