#pragma once

#include "ctxkit/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace ctxkit::lp {

struct SparseRow {
  // (variable index, coefficient); indices strictly increasing, coefficients nonzero.
  std::vector<std::pair<std::uint32_t, Rational>> terms;
  Rational rhs;
};

// Ax = b with x >= 0, everything an exact rational.
struct LinearFeasibilityProblem {
  std::uint32_t variable_count = 0;
  std::vector<SparseRow> rows;
};

struct FeasibilityWitness {
  std::vector<Rational> values;  // one per variable
};

// Farkas certificate of infeasibility: multipliers y with y'A <= 0
// componentwise and y'b > 0.
struct FarkasCertificate {
  std::vector<Rational> row_multipliers;  // one per row
};

struct FeasibilityResult {
  // Exactly one of the two is set.
  std::optional<FeasibilityWitness> witness;
  std::optional<FarkasCertificate> certificate;
  std::uint64_t pivot_count = 0;
  bool feasible() const { return witness.has_value(); }
};

struct SolveOptions {
  std::uint64_t max_pivots = 200000;
  // Repeatedly fix variables that zero-right-hand-side rows force to zero
  // before pivoting; certificates are mapped back to the original rows.
  bool presolve = true;
};

// Phase-one simplex with Bland's rule over exact rationals. Deterministic;
// the witness or certificate is re-verified against the input before being
// returned. Throws ResourceLimitError when the pivot budget runs out and
// std::invalid_argument on a malformed problem.
FeasibilityResult solve_feasibility(const LinearFeasibilityProblem& problem,
                                    const SolveOptions& options = {});

// Same algorithm without the presolve reductions; kept as a differential-
// testing reference for the production path.
FeasibilityResult solve_feasibility_reference(const LinearFeasibilityProblem& problem,
                                              const SolveOptions& options = {});

bool verify_witness(const LinearFeasibilityProblem& problem, const FeasibilityWitness& witness);
bool verify_certificate(const LinearFeasibilityProblem& problem,
                        const FarkasCertificate& certificate);

// Plain-text dump, one "c0*x_i + c1*x_j = rhs" line per row.
void dump_problem(const LinearFeasibilityProblem& problem, std::ostream& out);

}  // namespace ctxkit::lp
