#include "ctxkit/lp.hpp"

#include "ctxkit/errors.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

namespace ctxkit::lp {

namespace {

void check_problem(const LinearFeasibilityProblem& p) {
  if (p.variable_count == 0 && p.rows.empty()) {
    throw std::invalid_argument("empty feasibility problem");
  }
  for (const auto& row : p.rows) {
    bool first = true;
    std::uint32_t prev = 0;
    for (const auto& [var, coeff] : row.terms) {
      if (var >= p.variable_count) {
        throw std::invalid_argument("variable index " + std::to_string(var) +
                                    " out of range");
      }
      if (!first && var <= prev) {
        throw std::invalid_argument("row terms must use strictly increasing variable indices");
      }
      if (coeff == 0) {
        throw std::invalid_argument("zero coefficient stored in a sparse row");
      }
      prev = var;
      first = false;
    }
  }
}

struct DenseOutcome {
  bool feasible = false;
  std::vector<Rational> x;  // structural values when feasible
  std::vector<Rational> y;  // row multipliers when infeasible
};

// Phase-one simplex on a dense tableau: minimize the sum of artificial
// variables with Bland's rule (smallest-index entering, smallest basic
// leaving on ties), which cannot cycle. Rows arrive in their original
// orientation; negative right-hand sides are flipped internally and the
// returned multipliers refer to the original rows.
DenseOutcome phase_one(std::uint32_t n, const std::vector<SparseRow>& rows,
                       std::uint64_t max_pivots, std::uint64_t& pivots) {
  const std::size_t m = rows.size();
  const std::size_t width = n + m + 1;  // structural | artificial | rhs
  const std::size_t rhs_col = width - 1;

  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(width, Rational(0)));
  std::vector<int> sign(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    sign[i] = rows[i].rhs < 0 ? -1 : 1;
    for (const auto& [var, coeff] : rows[i].terms) {
      t[i][var] = sign[i] < 0 ? Rational(-coeff) : coeff;
    }
    t[i][n + i] = 1;
    t[i][rhs_col] = sign[i] < 0 ? Rational(-rows[i].rhs) : rows[i].rhs;
  }

  // Reduced costs for objective = sum of artificials; artificial columns
  // start at zero reduced cost by construction.
  std::vector<Rational> z(width, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [var, coeff] : rows[i].terms) {
      (void)coeff;
      z[var] -= t[i][var];
    }
    z[rhs_col] -= t[i][rhs_col];
  }

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
  std::vector<char> banned(n + m, 0);  // artificials that already left

  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < n + m; ++j) {
      if (!banned[j] && z[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][rhs_col] / t[i][enter];
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) {
      // The phase-one objective is bounded below by zero, so an improving
      // column always admits a blocking row.
      throw std::logic_error("phase-one column with no positive pivot entry");
    }

    if (++pivots > max_pivots) {
      throw ResourceLimitError("pivot budget exhausted after " +
                               std::to_string(max_pivots) + " pivots");
    }

    Rational pivot_value = t[leave][enter];
    if (pivot_value != 1) {
      for (auto& v : t[leave]) {
        if (v != 0) v /= pivot_value;
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const Rational factor = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) {
        if (t[leave][j] != 0) t[i][j] -= factor * t[leave][j];
      }
    }
    if (z[enter] != 0) {
      const Rational factor = z[enter];
      for (std::size_t j = 0; j < width; ++j) {
        if (t[leave][j] != 0) z[j] -= factor * t[leave][j];
      }
    }

    if (basis[leave] >= n) banned[basis[leave]] = 1;
    basis[leave] = enter;
  }

  DenseOutcome out;
  const Rational objective = -z[rhs_col];
  if (objective == 0) {
    out.feasible = true;
    out.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n) out.x[basis[i]] = t[i][rhs_col];
    }
  } else {
    // Duality for phase one: y_i = 1 - (reduced cost of artificial i) gives
    // y'A <= 0 and y'b = objective > 0 for the flipped rows; undo the flips.
    out.feasible = false;
    out.y.assign(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
      Rational yi = Rational(1) - z[n + i];
      out.y[i] = sign[i] < 0 ? Rational(-yi) : yi;
    }
  }
  return out;
}

struct FixEvent {
  std::size_t row;
  int sign;  // +1 when the fixing row's live coefficients were all positive
  std::vector<std::pair<std::uint32_t, Rational>> cols;  // (variable, coefficient in row)
};

struct PresolveState {
  std::vector<char> fixed;   // per variable: forced to zero
  std::vector<char> active;  // per row: still part of the reduced problem
  std::vector<FixEvent> events;
  // set when a row is contradictory on its own; multipliers for original rows
  std::optional<std::vector<Rational>> early_certificate;
};

// Restores y'A <= 0 on the fixed columns: walk the fix events newest-first
// and subtract a multiple of each fixing row (rhs 0, single-signed on its
// columns) from y. y'b and the surviving columns are untouched because a
// fixing row contains no surviving variables and has zero right-hand side.
void patch_certificate(const LinearFeasibilityProblem& problem,
                       const std::vector<FixEvent>& events, std::vector<Rational>& y) {
  if (events.empty()) return;

  std::map<std::uint32_t, std::vector<std::pair<std::size_t, Rational>>> columns;
  for (const auto& e : events) {
    for (const auto& [var, coeff] : e.cols) {
      (void)coeff;
      columns.emplace(var, std::vector<std::pair<std::size_t, Rational>>{});
    }
  }
  for (std::size_t i = 0; i < problem.rows.size(); ++i) {
    for (const auto& [var, coeff] : problem.rows[i].terms) {
      auto it = columns.find(var);
      if (it != columns.end()) it->second.emplace_back(i, coeff);
    }
  }

  for (auto e = events.rbegin(); e != events.rend(); ++e) {
    Rational mu(0);
    for (const auto& [var, coeff] : e->cols) {
      Rational dot(0);
      for (const auto& [row, c] : columns[var]) {
        if (y[row] != 0) dot += y[row] * c;
      }
      if (dot > 0) {
        const Rational denom = e->sign < 0 ? Rational(-coeff) : coeff;  // > 0
        Rational candidate = dot / denom;
        if (candidate > mu) mu = std::move(candidate);
      }
    }
    if (mu != 0) {
      if (e->sign < 0) {
        y[e->row] += mu;
      } else {
        y[e->row] -= mu;
      }
    }
  }
}

// Fixpoint sweep: a zero-rhs row whose live coefficients share one sign
// forces those variables to zero; a row with no sign-compatible live
// coefficient and nonzero rhs is infeasible on its own.
PresolveState run_presolve(const LinearFeasibilityProblem& problem) {
  PresolveState st;
  st.fixed.assign(problem.variable_count, 0);
  st.active.assign(problem.rows.size(), 1);

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t r = 0; r < problem.rows.size(); ++r) {
      if (!st.active[r]) continue;
      const auto& row = problem.rows[r];

      std::size_t live = 0, positive = 0, negative = 0;
      for (const auto& [var, coeff] : row.terms) {
        if (st.fixed[var]) continue;
        ++live;
        (coeff > 0 ? positive : negative)++;
      }

      if (live == 0) {
        if (row.rhs == 0) {
          st.active[r] = 0;
          changed = true;
          continue;
        }
        std::vector<Rational> y(problem.rows.size(), Rational(0));
        y[r] = row.rhs > 0 ? 1 : -1;
        patch_certificate(problem, st.events, y);
        st.early_certificate = std::move(y);
        return st;
      }

      if (row.rhs == 0 && (positive == 0 || negative == 0)) {
        FixEvent e;
        e.row = r;
        e.sign = negative == 0 ? 1 : -1;
        for (const auto& [var, coeff] : row.terms) {
          if (st.fixed[var]) continue;
          st.fixed[var] = 1;
          e.cols.emplace_back(var, coeff);
        }
        st.events.push_back(std::move(e));
        st.active[r] = 0;
        changed = true;
        continue;
      }

      if ((row.rhs > 0 && positive == 0) || (row.rhs < 0 && negative == 0)) {
        std::vector<Rational> y(problem.rows.size(), Rational(0));
        y[r] = row.rhs > 0 ? 1 : -1;
        patch_certificate(problem, st.events, y);
        st.early_certificate = std::move(y);
        return st;
      }
    }
  }
  return st;
}

FeasibilityResult finish(const LinearFeasibilityProblem& problem, FeasibilityResult result) {
  if (result.feasible()) {
    if (!verify_witness(problem, *result.witness)) {
      throw std::logic_error("internal solver error: witness failed verification");
    }
  } else {
    if (!verify_certificate(problem, *result.certificate)) {
      throw std::logic_error("internal solver error: certificate failed verification");
    }
  }
  return result;
}

}  // namespace

FeasibilityResult solve_feasibility(const LinearFeasibilityProblem& problem,
                                    const SolveOptions& options) {
  check_problem(problem);
  if (!options.presolve) return solve_feasibility_reference(problem, options);

  PresolveState st = run_presolve(problem);

  FeasibilityResult result;
  if (st.early_certificate) {
    result.certificate = FarkasCertificate{std::move(*st.early_certificate)};
    return finish(problem, std::move(result));
  }

  std::vector<std::uint32_t> var_map(problem.variable_count, UINT32_MAX);
  std::uint32_t surviving = 0;
  for (std::uint32_t v = 0; v < problem.variable_count; ++v) {
    if (!st.fixed[v]) var_map[v] = surviving++;
  }

  std::vector<SparseRow> reduced_rows;
  std::vector<std::size_t> original_row;
  for (std::size_t r = 0; r < problem.rows.size(); ++r) {
    if (!st.active[r]) continue;
    SparseRow row;
    row.rhs = problem.rows[r].rhs;
    for (const auto& [var, coeff] : problem.rows[r].terms) {
      if (!st.fixed[var]) row.terms.emplace_back(var_map[var], coeff);
    }
    reduced_rows.push_back(std::move(row));
    original_row.push_back(r);
  }

  DenseOutcome dense = phase_one(surviving, reduced_rows, options.max_pivots,
                                 result.pivot_count);
  if (dense.feasible) {
    FeasibilityWitness witness;
    witness.values.assign(problem.variable_count, Rational(0));
    for (std::uint32_t v = 0; v < problem.variable_count; ++v) {
      if (var_map[v] != UINT32_MAX) witness.values[v] = dense.x[var_map[v]];
    }
    result.witness = std::move(witness);
  } else {
    std::vector<Rational> y(problem.rows.size(), Rational(0));
    for (std::size_t k = 0; k < original_row.size(); ++k) {
      y[original_row[k]] = dense.y[k];
    }
    patch_certificate(problem, st.events, y);
    result.certificate = FarkasCertificate{std::move(y)};
  }
  return finish(problem, std::move(result));
}

FeasibilityResult solve_feasibility_reference(const LinearFeasibilityProblem& problem,
                                              const SolveOptions& options) {
  check_problem(problem);
  FeasibilityResult result;
  DenseOutcome dense = phase_one(problem.variable_count, problem.rows,
                                 options.max_pivots, result.pivot_count);
  if (dense.feasible) {
    result.witness = FeasibilityWitness{std::move(dense.x)};
  } else {
    result.certificate = FarkasCertificate{std::move(dense.y)};
  }
  return finish(problem, std::move(result));
}

bool verify_witness(const LinearFeasibilityProblem& problem,
                    const FeasibilityWitness& witness) {
  if (witness.values.size() != problem.variable_count) return false;
  for (const auto& v : witness.values) {
    if (v < 0) return false;
  }
  for (const auto& row : problem.rows) {
    Rational lhs(0);
    for (const auto& [var, coeff] : row.terms) {
      if (witness.values[var] != 0) lhs += coeff * witness.values[var];
    }
    if (lhs != row.rhs) return false;
  }
  return true;
}

bool verify_certificate(const LinearFeasibilityProblem& problem,
                        const FarkasCertificate& certificate) {
  const auto& y = certificate.row_multipliers;
  if (y.size() != problem.rows.size()) return false;

  std::vector<Rational> combined(problem.variable_count, Rational(0));
  Rational value(0);
  for (std::size_t i = 0; i < problem.rows.size(); ++i) {
    if (y[i] == 0) continue;
    for (const auto& [var, coeff] : problem.rows[i].terms) {
      combined[var] += y[i] * coeff;
    }
    value += y[i] * problem.rows[i].rhs;
  }
  for (const auto& c : combined) {
    if (c > 0) return false;
  }
  return value > 0;
}

void dump_problem(const LinearFeasibilityProblem& problem, std::ostream& out) {
  out << "# variables: " << problem.variable_count << "\n";
  out << "# rows: " << problem.rows.size() << "\n";
  for (const auto& row : problem.rows) {
    if (row.terms.empty()) {
      out << "0";
    } else {
      for (std::size_t k = 0; k < row.terms.size(); ++k) {
        if (k) out << " + ";
        out << format_rational(row.terms[k].second) << "*x_" << row.terms[k].first;
      }
    }
    out << " = " << format_rational(row.rhs) << "\n";
  }
}

}  // namespace ctxkit::lp
