#include "oracles.hpp"

#include <cstdint>
#include <stdexcept>

namespace oracles {

DenseProblem densify(const ctxkit::lp::LinearFeasibilityProblem& problem) {
  DenseProblem dense;
  dense.a.assign(problem.rows.size(), std::vector<Rational>(problem.variable_count, Rational(0)));
  dense.b.reserve(problem.rows.size());
  for (std::size_t r = 0; r < problem.rows.size(); ++r) {
    for (const auto& [col, coeff] : problem.rows[r].terms) dense.a[r][col] = coeff;
    dense.b.push_back(problem.rows[r].rhs);
  }
  return dense;
}

namespace {

// Solves A_S x = b exactly for one column subset. Returns nullopt when the
// columns are dependent or the system is inconsistent.
std::optional<std::vector<Rational>> solve_subset(const DenseProblem& p,
                                                  const std::vector<std::size_t>& cols) {
  const std::size_t m = p.rows();
  const std::size_t k = cols.size();
  // Augmented matrix [A_S | b].
  std::vector<std::vector<Rational>> aug(m, std::vector<Rational>(k + 1));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < k; ++j) aug[r][j] = p.a[r][cols[j]];
    aug[r][k] = p.b[r];
  }
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_row_of_col(k, std::size_t(-1));
  for (std::size_t j = 0; j < k && rank < m; ++j) {
    std::size_t pivot = rank;
    while (pivot < m && aug[pivot][j] == 0) ++pivot;
    if (pivot == m) return std::nullopt;  // dependent columns
    std::swap(aug[rank], aug[pivot]);
    const Rational lead = aug[rank][j];
    for (auto& v : aug[rank]) v /= lead;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == rank || aug[r][j] == 0) continue;
      const Rational factor = aug[r][j];
      for (std::size_t c = j; c <= k; ++c) aug[r][c] -= factor * aug[rank][c];
    }
    pivot_row_of_col[j] = rank;
    ++rank;
  }
  if (rank < k) return std::nullopt;
  for (std::size_t r = rank; r < m; ++r)
    if (aug[r][k] != 0) return std::nullopt;  // inconsistent
  std::vector<Rational> x(k);
  for (std::size_t j = 0; j < k; ++j) x[j] = aug[pivot_row_of_col[j]][k];
  return x;
}

}  // namespace

bool basic_solution_feasible(const DenseProblem& problem) {
  const std::size_t n = problem.cols();
  const std::size_t m = problem.rows();
  if (n > 20) throw std::logic_error("basic_solution_feasible: too many columns");
  const std::size_t limit = std::min(n, m);
  for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << n); ++mask) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n; ++j)
      if (mask & (std::uint32_t(1) << j)) cols.push_back(j);
    if (cols.size() > limit) continue;
    if (cols.empty()) {
      bool zero = true;
      for (const auto& v : problem.b) zero = zero && v == 0;
      if (zero) return true;
      continue;
    }
    const auto x = solve_subset(problem, cols);
    if (!x) continue;
    bool nonneg = true;
    for (const auto& v : *x) nonneg = nonneg && v >= 0;
    if (nonneg) return true;
  }
  return false;
}

bool farkas_valid(const DenseProblem& problem, const std::vector<Rational>& y) {
  if (y.size() != problem.rows()) return false;
  for (std::size_t j = 0; j < problem.cols(); ++j) {
    Rational dot(0);
    for (std::size_t r = 0; r < problem.rows(); ++r) dot += y[r] * problem.a[r][j];
    if (dot > 0) return false;
  }
  Rational yb(0);
  for (std::size_t r = 0; r < problem.rows(); ++r) yb += y[r] * problem.b[r];
  return yb > 0;
}

namespace {

// One Bland pivot step on a dense tableau with objective row at the bottom.
// Returns false when the current basis is optimal for the objective row.
// Throws when the chosen column is unbounded.
bool bland_step(std::vector<std::vector<Rational>>& t, std::vector<std::size_t>& basis,
                std::size_t allowed_cols) {
  const std::size_t m = t.size() - 1;
  const std::size_t width = t.front().size();
  std::size_t entering = width;
  for (std::size_t j = 0; j < allowed_cols; ++j) {
    if (t[m][j] < 0) {
      entering = j;
      break;
    }
  }
  if (entering == width) return false;
  std::size_t leaving = m;
  Rational best_ratio(0);
  for (std::size_t r = 0; r < m; ++r) {
    if (t[r][entering] <= 0) continue;
    const Rational ratio = t[r].back() / t[r][entering];
    if (leaving == m || ratio < best_ratio ||
        (ratio == best_ratio && basis[r] < basis[leaving])) {
      leaving = r;
      best_ratio = ratio;
    }
  }
  if (leaving == m) throw std::logic_error("oracle simplex: unbounded direction");
  const Rational lead = t[leaving][entering];
  for (auto& v : t[leaving]) v /= lead;
  for (std::size_t r = 0; r <= m; ++r) {
    if (r == leaving || t[r][entering] == 0) continue;
    const Rational factor = t[r][entering];
    for (std::size_t c = 0; c < width; ++c) t[r][c] -= factor * t[leaving][c];
  }
  basis[leaving] = entering;
  return true;
}

}  // namespace

std::optional<Rational> minimize(const DenseProblem& problem, const std::vector<Rational>& c) {
  const std::size_t m = problem.rows();
  const std::size_t n = problem.cols();
  if (c.size() != n) throw std::logic_error("oracle simplex: objective size mismatch");

  // Tableau columns: n structural, m artificial, 1 rhs. Rows: m constraints
  // plus one objective row (phase 1 first, rebuilt for phase 2).
  std::vector<std::vector<Rational>> t(m + 1, std::vector<Rational>(n + m + 1, Rational(0)));
  for (std::size_t r = 0; r < m; ++r) {
    const bool flip = problem.b[r] < 0;
    for (std::size_t j = 0; j < n; ++j) t[r][j] = flip ? -problem.a[r][j] : problem.a[r][j];
    t[r][n + r] = 1;
    t[r].back() = flip ? -problem.b[r] : problem.b[r];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;

  // Phase 1: minimize the sum of artificials. Reduced costs start as
  // -(column sums) so the artificial basis prices to zero.
  for (std::size_t j = 0; j < n + m + 1; ++j) {
    Rational sum(0);
    for (std::size_t r = 0; r < m; ++r) sum += t[r][j];
    t[m][j] = (j >= n && j < n + m) ? Rational(0) : -sum;
  }
  while (bland_step(t, basis, n + m)) {
  }
  if (t[m].back() != 0) return std::nullopt;  // phase-1 optimum positive -> infeasible

  // Drive any zero-level artificials out of the basis where a structural
  // pivot exists; rows with none are redundant and stay put harmlessly.
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (t[r][j] == 0) continue;
      const Rational lead = t[r][j];
      for (auto& v : t[r]) v /= lead;
      for (std::size_t rr = 0; rr <= m; ++rr) {
        if (rr == r || t[rr][j] == 0) continue;
        const Rational factor = t[rr][j];
        for (std::size_t cc = 0; cc < t[rr].size(); ++cc) t[rr][cc] -= factor * t[r][cc];
      }
      basis[r] = j;
      break;
    }
  }

  // Phase 2 objective row: reduced costs c_j - c_B B^-1 A_j, artificials
  // barred from entering by pricing them prohibitively.
  for (std::size_t j = 0; j < n + m + 1; ++j) {
    Rational value = (j < n) ? c[j] : Rational(0);
    for (std::size_t r = 0; r < m; ++r) {
      const Rational basic_cost = basis[r] < n ? c[basis[r]] : Rational(0);
      value -= basic_cost * t[r][j];
    }
    t[m][j] = value;
  }
  while (bland_step(t, basis, n)) {
  }
  Rational objective(0);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < n) objective += c[basis[r]] * t[r].back();
  return objective;
}

FlatReport flat_logical_analysis(const ctxkit::PossibilisticModel& poss) {
  FlatReport report;

  // Support-level signalling: some measurement's possible-outcome set differs
  // between two contexts containing it.
  for (std::size_t mi = 0; mi < poss.measurements.size(); ++mi) {
    const auto& name = poss.measurements[mi].name;
    std::vector<std::set<int>> seen;
    for (const auto& ctx : poss.contexts) {
      const int pos = ctx.position_of(name);
      if (pos < 0) continue;
      std::set<int> possible;
      for (const auto& tuple : ctx.support) possible.insert(tuple[pos]);
      seen.push_back(std::move(possible));
    }
    for (std::size_t i = 1; i < seen.size(); ++i)
      if (seen[i] != seen.front()) report.support_signalling = true;
  }

  // Every assignment of one outcome per measurement, lexicographic.
  ctxkit::OutcomeTuple assignment(poss.measurements.size(), 0);
  std::vector<ctxkit::OutcomeTuple> globals;
  bool exhausted = false;
  while (!exhausted) {
    bool consistent = true;
    for (const auto& ctx : poss.contexts) {
      ctxkit::OutcomeTuple restricted;
      for (const auto& name : ctx.measurements)
        restricted.push_back(assignment[poss.measurement_index(name)]);
      if (!ctx.support.count(restricted)) {
        consistent = false;
        break;
      }
    }
    if (consistent) globals.push_back(assignment);
    // odometer: wrap position by position; wrapping past the front ends it
    exhausted = true;
    for (std::size_t pos = assignment.size(); pos-- > 0;) {
      if (++assignment[pos] < static_cast<int>(poss.measurements[pos].outcomes.size())) {
        exhausted = false;
        break;
      }
      assignment[pos] = 0;
    }
  }
  report.globals = globals;

  for (std::size_t ci = 0; ci < poss.contexts.size(); ++ci) {
    const auto& ctx = poss.contexts[ci];
    for (const auto& tuple : ctx.support) {
      bool extends = false;
      for (const auto& g : globals) {
        bool match = true;
        for (std::size_t p = 0; p < ctx.measurements.size(); ++p)
          match = match && g[poss.measurement_index(ctx.measurements[p])] == tuple[p];
        if (match) {
          extends = true;
          break;
        }
      }
      if (!extends) report.non_extendable.insert({ci, tuple});
    }
  }
  report.logically_contextual = !report.non_extendable.empty();
  report.strongly_contextual = globals.empty();
  return report;
}

}  // namespace oracles
