#include "ctxkit/cbd.hpp"

#include "ctxkit/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace ctxkit::cbd {

namespace {

// Per measurement, the outcome indices that occur with positive probability
// in at least one containing context; empty when the measurement is unused.
std::vector<std::set<int>> live_outcomes(const EmpiricalModel& model) {
  std::vector<std::set<int>> live(model.measurements.size());
  for (const auto& ctx : model.contexts) {
    for (std::size_t p = 0; p < ctx.measurements.size(); ++p) {
      const int mi = model.measurement_index(ctx.measurements[p]);
      if (mi < 0) continue;
      for (const auto& [tuple, value] : ctx.table) {
        if (value > 0) live[static_cast<std::size_t>(mi)].insert(tuple[p]);
      }
    }
  }
  return live;
}

bool appears_anywhere(const EmpiricalModel& model, const std::string& name) {
  for (const auto& ctx : model.contexts) {
    if (ctx.position_of(name) >= 0) return true;
  }
  return false;
}

Rational outcome_marginal(const Context& ctx, int position, int outcome) {
  Rational sum(0);
  for (const auto& [tuple, value] : ctx.table) {
    if (tuple[static_cast<std::size_t>(position)] == outcome) sum += value;
  }
  return sum;
}

int pm_sign(int outcome) { return outcome == 0 ? 1 : -1; }

}  // namespace

EmpiricalModel reduce_effective_outcomes(const EmpiricalModel& model) {
  const auto live = live_outcomes(model);

  EmpiricalModel reduced;
  reduced.label = model.label;
  reduced.possibilistic = model.possibilistic;

  // old outcome index -> new, per measurement (-1 for dropped outcomes)
  std::vector<std::vector<int>> remap(model.measurements.size());
  for (std::size_t i = 0; i < model.measurements.size(); ++i) {
    const auto& m = model.measurements[i];
    Measurement out;
    out.name = m.name;
    remap[i].assign(m.outcomes.size(), -1);
    const bool unused = !appears_anywhere(model, m.name);
    for (std::size_t o = 0; o < m.outcomes.size(); ++o) {
      if (unused || live[i].count(static_cast<int>(o))) {
        remap[i][o] = static_cast<int>(out.outcomes.size());
        out.outcomes.push_back(m.outcomes[o]);
      }
    }
    reduced.measurements.push_back(std::move(out));
  }

  for (const auto& ctx : model.contexts) {
    Context out;
    out.measurements = ctx.measurements;
    out.orientation = ctx.orientation;
    for (const auto& [tuple, value] : ctx.table) {
      if (value == 0) continue;  // dead entries disappear with their outcomes
      OutcomeTuple t(tuple.size());
      for (std::size_t p = 0; p < tuple.size(); ++p) {
        const int mi = model.measurement_index(ctx.measurements[p]);
        if (mi < 0) throw ShapeError("context references unknown measurement \"" + ctx.measurements[p] + "\"");
        t[p] = remap[static_cast<std::size_t>(mi)][static_cast<std::size_t>(tuple[p])];
      }
      out.table.emplace(std::move(t), value);
    }
    reduced.contexts.push_back(std::move(out));
  }
  return reduced;
}

DichotomizedSystem dichotomize(const EmpiricalModel& reduced) {
  // Refuse models with dead outcomes: they would beget constant variables.
  const auto live = live_outcomes(reduced);
  for (std::size_t i = 0; i < reduced.measurements.size(); ++i) {
    if (!appears_anywhere(reduced, reduced.measurements[i].name)) continue;
    if (live[i].size() != reduced.measurements[i].outcomes.size()) {
      throw ShapeError("measurement \"" + reduced.measurements[i].name +
                       "\" has outcomes that never occur; reduce effective outcomes first");
    }
  }

  DichotomizedSystem system;
  // (context, measurement, one_outcome) -> variable index
  std::map<std::tuple<std::size_t, std::string, int>, std::size_t> lookup;

  for (std::size_t c = 0; c < reduced.contexts.size(); ++c) {
    const auto& ctx = reduced.contexts[c];
    system.context_offsets.push_back(system.variables.size());
    for (std::size_t p = 0; p < ctx.measurements.size(); ++p) {
      const auto* m = reduced.find_measurement(ctx.measurements[p]);
      if (!m) throw ShapeError("context references unknown measurement \"" + ctx.measurements[p] + "\"");
      const int k = static_cast<int>(m->outcomes.size());
      if (k == 2) {
        lookup[{c, m->name, 1}] = system.variables.size();
        system.variables.push_back({m->name, 1, c});
      } else if (k >= 3) {
        for (int s = 0; s < k; ++s) {
          lookup[{c, m->name, s}] = system.variables.size();
          system.variables.push_back({m->name, s, c});
        }
      }
      // k == 1: a constant measurement contributes no variable at all
    }
    if (system.variables.size() - system.context_offsets.back() > 31) {
      throw SizeCapError("context has more than 31 dichotomized variables");
    }
  }

  for (std::size_t c = 0; c < reduced.contexts.size(); ++c) {
    const auto& ctx = reduced.contexts[c];
    const std::size_t offset = system.context_offsets[c];
    const std::size_t local_count = (c + 1 < system.context_offsets.size()
                                         ? system.context_offsets[c + 1]
                                         : system.variables.size()) -
                                    offset;
    std::map<std::uint32_t, Rational> table;
    for (const auto& [tuple, value] : ctx.table) {
      if (value == 0) continue;
      std::uint32_t pattern = 0;
      for (std::size_t b = 0; b < local_count; ++b) {
        const auto& var = system.variables[offset + b];
        const int pos = ctx.position_of(var.measurement);
        if (tuple[static_cast<std::size_t>(pos)] == var.one_outcome) {
          pattern |= std::uint32_t{1} << b;
        }
      }
      table[pattern] += value;
    }
    system.context_tables.push_back(std::move(table));
  }

  for (const auto& m : reduced.measurements) {
    const int k = static_cast<int>(m.outcomes.size());
    std::vector<int> dichotomizations;
    if (k == 2) {
      dichotomizations.push_back(1);
    } else if (k >= 3) {
      for (int s = 0; s < k; ++s) dichotomizations.push_back(s);
    }
    if (dichotomizations.empty()) continue;

    std::vector<std::pair<std::size_t, int>> where;
    for (std::size_t c = 0; c < reduced.contexts.size(); ++c) {
      const int pos = reduced.contexts[c].position_of(m.name);
      if (pos >= 0) where.emplace_back(c, pos);
    }

    for (int s : dichotomizations) {
      for (std::size_t a = 0; a < where.size(); ++a) {
        for (std::size_t b = a + 1; b < where.size(); ++b) {
          const auto [ci, pi] = where[a];
          const auto [cj, pj] = where[b];
          Connection conn;
          conn.measurement = m.name;
          conn.one_outcome = s;
          conn.context_first = ci;
          conn.context_second = cj;
          conn.variable_first = lookup.at({ci, m.name, s});
          conn.variable_second = lookup.at({cj, m.name, s});
          const Rational p1 = outcome_marginal(reduced.contexts[ci], pi, s);
          const Rational p2 = outcome_marginal(reduced.contexts[cj], pj, s);
          conn.bound_one = std::min(p1, p2);
          conn.bound_zero = std::min(Rational(1) - p1, Rational(1) - p2);
          system.connections.push_back(std::move(conn));
        }
      }
    }
  }

  return system;
}

lp::LinearFeasibilityProblem build_cbd_lp(const DichotomizedSystem& system,
                                          std::size_t variable_cap) {
  const std::size_t n = system.variables.size();
  if (n > variable_cap || n > 31) {
    throw SizeCapError("dichotomized system has " + std::to_string(n) +
                       " binary variables, over the cap of " +
                       std::to_string(std::min<std::size_t>(variable_cap, 31)));
  }
  const std::uint32_t atoms = std::uint32_t{1} << n;

  lp::LinearFeasibilityProblem problem;
  problem.variable_count = atoms;

  auto matching_row = [&](auto&& predicate, Rational rhs) {
    lp::SparseRow row;
    row.rhs = std::move(rhs);
    for (std::uint32_t a = 0; a < atoms; ++a) {
      if (predicate(a)) row.terms.emplace_back(a, Rational(1));
    }
    problem.rows.push_back(std::move(row));
  };

  for (std::size_t c = 0; c < system.context_tables.size(); ++c) {
    const std::size_t offset = system.context_offsets[c];
    const std::size_t local_count = (c + 1 < system.context_offsets.size()
                                         ? system.context_offsets[c + 1]
                                         : n) -
                                    offset;
    const std::uint32_t mask = (std::uint32_t{1} << local_count) - 1;
    const auto& table = system.context_tables[c];
    for (std::uint32_t pattern = 0; pattern <= mask; ++pattern) {
      auto it = table.find(pattern);
      Rational rhs = it == table.end() ? Rational(0) : it->second;
      matching_row(
          [&](std::uint32_t a) { return ((a >> offset) & mask) == pattern; },
          std::move(rhs));
      if (mask == 0) break;  // a variable-free context has the single empty pattern
    }
  }

  matching_row([](std::uint32_t) { return true; }, Rational(1));

  for (const auto& conn : system.connections) {
    const std::uint32_t bit1 = std::uint32_t{1} << conn.variable_first;
    const std::uint32_t bit2 = std::uint32_t{1} << conn.variable_second;
    matching_row([&](std::uint32_t a) { return (a & bit1) && (a & bit2); },
                 conn.bound_one);
    matching_row([&](std::uint32_t a) { return !(a & bit1) && !(a & bit2); },
                 conn.bound_zero);
  }

  return problem;
}

CbdVerdict check_cbd_contextuality(const EmpiricalModel& model, std::size_t variable_cap,
                                   const lp::SolveOptions& options) {
  const EmpiricalModel reduced = reduce_effective_outcomes(model);
  DichotomizedSystem system = dichotomize(reduced);
  lp::LinearFeasibilityProblem problem = build_cbd_lp(system, variable_cap);
  lp::FeasibilityResult solved = lp::solve_feasibility(problem, options);

  CbdVerdict verdict;
  verdict.variable_count = system.variables.size();
  verdict.atom_count = problem.variable_count;
  verdict.constraint_count = problem.rows.size();
  verdict.connection_count = system.connections.size();
  verdict.pivot_count = solved.pivot_count;
  verdict.contextual = !solved.feasible();
  if (solved.feasible()) {
    std::map<std::uint64_t, Rational> atoms;
    const auto& x = solved.witness->values;
    for (std::uint32_t a = 0; a < x.size(); ++a) {
      if (x[a] != 0) atoms.emplace(a, x[a]);
    }
    verdict.witness = std::move(atoms);
  } else {
    verdict.certificate = std::move(*solved.certificate);
  }
  return verdict;
}

bool cyclic2_shaped(const EmpiricalModel& model) {
  if (model.contexts.size() != 2) return false;
  const auto& c0 = model.contexts[0];
  const auto& c1 = model.contexts[1];
  if (c0.measurements.size() != 2 || c1.measurements.size() != 2) return false;
  if (c0.measurements[0] == c0.measurements[1]) return false;

  std::set<std::string> s0(c0.measurements.begin(), c0.measurements.end());
  std::set<std::string> s1(c1.measurements.begin(), c1.measurements.end());
  if (s0 != s1) return false;

  for (const auto& name : s0) {
    const auto* m = model.find_measurement(name);
    if (!m || m->outcomes.size() != 2) return false;
  }
  return true;
}

Cyclic2Report cyclic2_analyze(const EmpiricalModel& model) {
  if (!cyclic2_shaped(model)) {
    throw ShapeError("closed form needs exactly two contexts over one shared pair of "
                     "binary measurements");
  }

  // A is the measurement that comes first in scenario order.
  std::vector<std::string> pair = model.contexts[0].measurements;
  std::sort(pair.begin(), pair.end(), [&](const std::string& x, const std::string& y) {
    return model.measurement_index(x) < model.measurement_index(y);
  });
  const std::string& a_name = pair[0];
  const std::string& b_name = pair[1];

  Cyclic2Report report;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& ctx = model.contexts[c];
    const auto pa = static_cast<std::size_t>(ctx.position_of(a_name));
    const auto pb = static_cast<std::size_t>(ctx.position_of(b_name));
    Rational ea(0), eb(0), eab(0);
    for (const auto& [tuple, value] : ctx.table) {
      const int sa = pm_sign(tuple[pa]);
      const int sb = pm_sign(tuple[pb]);
      ea += sa * value;
      eb += sb * value;
      eab += sa * sb * value;
    }
    report.expectation_a[c] = std::move(ea);
    report.expectation_b[c] = std::move(eb);
    report.expectation_ab[c] = std::move(eab);
  }

  using boost::multiprecision::abs;
  report.delta = abs(report.expectation_a[0] - report.expectation_a[1]) +
                 abs(report.expectation_b[0] - report.expectation_b[1]);
  report.d_value = abs(report.expectation_ab[0] - report.expectation_ab[1]) - report.delta;
  report.contextual = report.d_value > 0;
  report.measure = report.contextual ? Rational(report.d_value / 4) : Rational(0);
  return report;
}

}  // namespace ctxkit::cbd
