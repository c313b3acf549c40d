#include "ctxkit/sheaf.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace ctxkit::sheaf {

namespace {

Rational marginal_probability(const Context& ctx, int position, int outcome) {
  Rational sum(0);
  for (const auto& [tuple, value] : ctx.table) {
    if (tuple[static_cast<std::size_t>(position)] == outcome) sum += value;
  }
  return sum;
}

bool marginal_possible(const SupportContext& ctx, int position, int outcome) {
  for (const auto& tuple : ctx.support) {
    if (tuple[static_cast<std::size_t>(position)] == outcome) return true;
  }
  return false;
}

// (context index, position of the measurement inside it)
template <typename ContextT>
std::vector<std::pair<std::size_t, int>> occurrences(const std::vector<ContextT>& contexts,
                                                     const std::string& name) {
  std::vector<std::pair<std::size_t, int>> out;
  for (std::size_t c = 0; c < contexts.size(); ++c) {
    int pos = contexts[c].position_of(name);
    if (pos >= 0) out.emplace_back(c, pos);
  }
  return out;
}

// Lexicographic increment of a mixed-radix counter; false on wrap-around.
bool next_tuple(OutcomeTuple& tuple, const std::vector<int>& sizes) {
  for (std::size_t i = tuple.size(); i-- > 0;) {
    if (++tuple[i] < sizes[i]) return true;
    tuple[i] = 0;
  }
  return false;
}

}  // namespace

SignallingReport check_signalling(const EmpiricalModel& model) {
  SignallingReport report;
  for (const auto& m : model.measurements) {
    const auto where = occurrences(model.contexts, m.name);
    for (std::size_t a = 0; a < where.size(); ++a) {
      for (std::size_t b = a + 1; b < where.size(); ++b) {
        const auto [ci, pi] = where[a];
        const auto [cj, pj] = where[b];
        for (int o = 0; o < static_cast<int>(m.outcomes.size()); ++o) {
          const Rational first = marginal_probability(model.contexts[ci], pi, o);
          const Rational second = marginal_probability(model.contexts[cj], pj, o);
          if (first != second) {
            report.violations.push_back({m.name, o, ci, cj, first, second});
          }
          const bool possible_first = first > 0;
          const bool possible_second = second > 0;
          if (possible_first != possible_second) {
            report.possibilistic_violations.push_back(
                {m.name, o, ci, cj, possible_first, possible_second});
          }
        }
      }
    }
  }
  report.is_signalling = !report.violations.empty();
  report.is_possibilistically_signalling = !report.possibilistic_violations.empty();
  return report;
}

SignallingReport check_support_signalling(const PossibilisticModel& poss) {
  SignallingReport report;
  for (const auto& m : poss.measurements) {
    const auto where = occurrences(poss.contexts, m.name);
    for (std::size_t a = 0; a < where.size(); ++a) {
      for (std::size_t b = a + 1; b < where.size(); ++b) {
        const auto [ci, pi] = where[a];
        const auto [cj, pj] = where[b];
        for (int o = 0; o < static_cast<int>(m.outcomes.size()); ++o) {
          const bool possible_first = marginal_possible(poss.contexts[ci], pi, o);
          const bool possible_second = marginal_possible(poss.contexts[cj], pj, o);
          if (possible_first != possible_second) {
            report.possibilistic_violations.push_back(
                {m.name, o, ci, cj, possible_first, possible_second});
          }
        }
      }
    }
  }
  report.is_possibilistically_signalling = !report.possibilistic_violations.empty();
  return report;
}

std::vector<OutcomeTuple> global_assignments(const PossibilisticModel& poss,
                                             std::uint64_t product_cap) {
  const std::size_t count = poss.measurements.size();
  if (count == 0) return {OutcomeTuple{}};

  std::vector<int> sizes(count);
  Integer total = 1;
  for (std::size_t i = 0; i < count; ++i) {
    sizes[i] = static_cast<int>(poss.measurements[i].outcomes.size());
    total *= sizes[i];
  }
  if (total > Integer(product_cap)) {
    throw SizeCapError("assignment space has " + total.str() + " tuples, over the cap of " +
                       std::to_string(product_cap));
  }

  // For each measurement, the contexts it appears in (context, position),
  // so a partial assignment can be pruned as soon as it leaves some support.
  std::vector<std::vector<std::pair<std::size_t, int>>> touching(count);
  std::vector<std::vector<int>> scenario_index(poss.contexts.size());
  for (std::size_t c = 0; c < poss.contexts.size(); ++c) {
    const auto& ctx = poss.contexts[c];
    scenario_index[c].resize(ctx.measurements.size());
    for (std::size_t p = 0; p < ctx.measurements.size(); ++p) {
      const int mi = poss.measurement_index(ctx.measurements[p]);
      scenario_index[c][p] = mi;
      if (mi >= 0) touching[static_cast<std::size_t>(mi)].emplace_back(c, static_cast<int>(p));
    }
  }

  std::vector<OutcomeTuple> found;
  OutcomeTuple g(count, 0);

  auto consistent_so_far = [&](std::size_t depth) {
    // Check every context that measurement `depth` participates in.
    for (const auto& [c, pos] : touching[depth]) {
      (void)pos;
      const auto& ctx = poss.contexts[c];
      bool any = false;
      for (const auto& t : ctx.support) {
        bool match = true;
        for (std::size_t p = 0; p < t.size(); ++p) {
          const int mi = scenario_index[c][p];
          if (mi >= 0 && static_cast<std::size_t>(mi) <= depth &&
              t[p] != g[static_cast<std::size_t>(mi)]) {
            match = false;
            break;
          }
        }
        if (match) {
          any = true;
          break;
        }
      }
      if (!any) return false;
    }
    return true;
  };

  // Depth-first walk over the product space with per-context pruning.
  auto walk = [&](auto&& self, std::size_t depth) -> void {
    if (depth == count) {
      found.push_back(g);
      return;
    }
    for (int o = 0; o < sizes[depth]; ++o) {
      g[depth] = o;
      if (consistent_so_far(depth)) self(self, depth + 1);
    }
    g[depth] = 0;
  };
  walk(walk, 0);
  return found;
}

LogicalContextualityReport check_logical_contextuality(const PossibilisticModel& poss,
                                                       std::uint64_t product_cap) {
  SignallingReport sig = check_support_signalling(poss);
  if (sig.is_possibilistically_signalling) {
    throw SignallingModelError(std::move(sig));
  }

  LogicalContextualityReport report;
  report.consistent_global_assignments = global_assignments(poss, product_cap);
  const auto& global = report.consistent_global_assignments;

  std::set<std::tuple<std::size_t, std::string, int>> seen_sections;
  for (std::size_t c = 0; c < poss.contexts.size(); ++c) {
    const auto& ctx = poss.contexts[c];
    std::vector<int> scenario_index(ctx.measurements.size());
    for (std::size_t p = 0; p < ctx.measurements.size(); ++p) {
      scenario_index[p] = poss.measurement_index(ctx.measurements[p]);
    }
    for (const auto& t : ctx.support) {
      bool extendable = false;
      for (const auto& g : global) {
        bool match = true;
        for (std::size_t p = 0; p < t.size(); ++p) {
          if (g[static_cast<std::size_t>(scenario_index[p])] != t[p]) {
            match = false;
            break;
          }
        }
        if (match) {
          extendable = true;
          break;
        }
      }
      if (extendable) continue;

      report.non_extendable_supports.push_back({c, t});
      for (std::size_t p = 0; p < t.size(); ++p) {
        auto key = std::make_tuple(c, ctx.measurements[p], t[p]);
        if (seen_sections.insert(key).second) {
          report.non_extendable_sections.push_back({c, ctx.measurements[p], t[p]});
        }
      }
    }
  }

  report.is_logically_contextual = !report.non_extendable_supports.empty();
  report.is_strongly_contextual = global.empty();
  return report;
}

lp::LinearFeasibilityProblem build_global_section_lp(const EmpiricalModel& model,
                                                     std::uint64_t product_cap) {
  const std::size_t count = model.measurements.size();
  std::vector<int> sizes(count);
  Integer total = 1;
  for (std::size_t i = 0; i < count; ++i) {
    sizes[i] = static_cast<int>(model.measurements[i].outcomes.size());
    total *= sizes[i];
  }
  if (total > Integer(product_cap)) {
    throw SizeCapError("assignment space has " + total.str() + " tuples, over the cap of " +
                       std::to_string(product_cap));
  }
  const std::uint64_t space = total.template convert_to<std::uint64_t>();

  // Place value of each measurement in the assignment index (last varies fastest).
  std::vector<std::uint64_t> weight(count, 1);
  for (std::size_t i = count; i-- > 1;) {
    weight[i - 1] = weight[i] * static_cast<std::uint64_t>(sizes[i]);
  }

  lp::LinearFeasibilityProblem problem;
  problem.variable_count = static_cast<std::uint32_t>(space);

  for (const auto& ctx : model.contexts) {
    std::vector<std::size_t> inside;
    for (const auto& name : ctx.measurements) {
      inside.push_back(static_cast<std::size_t>(model.measurement_index(name)));
    }
    std::vector<std::size_t> outside;
    for (std::size_t i = 0; i < count; ++i) {
      if (std::find(inside.begin(), inside.end(), i) == inside.end()) outside.push_back(i);
    }

    std::vector<int> inside_sizes, outside_sizes;
    for (auto i : inside) inside_sizes.push_back(sizes[i]);
    for (auto i : outside) outside_sizes.push_back(sizes[i]);

    OutcomeTuple t(inside.size(), 0);
    do {
      std::uint64_t base = 0;
      for (std::size_t p = 0; p < inside.size(); ++p) {
        base += static_cast<std::uint64_t>(t[p]) * weight[inside[p]];
      }

      lp::SparseRow row;
      OutcomeTuple u(outside.size(), 0);
      do {
        std::uint64_t var = base;
        for (std::size_t q = 0; q < outside.size(); ++q) {
          var += static_cast<std::uint64_t>(u[q]) * weight[outside[q]];
        }
        row.terms.emplace_back(static_cast<std::uint32_t>(var), Rational(1));
      } while (!outside.empty() && next_tuple(u, outside_sizes));

      std::sort(row.terms.begin(), row.terms.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      auto it = ctx.table.find(t);
      row.rhs = it == ctx.table.end() ? Rational(0) : it->second;
      problem.rows.push_back(std::move(row));
    } while (next_tuple(t, inside_sizes));
  }

  lp::SparseRow normalization;
  normalization.rhs = 1;
  for (std::uint64_t v = 0; v < space; ++v) {
    normalization.terms.emplace_back(static_cast<std::uint32_t>(v), Rational(1));
  }
  problem.rows.push_back(std::move(normalization));
  return problem;
}

GlobalSectionResult solve_global_section(const EmpiricalModel& model,
                                         std::uint64_t product_cap,
                                         const lp::SolveOptions& options) {
  SignallingReport sig = check_signalling(model);
  if (sig.is_signalling) {
    throw SignallingModelError(std::move(sig));
  }

  lp::LinearFeasibilityProblem problem = build_global_section_lp(model, product_cap);
  lp::FeasibilityResult solved = lp::solve_feasibility(problem, options);

  GlobalSectionResult result;
  result.pivot_count = solved.pivot_count;
  if (!solved.feasible()) {
    result.certificate = std::move(*solved.certificate);
    return result;
  }

  const std::size_t count = model.measurements.size();
  std::vector<int> sizes(count);
  for (std::size_t i = 0; i < count; ++i) {
    sizes[i] = static_cast<int>(model.measurements[i].outcomes.size());
  }

  GlobalSection section;
  const auto& x = solved.witness->values;
  for (std::uint32_t v = 0; v < x.size(); ++v) {
    if (x[v] == 0) continue;
    OutcomeTuple g(count, 0);
    std::uint64_t rest = v;
    for (std::size_t i = count; i-- > 0;) {
      g[i] = static_cast<int>(rest % static_cast<std::uint64_t>(sizes[i]));
      rest /= static_cast<std::uint64_t>(sizes[i]);
    }
    section.distribution.emplace(std::move(g), x[v]);
  }

  // Independent of the solver: re-derive each context's table from the
  // decoded distribution and insist on exact agreement.
  for (const auto& ctx : model.contexts) {
    std::vector<std::size_t> inside;
    for (const auto& name : ctx.measurements) {
      inside.push_back(static_cast<std::size_t>(model.measurement_index(name)));
    }
    std::map<OutcomeTuple, Rational> marg;
    for (const auto& [g, p] : section.distribution) {
      OutcomeTuple t(inside.size());
      for (std::size_t p2 = 0; p2 < inside.size(); ++p2) t[p2] = g[inside[p2]];
      marg[t] += p;
    }
    for (auto it = marg.begin(); it != marg.end();) {
      if (it->second == 0) {
        it = marg.erase(it);
      } else {
        ++it;
      }
    }
    std::map<OutcomeTuple, Rational> expected;
    for (const auto& [t, p] : ctx.table) {
      if (p != 0) expected.emplace(t, p);
    }
    if (marg != expected) {
      throw std::logic_error("internal error: global section fails to reproduce a context table");
    }
  }

  result.section = std::move(section);
  return result;
}

}  // namespace ctxkit::sheaf
