#include "ctxkit/model.hpp"

#include <algorithm>
#include <sstream>

namespace ctxkit {

namespace {

std::string join_names(const std::vector<std::string>& names, const std::string& orientation) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ",";
    out += names[i];
  }
  if (!orientation.empty()) {
    out += "[" + orientation + "]";
  }
  return out;
}

int position_in(const std::vector<std::string>& names, std::string_view measurement) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == measurement) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

int Context::position_of(std::string_view measurement) const {
  return position_in(measurements, measurement);
}

std::string Context::display_name() const {
  return join_names(measurements, orientation);
}

int SupportContext::position_of(std::string_view measurement) const {
  return position_in(measurements, measurement);
}

std::string SupportContext::display_name() const {
  return join_names(measurements, orientation);
}

int EmpiricalModel::measurement_index(std::string_view name) const {
  for (std::size_t i = 0; i < measurements.size(); ++i) {
    if (measurements[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const Measurement* EmpiricalModel::find_measurement(std::string_view name) const {
  int idx = measurement_index(name);
  return idx < 0 ? nullptr : &measurements[idx];
}

int PossibilisticModel::measurement_index(std::string_view name) const {
  for (std::size_t i = 0; i < measurements.size(); ++i) {
    if (measurements[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& issue : issues) {
    out << issue.where << ": " << issue.what << "\n";
  }
  return out.str();
}

ValidationReport validate(const EmpiricalModel& model) {
  ValidationReport report;
  auto flag = [&](std::string where, std::string what) {
    report.issues.push_back({std::move(where), std::move(what)});
  };

  std::set<std::string> seen_names;
  for (std::size_t i = 0; i < model.measurements.size(); ++i) {
    const auto& m = model.measurements[i];
    const std::string where = "measurements[" + std::to_string(i) + "]";
    if (m.name.empty()) flag(where, "empty measurement name");
    if (!seen_names.insert(m.name).second) {
      flag(where, "duplicate measurement name \"" + m.name + "\"");
    }
    if (m.outcomes.empty()) {
      flag(where, "measurement \"" + m.name + "\" has no outcomes");
    }
    std::set<std::string> seen_outcomes;
    for (std::size_t o = 0; o < m.outcomes.size(); ++o) {
      if (!seen_outcomes.insert(m.outcomes[o]).second) {
        flag(where, "duplicate outcome label \"" + m.outcomes[o] + "\"");
      }
    }
  }

  // (sorted measurement set, orientation) -> first context index
  std::map<std::pair<std::vector<std::string>, std::string>, std::size_t> seen_contexts;
  for (std::size_t c = 0; c < model.contexts.size(); ++c) {
    const auto& ctx = model.contexts[c];
    const std::string where = "contexts[" + std::to_string(c) + "]";
    if (ctx.measurements.empty()) {
      flag(where, "context with no measurements");
      continue;
    }

    bool names_ok = true;
    std::set<std::string> in_context;
    for (const auto& name : ctx.measurements) {
      if (model.measurement_index(name) < 0) {
        flag(where, "unknown measurement \"" + name + "\"");
        names_ok = false;
      }
      if (!in_context.insert(name).second) {
        flag(where, "measurement \"" + name + "\" repeated within the context");
        names_ok = false;
      }
    }

    std::vector<std::string> sorted = ctx.measurements;
    std::sort(sorted.begin(), sorted.end());
    auto key = std::make_pair(std::move(sorted), ctx.orientation);
    auto [it, inserted] = seen_contexts.emplace(key, c);
    if (!inserted) {
      flag(where, "duplicate of contexts[" + std::to_string(it->second) +
                      "] (same measurement set and orientation)");
    }

    const std::string table_where = where + ".table";
    Rational sum = 0;
    for (const auto& [tuple, value] : ctx.table) {
      if (tuple.size() != ctx.measurements.size()) {
        flag(table_where, "tuple arity " + std::to_string(tuple.size()) +
                              " does not match context arity " +
                              std::to_string(ctx.measurements.size()));
        continue;
      }
      if (names_ok) {
        for (std::size_t p = 0; p < tuple.size(); ++p) {
          const auto* m = model.find_measurement(ctx.measurements[p]);
          if (tuple[p] < 0 || (m && tuple[p] >= static_cast<int>(m->outcomes.size()))) {
            flag(table_where, "outcome index " + std::to_string(tuple[p]) +
                                  " out of range for \"" + ctx.measurements[p] + "\"");
          }
        }
      }
      if (value < 0 || value > 1) {
        flag(table_where, "entry " + format_rational(value) + " outside [0, 1]");
      }
      sum += value;
    }
    if (sum != 1) {
      flag(table_where, "probabilities sum to " + format_rational(sum) + ", not 1");
    }
  }

  return report;
}

PossibilisticModel support_of(const EmpiricalModel& model) {
  PossibilisticModel poss;
  poss.label = model.label;
  poss.measurements = model.measurements;
  poss.contexts.reserve(model.contexts.size());
  for (const auto& ctx : model.contexts) {
    SupportContext sc;
    sc.measurements = ctx.measurements;
    sc.orientation = ctx.orientation;
    for (const auto& [tuple, value] : ctx.table) {
      if (value > 0) sc.support.insert(tuple);
    }
    poss.contexts.push_back(std::move(sc));
  }
  return poss;
}

EmpiricalModel uniform_lift(const PossibilisticModel& poss) {
  EmpiricalModel model;
  model.label = poss.label;
  model.possibilistic = true;
  model.measurements = poss.measurements;
  model.contexts.reserve(poss.contexts.size());
  for (const auto& sc : poss.contexts) {
    Context ctx;
    ctx.measurements = sc.measurements;
    ctx.orientation = sc.orientation;
    if (!sc.support.empty()) {
      const Rational weight(1, static_cast<unsigned long>(sc.support.size()));
      for (const auto& tuple : sc.support) {
        ctx.table.emplace(tuple, weight);
      }
    }
    model.contexts.push_back(std::move(ctx));
  }
  return model;
}

}  // namespace ctxkit
