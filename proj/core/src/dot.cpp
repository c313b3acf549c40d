#include "ctxkit/dot.hpp"

#include <set>
#include <sstream>
#include <tuple>

namespace ctxkit {

namespace {

std::string escaped(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string measurement_node(const std::string& name) { return "m:" + name; }

std::string outcome_node(const std::string& name, int outcome) {
  return "o:" + name + ":" + std::to_string(outcome);
}

}  // namespace

BundleDiagram bundle_dot(const EmpiricalModel& model, std::uint64_t product_cap) {
  if (model.contexts.empty()) {
    throw ShapeError("nothing to draw: the model has no contexts");
  }
  for (const auto& ctx : model.contexts) {
    if (ctx.measurements.size() != 2) {
      throw ShapeError("bundle diagrams need pair contexts; \"" + ctx.display_name() +
                       "\" has arity " + std::to_string(ctx.measurements.size()));
    }
  }

  BundleDiagram diagram;
  const PossibilisticModel poss = support_of(model);

  // (context, tuple) pairs that extend to no consistent global assignment.
  std::set<std::pair<std::size_t, OutcomeTuple>> red_tuples;
  std::set<std::pair<std::string, int>> red_outcomes;
  if (sheaf::check_support_signalling(poss).is_possibilistically_signalling) {
    diagram.marks_omitted = true;
  } else {
    const auto report = sheaf::check_logical_contextuality(poss, product_cap);
    for (const auto& bad : report.non_extendable_supports) {
      red_tuples.emplace(bad.context, bad.tuple);
      const auto& ctx = model.contexts[bad.context];
      for (std::size_t p = 0; p < bad.tuple.size(); ++p) {
        red_outcomes.emplace(ctx.measurements[p], bad.tuple[p]);
      }
    }
  }

  std::ostringstream out;
  out << "digraph \"" << escaped(model.label.empty() ? "bundle" : model.label) << "\" {\n";
  out << "  rankdir=BT;\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  out << "  edge [fontname=\"Helvetica\"];\n";
  if (diagram.marks_omitted) {
    out << "  // signalling model: extendability marks omitted\n";
  }

  out << "\n  // base layer: measurements and contexts\n";
  out << "  subgraph cluster_base {\n";
  out << "    label=\"contexts\";\n";
  out << "    style=dashed;\n";
  for (const auto& m : model.measurements) {
    out << "    \"" << escaped(measurement_node(m.name)) << "\" [shape=box, label=\""
        << escaped(m.name) << "\"];\n";
  }
  for (const auto& ctx : model.contexts) {
    out << "    \"" << escaped(measurement_node(ctx.measurements[0])) << "\" -> \""
        << escaped(measurement_node(ctx.measurements[1])) << "\"";
    if (ctx.orientation.empty()) {
      out << " [dir=none]";
    } else {
      out << " [label=\"" << escaped(ctx.orientation) << "\"]";
    }
    out << ";\n";
  }
  out << "  }\n";

  out << "\n  // fibre layer: outcomes and support tuples\n";
  for (const auto& m : model.measurements) {
    out << "  subgraph \"cluster_" << escaped(m.name) << "\" {\n";
    out << "    label=\"" << escaped(m.name) << "\";\n";
    for (int o = 0; o < static_cast<int>(m.outcomes.size()); ++o) {
      out << "    \"" << escaped(outcome_node(m.name, o)) << "\" [label=\""
          << escaped(m.outcomes[o]) << "\"";
      if (red_outcomes.count({m.name, o})) out << ", color=red, fontcolor=red";
      out << "];\n";
    }
    out << "  }\n";
  }

  for (std::size_t c = 0; c < model.contexts.size(); ++c) {
    const auto& ctx = model.contexts[c];
    for (const auto& [tuple, value] : ctx.table) {
      if (value == 0) continue;
      out << "  \"" << escaped(outcome_node(ctx.measurements[0], tuple[0])) << "\" -> \""
          << escaped(outcome_node(ctx.measurements[1], tuple[1])) << "\" [";
      out << (ctx.orientation.empty() ? "dir=none" : "dir=forward");
      if (red_tuples.count({c, tuple})) out << ", color=red, penwidth=2";
      out << "];\n";
    }
  }

  out << "}\n";
  diagram.dot = out.str();
  return diagram;
}

}  // namespace ctxkit
