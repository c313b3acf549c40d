#include "ctxkit/analysis.hpp"

#include <json.hpp>

#include <chrono>
#include <sstream>

namespace ctxkit {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json tuple_json(const OutcomeTuple& tuple) {
  ordered_json arr = ordered_json::array();
  for (int o : tuple) arr.push_back(o);
  return arr;
}

ordered_json signalling_json(const sheaf::SignallingReport& report) {
  ordered_json j;
  j["is_signalling"] = report.is_signalling;
  j["is_possibilistically_signalling"] = report.is_possibilistically_signalling;
  j["violations"] = ordered_json::array();
  for (const auto& v : report.violations) {
    ordered_json jv;
    jv["measurement"] = v.measurement;
    jv["outcome"] = v.outcome;
    jv["context_first"] = v.context_first;
    jv["context_second"] = v.context_second;
    jv["probability_first"] = format_rational(v.probability_first);
    jv["probability_second"] = format_rational(v.probability_second);
    j["violations"].push_back(std::move(jv));
  }
  j["possibilistic_violations"] = ordered_json::array();
  for (const auto& v : report.possibilistic_violations) {
    ordered_json jv;
    jv["measurement"] = v.measurement;
    jv["outcome"] = v.outcome;
    jv["context_first"] = v.context_first;
    jv["context_second"] = v.context_second;
    jv["possible_first"] = v.possible_first;
    jv["possible_second"] = v.possible_second;
    j["possibilistic_violations"].push_back(std::move(jv));
  }
  return j;
}

ordered_json logical_json(const sheaf::LogicalContextualityReport& report) {
  ordered_json j;
  j["is_logically_contextual"] = report.is_logically_contextual;
  j["is_strongly_contextual"] = report.is_strongly_contextual;
  j["consistent_global_assignments"] = ordered_json::array();
  for (const auto& g : report.consistent_global_assignments) {
    j["consistent_global_assignments"].push_back(tuple_json(g));
  }
  j["non_extendable_supports"] = ordered_json::array();
  for (const auto& s : report.non_extendable_supports) {
    ordered_json js;
    js["context"] = s.context;
    js["tuple"] = tuple_json(s.tuple);
    j["non_extendable_supports"].push_back(std::move(js));
  }
  j["non_extendable_sections"] = ordered_json::array();
  for (const auto& s : report.non_extendable_sections) {
    ordered_json js;
    js["context"] = s.context;
    js["measurement"] = s.measurement;
    js["outcome"] = s.outcome;
    j["non_extendable_sections"].push_back(std::move(js));
  }
  return j;
}

ordered_json cyclic2_json_impl(const cbd::Cyclic2Report& report) {
  ordered_json j;
  j["expectation_a"] = {format_rational(report.expectation_a[0]),
                        format_rational(report.expectation_a[1])};
  j["expectation_b"] = {format_rational(report.expectation_b[0]),
                        format_rational(report.expectation_b[1])};
  j["expectation_ab"] = {format_rational(report.expectation_ab[0]),
                         format_rational(report.expectation_ab[1])};
  j["delta"] = format_rational(report.delta);
  j["d"] = format_rational(report.d_value);
  j["contextual"] = report.contextual;
  j["measure"] = format_rational(report.measure);
  return j;
}

ordered_json cbd_json(const cbd::CbdVerdict& verdict) {
  ordered_json j;
  j["contextual"] = verdict.contextual;
  j["variable_count"] = verdict.variable_count;
  j["atom_count"] = verdict.atom_count;
  j["constraint_count"] = verdict.constraint_count;
  j["connection_count"] = verdict.connection_count;
  j["pivot_count"] = verdict.pivot_count;
  if (verdict.witness) {
    ordered_json w = ordered_json::object();
    for (const auto& [atom, value] : *verdict.witness) {
      w[std::to_string(atom)] = format_rational(value);
    }
    j["witness"] = std::move(w);
    j["certificate"] = nullptr;
  } else {
    j["witness"] = nullptr;
    ordered_json c = ordered_json::array();
    for (const auto& y : verdict.certificate->row_multipliers) {
      c.push_back(format_rational(y));
    }
    j["certificate"] = std::move(c);
  }
  return j;
}

}  // namespace

AnalysisReport analyze(const EmpiricalModel& model, const AnalysisOptions& options) {
  AnalysisReport report;
  report.label = model.label;
  report.possibilistic = model.possibilistic;

  using clock = std::chrono::steady_clock;
  auto timed = [&](const char* stage, auto&& body) {
    const auto start = clock::now();
    body();
    const auto stop = clock::now();
    report.timings.push_back(
        {stage, std::chrono::duration<double, std::milli>(stop - start).count()});
  };

  timed("validation", [&] { report.validation = validate(model); });
  if (!report.validation.ok()) return report;

  timed("signalling", [&] { report.signalling = sheaf::check_signalling(model); });

  timed("sheaf", [&] {
    if (report.signalling->is_possibilistically_signalling) {
      report.logical_skip_reason =
          "model is signalling at the support level; extendability is undefined";
      return;
    }
    try {
      report.logical = sheaf::check_logical_contextuality(support_of(model),
                                                          options.product_cap);
    } catch (const SizeCapError& e) {
      report.logical_skip_reason = e.what();
      report.hit_resource_cap = true;
    }
  });

  timed("closed_form", [&] {
    if (cbd::cyclic2_shaped(model)) {
      report.cyclic2 = cbd::cyclic2_analyze(model);
    } else {
      report.cyclic2_skip_reason =
          "model is not two contexts over one shared pair of binary measurements";
    }
  });

  timed("coupling_lp", [&] {
    try {
      report.cbd_verdict =
          cbd::check_cbd_contextuality(model, options.cbd_variable_cap, options.lp_options);
    } catch (const SizeCapError& e) {
      report.cbd_skip_reason = e.what();
      report.hit_resource_cap = true;
    } catch (const ResourceLimitError& e) {
      report.cbd_skip_reason = e.what();
      report.hit_resource_cap = true;
    }
  });

  return report;
}

std::string report_to_text(const AnalysisReport& report) {
  std::ostringstream out;
  out << "model: " << (report.label.empty() ? "(unlabelled)" : report.label)
      << (report.possibilistic ? " (possibilistic)" : "") << "\n";

  if (!report.validation.ok()) {
    out << "validation: " << report.validation.issues.size() << " issue(s)\n";
    for (const auto& issue : report.validation.issues) {
      out << "  " << issue.where << ": " << issue.what << "\n";
    }
    return out.str();
  }
  out << "validation: ok\n";

  if (report.signalling) {
    const auto& sig = *report.signalling;
    if (!sig.is_signalling && !sig.is_possibilistically_signalling) {
      out << "signalling: no\n";
    } else {
      out << "signalling: yes (" << sig.violations.size() << " marginal, "
          << sig.possibilistic_violations.size() << " support-level)\n";
      for (const auto& v : sig.violations) {
        out << "  " << v.measurement << "=" << v.outcome << ": "
            << format_rational(v.probability_first) << " in contexts[" << v.context_first
            << "] vs " << format_rational(v.probability_second) << " in contexts["
            << v.context_second << "]\n";
      }
    }
  }

  if (report.logical) {
    const auto& log = *report.logical;
    out << "sheaf analysis: ";
    if (log.is_strongly_contextual) {
      out << "strongly contextual";
    } else if (log.is_logically_contextual) {
      out << "logically contextual";
    } else {
      out << "not logically contextual";
    }
    out << " (" << log.consistent_global_assignments.size()
        << " consistent global assignment(s))\n";
    for (const auto& s : log.non_extendable_supports) {
      out << "  non-extendable in contexts[" << s.context << "]: (";
      for (std::size_t p = 0; p < s.tuple.size(); ++p) {
        out << (p ? ", " : "") << s.tuple[p];
      }
      out << ")\n";
    }
    for (const auto& s : report.logical->non_extendable_sections) {
      out << "  section " << s.measurement << "=" << s.outcome << " in contexts[" << s.context
          << "] extends to no global assignment\n";
    }
  } else if (!report.logical_skip_reason.empty()) {
    out << "sheaf analysis: skipped — " << report.logical_skip_reason << "\n";
  }

  if (report.cyclic2) {
    out << "closed form: " << cyclic2_to_text(*report.cyclic2);
  } else if (!report.cyclic2_skip_reason.empty()) {
    out << "closed form: skipped — " << report.cyclic2_skip_reason << "\n";
  }

  if (report.cbd_verdict) {
    const auto& v = *report.cbd_verdict;
    out << "coupling LP: " << (v.contextual ? "contextual" : "not contextual") << " ("
        << v.variable_count << " binary variables, " << v.atom_count << " atoms, "
        << v.constraint_count << " constraints, " << v.connection_count
        << " connections)\n";
  } else if (!report.cbd_skip_reason.empty()) {
    out << "coupling LP: skipped — " << report.cbd_skip_reason << "\n";
  }

  out << "timings:";
  for (std::size_t i = 0; i < report.timings.size(); ++i) {
    out << (i ? "; " : " ") << report.timings[i].stage << " ";
    out.setf(std::ios::fixed);
    out.precision(2);
    out << report.timings[i].milliseconds << " ms";
  }
  out << "\n";
  return out.str();
}

std::string report_to_json(const AnalysisReport& report) {
  ordered_json j;
  j["label"] = report.label;
  j["possibilistic"] = report.possibilistic;

  j["validation"] = ordered_json::object();
  j["validation"]["ok"] = report.validation.ok();
  j["validation"]["issues"] = ordered_json::array();
  for (const auto& issue : report.validation.issues) {
    ordered_json ji;
    ji["where"] = issue.where;
    ji["what"] = issue.what;
    j["validation"]["issues"].push_back(std::move(ji));
  }

  j["signalling"] = report.signalling ? signalling_json(*report.signalling)
                                      : ordered_json(nullptr);

  if (report.logical) {
    j["sheaf"] = logical_json(*report.logical);
  } else {
    j["sheaf"] = nullptr;
    if (!report.logical_skip_reason.empty()) {
      j["sheaf_skip_reason"] = report.logical_skip_reason;
    }
  }

  if (report.cyclic2) {
    j["closed_form"] = cyclic2_json_impl(*report.cyclic2);
  } else {
    j["closed_form"] = nullptr;
    if (!report.cyclic2_skip_reason.empty()) {
      j["closed_form_skip_reason"] = report.cyclic2_skip_reason;
    }
  }

  if (report.cbd_verdict) {
    j["coupling_lp"] = cbd_json(*report.cbd_verdict);
  } else {
    j["coupling_lp"] = nullptr;
    if (!report.cbd_skip_reason.empty()) {
      j["coupling_lp_skip_reason"] = report.cbd_skip_reason;
    }
  }

  j["hit_resource_cap"] = report.hit_resource_cap;
  j["timings"] = ordered_json::array();
  for (const auto& t : report.timings) {
    ordered_json jt;
    jt["stage"] = t.stage;
    jt["milliseconds"] = t.milliseconds;
    j["timings"].push_back(std::move(jt));
  }
  return j.dump(2) + "\n";
}

std::string cyclic2_to_text(const cbd::Cyclic2Report& report) {
  std::ostringstream out;
  out << (report.contextual ? "contextual" : "not contextual")
      << "; measure = " << format_rational(report.measure)
      << " (d = " << format_rational(report.d_value)
      << ", delta = " << format_rational(report.delta) << ")\n";
  return out.str();
}

std::string cyclic2_to_json(const cbd::Cyclic2Report& report) {
  return cyclic2_json_impl(report).dump(2) + "\n";
}

std::string bootstrap_to_json(const bootstrap::BootstrapResult& result,
                              const bootstrap::SampleSizePlan& plan) {
  ordered_json j;
  j["resamples"] = result.resample_count;
  j["noncontextual_count"] = result.noncontextual_count;
  j["noncontextual_fraction"] = format_rational(result.noncontextual_fraction);
  j["noncontextual_fraction_approx"] = to_double(result.noncontextual_fraction);
  j["confidence_interval"] = ordered_json::object();
  j["confidence_interval"]["level"] = result.confidence_interval.level;
  j["confidence_interval"]["low"] = result.confidence_interval.low;
  j["confidence_interval"]["high"] = result.confidence_interval.high;
  j["seed"] = result.seed;
  j["sample_sizes"] = plan.sizes;
  j["sample_sizes_provenance"] =
      plan.provenance == bootstrap::SampleSizePlan::Provenance::inferred_lcd
          ? "inferred_lcd"
          : "user_supplied";
  return j.dump(2) + "\n";
}

}  // namespace ctxkit
