#include "ctxkit/model_io.hpp"

#include "ctxkit/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ctxkit {

namespace {

using ordered_json = nlohmann::ordered_json;

OutcomeTuple parse_tuple_key(const std::string& key) {
  OutcomeTuple tuple;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = key.find(',', start);
    std::string part = key.substr(start, comma == std::string::npos ? std::string::npos
                                                                    : comma - start);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("bad table key \"" + key + "\" (expected comma-separated outcome indices)");
    }
    tuple.push_back(std::stoi(part));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return tuple;
}

std::string tuple_key(const OutcomeTuple& tuple) {
  std::string key;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) key += ",";
    key += std::to_string(tuple[i]);
  }
  return key;
}

Rational parse_table_value(const ordered_json& value, const std::string& key) {
  if (value.is_string()) {
    return parse_rational(value.get<std::string>());
  }
  if (value.is_number_integer()) {
    return Rational(value.get<long long>());
  }
  throw ParseError("table entry \"" + key +
                   "\" must be an exact fraction string (decimals are not accepted)");
}

}  // namespace

EmpiricalModel parse_model(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }

  if (!doc.is_object()) throw ParseError("model document must be a JSON object");

  EmpiricalModel model;
  try {
    model.label = doc.value("label", std::string{});
    model.possibilistic = doc.value("possibilistic", false);

    if (!doc.contains("measurements") || !doc["measurements"].is_array()) {
      throw ParseError("missing \"measurements\" array");
    }
    for (const auto& jm : doc["measurements"]) {
      Measurement m;
      m.name = jm.at("name").get<std::string>();
      for (const auto& label : jm.at("outcomes")) {
        m.outcomes.push_back(label.get<std::string>());
      }
      model.measurements.push_back(std::move(m));
    }

    if (!doc.contains("contexts") || !doc["contexts"].is_array()) {
      throw ParseError("missing \"contexts\" array");
    }
    for (const auto& jc : doc["contexts"]) {
      Context ctx;
      for (const auto& name : jc.at("measurements")) {
        ctx.measurements.push_back(name.get<std::string>());
      }
      ctx.orientation = jc.value("orientation", std::string{});
      if (!jc.contains("table") || !jc.at("table").is_object()) {
        throw ParseError("context is missing its \"table\" object");
      }
      for (const auto& [key, value] : jc.at("table").items()) {
        ctx.table.emplace(parse_tuple_key(key), parse_table_value(value, key));
      }
      model.contexts.push_back(std::move(ctx));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model document has the wrong shape: ") + e.what());
  }

  if (model.possibilistic) {
    ValidationReport pre;
    for (std::size_t c = 0; c < model.contexts.size(); ++c) {
      for (const auto& [tuple, value] : model.contexts[c].table) {
        if (value < 0) {
          pre.issues.push_back({"contexts[" + std::to_string(c) + "].table",
                                "negative entry " + format_rational(value) +
                                    " in a possibilistic table"});
        }
      }
    }
    if (!pre.ok()) throw ValidationError(pre.to_string());
    // Indicator table -> uniform over support; label survives the round trip.
    model = uniform_lift(support_of(model));
  }

  ValidationReport report = validate(model);
  if (!report.ok()) throw ValidationError(report.to_string());
  return model;
}

EmpiricalModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_model(buffer.str());
  } catch (const Error& e) {
    throw;  // already one of ours; keep the type
  }
}

std::string model_to_json(const EmpiricalModel& model) {
  ordered_json doc;
  doc["label"] = model.label;
  if (model.possibilistic) doc["possibilistic"] = true;

  doc["measurements"] = ordered_json::array();
  for (const auto& m : model.measurements) {
    ordered_json jm;
    jm["name"] = m.name;
    jm["outcomes"] = m.outcomes;
    doc["measurements"].push_back(std::move(jm));
  }

  doc["contexts"] = ordered_json::array();
  for (const auto& ctx : model.contexts) {
    ordered_json jc;
    jc["measurements"] = ctx.measurements;
    if (!ctx.orientation.empty()) jc["orientation"] = ctx.orientation;
    ordered_json table = ordered_json::object();
    for (const auto& [tuple, value] : ctx.table) {
      if (value == 0) continue;  // canonical form keeps the table sparse
      table[tuple_key(tuple)] = model.possibilistic ? "1" : format_rational(value);
    }
    jc["table"] = std::move(table);
    doc["contexts"].push_back(std::move(jc));
  }

  return doc.dump(2) + "\n";
}

void save_model(const EmpiricalModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << model_to_json(model);
}

}  // namespace ctxkit
