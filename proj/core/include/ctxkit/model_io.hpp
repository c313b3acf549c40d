#pragma once

#include "ctxkit/model.hpp"

#include <filesystem>
#include <string>

namespace ctxkit {

// Parses a model document and validates it. Files flagged "possibilistic"
// carry indicator tables (any positive entry means "possible"); they are
// lifted to the uniform distribution over each context's support on load.
// Throws ParseError on malformed text and ValidationError (with the full
// violation listing) on a structurally broken model.
EmpiricalModel parse_model(const std::string& json_text);
EmpiricalModel load_model(const std::filesystem::path& path);

// Canonical serialization: zero entries dropped, fractions in lowest terms,
// insertion order preserved. Possibilistic models are written back as
// indicator tables, so save/load round-trips are exact.
std::string model_to_json(const EmpiricalModel& model);
void save_model(const EmpiricalModel& model, const std::filesystem::path& path);

}  // namespace ctxkit
