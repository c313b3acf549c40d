#include "ctxkit/quantum.hpp"

#include "ctxkit/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace ctxkit::quantum {

namespace {

using Matrix = Eigen::MatrixXcd;
using ordered_json = nlohmann::ordered_json;

// Guard for the completed exact tables: generous against accumulated
// rounding, tight enough to expose inputs that were not clean projectors.
constexpr double completion_tolerance = 1e-6;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Expectation of (I x ... x op_at_party x ... x I) in the state.
double local_expectation(const StateVector& state, std::size_t party, const Matrix& op) {
  Matrix full = Matrix::Identity(1, 1);
  for (std::size_t p = 0; p < state.party_dims.size(); ++p) {
    if (p == party) {
      full = kron(full, op);
    } else {
      full = kron(full, Matrix::Identity(state.party_dims[p], state.party_dims[p]));
    }
  }
  return std::real(state.amplitudes.dot(full * state.amplitudes));
}

std::vector<double> party_marginal(const StateVector& state, std::size_t party,
                                   const ProjectiveMeasurement& m) {
  std::vector<double> probs;
  probs.reserve(m.projectors.size());
  for (const auto& projector : m.projectors) {
    probs.push_back(local_expectation(state, party, projector));
  }
  return probs;
}

// Rationalize a probability vector so it sums to exactly 1: round each entry
// by continued fractions, then absorb the leftover into the largest entry.
std::vector<Rational> rationalize_distribution(const std::vector<double>& probs,
                                               const std::string& what) {
  std::vector<Rational> out;
  out.reserve(probs.size());
  for (double p : probs) out.push_back(rationalize(p));

  Rational sum(0);
  for (const auto& r : out) sum += r;
  if (sum != 1) {
    std::size_t largest = 0;
    for (std::size_t i = 1; i < out.size(); ++i) {
      if (out[i] > out[largest]) largest = i;
    }
    out[largest] += Rational(1) - sum;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0 || std::abs(to_double(out[i]) - probs[i]) > completion_tolerance) {
      throw RoundingError("cannot rationalize " + what +
                          " within tolerance; entry " + std::to_string(i) +
                          " drifted from " + std::to_string(probs[i]));
    }
  }
  return out;
}

}  // namespace

void validate_state(const StateVector& state) {
  if (state.party_dims.empty()) {
    throw ValidationError("state needs at least one party");
  }
  long long product = 1;
  for (int d : state.party_dims) {
    if (d < 1) throw ValidationError("party dimensions must be positive");
    product *= d;
    if (product > max_total_dimension) {
      throw SizeCapError("total dimension exceeds the cap of " +
                         std::to_string(max_total_dimension));
    }
  }
  if (state.amplitudes.size() != product) {
    throw ValidationError("amplitude vector has length " +
                          std::to_string(state.amplitudes.size()) + ", expected " +
                          std::to_string(product));
  }
  if (std::abs(state.amplitudes.norm() - 1.0) > pvm_tolerance) {
    throw ValidationError("state vector is not normalized (norm " +
                          std::to_string(state.amplitudes.norm()) + ")");
  }
}

void validate_measurement(const ProjectiveMeasurement& measurement, int dim) {
  if (measurement.projectors.empty()) {
    throw ValidationError("measurement \"" + measurement.name + "\" has no projectors");
  }
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < measurement.projectors.size(); ++i) {
    const Matrix& p = measurement.projectors[i];
    if (p.rows() != dim || p.cols() != dim) {
      throw ValidationError("projector " + std::to_string(i) + " of \"" + measurement.name +
                            "\" is not " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    if (max_abs(p - p.adjoint()) > pvm_tolerance) {
      throw ValidationError("projector " + std::to_string(i) + " of \"" + measurement.name +
                            "\" is not Hermitian");
    }
    if (max_abs(p * p - p) > pvm_tolerance) {
      throw ValidationError("projector " + std::to_string(i) + " of \"" + measurement.name +
                            "\" is not idempotent");
    }
    for (std::size_t j = i + 1; j < measurement.projectors.size(); ++j) {
      if (max_abs(p * measurement.projectors[j]) > pvm_tolerance) {
        throw ValidationError("projectors " + std::to_string(i) + " and " + std::to_string(j) +
                              " of \"" + measurement.name + "\" are not orthogonal");
      }
    }
    sum += p;
  }
  if (max_abs(sum - Matrix::Identity(dim, dim)) > pvm_tolerance) {
    throw ValidationError("projectors of \"" + measurement.name +
                          "\" do not sum to the identity");
  }
}

Rational rationalize(double x, double tol, long long den_cap) {
  if (!std::isfinite(x)) throw RoundingError("cannot rationalize a non-finite value");
  if (std::abs(x) <= tol) return Rational(0);
  if (x < 0) return Rational(-rationalize(-x, tol, den_cap));

  // Continued-fraction convergents p/q with the usual two-term recurrence.
  Integer p_prev2 = 0, p_prev1 = 1;
  Integer q_prev2 = 1, q_prev1 = 0;
  double value = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(value);
    if (fl > 9e17) break;
    const Integer a = static_cast<long long>(fl);
    Integer p = a * p_prev1 + p_prev2;
    Integer q = a * q_prev1 + q_prev2;
    if (q > den_cap) break;
    Rational convergent(p, q);
    if (std::abs(to_double(convergent) - x) <= tol) return convergent;
    p_prev2 = std::move(p_prev1);
    p_prev1 = std::move(p);
    q_prev2 = std::move(q_prev1);
    q_prev1 = std::move(q);
    const double frac = value - fl;
    if (frac < 1e-18) break;
    value = 1.0 / frac;
  }

  // Decimal fallback: snap to the nearest multiple of 10^-9.
  if (std::abs(x) > 9e8) {
    throw RoundingError("value too large for the decimal fallback");
  }
  return Rational(Integer(std::llround(x * 1e9)), Integer(1000000000));
}

std::vector<double> born_table(const StateVector& state,
                               const std::vector<ProjectiveMeasurement>& context_measurements) {
  if (context_measurements.size() != state.party_dims.size()) {
    throw ValidationError("context must pick exactly one measurement per party");
  }

  std::vector<int> sizes;
  sizes.reserve(context_measurements.size());
  for (const auto& m : context_measurements) {
    if (m.projectors.empty()) {
      throw ValidationError("measurement \"" + m.name + "\" has no projectors");
    }
    sizes.push_back(static_cast<int>(m.projectors.size()));
  }

  std::vector<double> table;
  std::vector<int> tuple(sizes.size(), 0);
  while (true) {
    Matrix op = Matrix::Identity(1, 1);
    for (std::size_t p = 0; p < tuple.size(); ++p) {
      op = kron(op, context_measurements[p].projectors[static_cast<std::size_t>(tuple[p])]);
    }
    table.push_back(std::real(state.amplitudes.dot(op * state.amplitudes)));

    std::size_t i = tuple.size();
    while (i-- > 0) {
      if (++tuple[i] < sizes[i]) break;
      tuple[i] = 0;
      if (i == 0) return table;
    }
  }
}

EmpiricalModel born_model(const StateVector& state,
                          const std::vector<std::vector<ProjectiveMeasurement>>& party_measurements,
                          const std::vector<std::vector<std::string>>& contexts,
                          const std::string& label) {
  validate_state(state);
  if (party_measurements.size() != state.party_dims.size()) {
    throw ValidationError("expected one measurement list per party");
  }

  std::map<std::pair<std::size_t, std::string>, const ProjectiveMeasurement*> by_name;
  for (std::size_t p = 0; p < party_measurements.size(); ++p) {
    for (const auto& m : party_measurements[p]) {
      validate_measurement(m, state.party_dims[p]);
      if (!by_name.emplace(std::make_pair(p, m.name), &m).second) {
        throw ValidationError("party " + std::to_string(p) + " declares measurement \"" +
                              m.name + "\" twice");
      }
    }
  }

  EmpiricalModel model;
  model.label = label;
  for (std::size_t p = 0; p < party_measurements.size(); ++p) {
    for (const auto& m : party_measurements[p]) {
      Measurement out;
      out.name = m.name;
      for (std::size_t o = 0; o < m.projectors.size(); ++o) {
        out.outcomes.push_back(std::to_string(o));
      }
      model.measurements.push_back(std::move(out));
    }
  }
  {
    ValidationReport structural = validate(model);
    if (!structural.ok()) throw ValidationError(structural.to_string());
  }

  // One exact marginal per (party, measurement), shared by all contexts.
  std::map<std::pair<std::size_t, std::string>, std::vector<Rational>> shared_marginal;
  for (std::size_t p = 0; p < party_measurements.size(); ++p) {
    for (const auto& m : party_measurements[p]) {
      shared_marginal[{p, m.name}] = rationalize_distribution(
          party_marginal(state, p, m), "the marginal of \"" + m.name + "\"");
    }
  }

  for (const auto& picks : contexts) {
    if (picks.size() != party_measurements.size()) {
      throw ValidationError("context must pick exactly one measurement per party");
    }
    std::vector<ProjectiveMeasurement> ms;
    for (std::size_t p = 0; p < picks.size(); ++p) {
      auto it = by_name.find({p, picks[p]});
      if (it == by_name.end()) {
        throw ValidationError("party " + std::to_string(p) + " has no measurement \"" +
                              picks[p] + "\"");
      }
      ms.push_back(*it->second);
    }

    const std::vector<double> floats = born_table(state, ms);

    Context ctx;
    ctx.measurements = picks;

    auto check_entry = [&](const Rational& value, double target, const OutcomeTuple& t) {
      if (value < 0 || std::abs(to_double(value) - target) > completion_tolerance) {
        std::string key;
        for (std::size_t i = 0; i < t.size(); ++i) {
          key += (i ? "," : "") + std::to_string(t[i]);
        }
        throw RoundingError("no exact completion within tolerance at entry (" + key + ")");
      }
    };

    if (picks.size() == 1) {
      const auto& mu = shared_marginal.at({0, picks[0]});
      for (std::size_t o = 0; o < mu.size(); ++o) {
        check_entry(mu[o], floats[o], {static_cast<int>(o)});
        if (mu[o] != 0) ctx.table.emplace(OutcomeTuple{static_cast<int>(o)}, mu[o]);
      }
    } else if (picks.size() == 2) {
      // Fix the interior block by continued fractions and complete the last
      // row and column from the shared marginals. The corner is consistent
      // because both marginals sum to exactly one.
      const auto& mu1 = shared_marginal.at({0, picks[0]});
      const auto& mu2 = shared_marginal.at({1, picks[1]});
      const std::size_t k1 = mu1.size(), k2 = mu2.size();
      std::vector<std::vector<Rational>> r(k1, std::vector<Rational>(k2, Rational(0)));

      for (std::size_t i = 0; i + 1 < k1; ++i) {
        for (std::size_t j = 0; j + 1 < k2; ++j) {
          r[i][j] = rationalize(floats[i * k2 + j]);
        }
      }
      for (std::size_t i = 0; i + 1 < k1; ++i) {
        Rational row_rest = mu1[i];
        for (std::size_t j = 0; j + 1 < k2; ++j) row_rest -= r[i][j];
        r[i][k2 - 1] = std::move(row_rest);
      }
      for (std::size_t j = 0; j + 1 < k2; ++j) {
        Rational col_rest = mu2[j];
        for (std::size_t i = 0; i + 1 < k1; ++i) col_rest -= r[i][j];
        r[k1 - 1][j] = std::move(col_rest);
      }
      Rational corner = mu1[k1 - 1];
      for (std::size_t j = 0; j + 1 < k2; ++j) corner -= r[k1 - 1][j];
      r[k1 - 1][k2 - 1] = corner;
      {
        Rational check = mu2[k2 - 1];
        for (std::size_t i = 0; i + 1 < k1; ++i) check -= r[i][k2 - 1];
        if (check != corner) {
          throw std::logic_error("internal error: inconsistent table completion corner");
        }
      }

      for (std::size_t i = 0; i < k1; ++i) {
        for (std::size_t j = 0; j < k2; ++j) {
          const OutcomeTuple t{static_cast<int>(i), static_cast<int>(j)};
          check_entry(r[i][j], floats[i * k2 + j], t);
          if (r[i][j] != 0) ctx.table.emplace(t, r[i][j]);
        }
      }
    } else {
      // Higher arity: entrywise rounding with a total-mass repair.
      std::vector<int> sizes;
      for (const auto& m : ms) sizes.push_back(static_cast<int>(m.projectors.size()));
      std::vector<Rational> values = rationalize_distribution(
          floats, "the table of context " + ctx.display_name());
      OutcomeTuple t(sizes.size(), 0);
      for (std::size_t flat = 0; flat < values.size(); ++flat) {
        if (values[flat] != 0) ctx.table.emplace(t, values[flat]);
        for (std::size_t i = t.size(); i-- > 0;) {
          if (++t[i] < sizes[i]) break;
          t[i] = 0;
        }
      }
    }

    model.contexts.push_back(std::move(ctx));
  }

  ValidationReport report = validate(model);
  if (!report.ok()) {
    throw std::logic_error("internal error: generated model failed validation:\n" +
                           report.to_string());
  }
  return model;
}

EmpiricalModel born_model(const QuantumScenario& scenario) {
  return born_model(scenario.state, scenario.party_measurements, scenario.contexts,
                    scenario.label);
}

namespace {

std::complex<double> parse_complex(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("complex numbers must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Matrix parse_matrix(const ordered_json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ParseError("matrix rows must be non-empty arrays");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw ParseError("matrix rows must all have the same length");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = parse_complex(j[i][k]);
    }
  }
  return m;
}

}  // namespace

QuantumScenario parse_scenario(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario document must be a JSON object");

  QuantumScenario scenario;
  try {
    scenario.label = doc.value("label", std::string{});

    const auto& jstate = doc.at("state");
    for (const auto& d : jstate.at("party_dims")) {
      scenario.state.party_dims.push_back(d.get<int>());
    }
    const auto& jamp = jstate.at("amplitudes");
    scenario.state.amplitudes.resize(static_cast<Eigen::Index>(jamp.size()));
    for (std::size_t i = 0; i < jamp.size(); ++i) {
      scenario.state.amplitudes(static_cast<Eigen::Index>(i)) = parse_complex(jamp[i]);
    }

    for (const auto& jparty : doc.at("parties")) {
      std::vector<ProjectiveMeasurement> ms;
      for (const auto& jm : jparty.at("measurements")) {
        ProjectiveMeasurement m;
        m.name = jm.at("name").get<std::string>();
        for (const auto& jp : jm.at("projectors")) {
          m.projectors.push_back(parse_matrix(jp));
        }
        ms.push_back(std::move(m));
      }
      scenario.party_measurements.push_back(std::move(ms));
    }

    for (const auto& jc : doc.at("contexts")) {
      std::vector<std::string> picks;
      for (const auto& name : jc) picks.push_back(name.get<std::string>());
      scenario.contexts.push_back(std::move(picks));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario document has the wrong shape: ") + e.what());
  }

  validate_state(scenario.state);
  if (scenario.party_measurements.size() != scenario.state.party_dims.size()) {
    throw ValidationError("expected one measurement list per party");
  }
  for (std::size_t p = 0; p < scenario.party_measurements.size(); ++p) {
    for (const auto& m : scenario.party_measurements[p]) {
      validate_measurement(m, scenario.state.party_dims[p]);
    }
  }
  return scenario;
}

QuantumScenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace ctxkit::quantum
