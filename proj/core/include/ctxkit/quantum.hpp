#pragma once

#include "ctxkit/model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace ctxkit::quantum {

inline constexpr int max_total_dimension = 64;
inline constexpr double pvm_tolerance = 1e-9;
inline constexpr double rationalize_tolerance = 1e-9;
inline constexpr long long max_rational_denominator = 1000000;

struct StateVector {
  Eigen::VectorXcd amplitudes;  // party 0 varies slowest
  std::vector<int> party_dims;
};

struct ProjectiveMeasurement {
  std::string name;
  std::vector<Eigen::MatrixXcd> projectors;  // one per outcome, acting on one party
};

struct QuantumScenario {
  std::string label;
  StateVector state;
  // party -> its available measurements (order defines outcome labels "0", "1", ...)
  std::vector<std::vector<ProjectiveMeasurement>> party_measurements;
  // each context picks one measurement name per party, party order
  std::vector<std::vector<std::string>> contexts;
};

// Unit norm (within pvm_tolerance), dimensions multiply to the vector size,
// total dimension capped. Throws ValidationError / SizeCapError.
void validate_state(const StateVector& state);

// Hermitian, idempotent, mutually orthogonal, summing to the identity —
// all within pvm_tolerance. Throws ValidationError.
void validate_measurement(const ProjectiveMeasurement& measurement, int dim);

// Best small-denominator fraction within tol of x (continued-fraction
// convergents); falls back to a fixed decimal grid when the convergent
// denominators blow past den_cap. Throws RoundingError on non-finite input.
Rational rationalize(double x, double tol = rationalize_tolerance,
                     long long den_cap = max_rational_denominator);

// Raw Born-rule probabilities for one context (no rationalization), outcome
// tuples in lexicographic order, last party varying fastest.
std::vector<double> born_table(const StateVector& state,
                               const std::vector<ProjectiveMeasurement>& context_measurements);

// Builds the empirical model a state induces on the given contexts. Each
// measurement's marginal is rationalized once, globally, and bipartite
// context tables are completed so they reproduce those shared marginals
// exactly — the result is non-signalling by construction, not merely within
// float error. (Tables over three or more parties fall back to entrywise
// rounding with a total-mass repair.) Throws RoundingError when no exact
// completion stays within tolerance of the float table.
EmpiricalModel born_model(const StateVector& state,
                          const std::vector<std::vector<ProjectiveMeasurement>>& party_measurements,
                          const std::vector<std::vector<std::string>>& contexts,
                          const std::string& label = "");
EmpiricalModel born_model(const QuantumScenario& scenario);

QuantumScenario parse_scenario(const std::string& json_text);
QuantumScenario load_scenario(const std::filesystem::path& path);

}  // namespace ctxkit::quantum
