#pragma once

#include "ctxkit/model.hpp"

#include <cstdint>
#include <vector>

namespace ctxkit::bootstrap {

// 64-bit finalizer (splitmix64 style): bijective, well-mixed.
std::uint64_t mix64(std::uint64_t z);

// Counter-based generator: draw i of stream k is mix64(k + i * golden ratio).
// Streams never overlap, so resamples can be tallied in any order or in
// parallel without changing a single draw.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  std::uint64_t next();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// The stream for one resample; distinct per (seed, resample index).
CounterRng resample_stream(std::uint64_t seed, std::uint64_t resample_index);

// True with probability exactly p (compares one 64-bit draw against p
// scaled by 2^64, in integer arithmetic). Requires 0 <= p <= 1.
bool bernoulli(CounterRng& rng, const Rational& p);

// One count per category; exact distribution via sequential binomial
// conditioning, each binomial drawn as a sum of exact Bernoulli trials.
std::vector<std::uint64_t> multinomial(CounterRng& rng, std::uint64_t trials,
                                       const std::vector<Rational>& probabilities);

struct SampleSizePlan {
  enum class Provenance { inferred_lcd, user_supplied };
  std::vector<std::uint64_t> sizes;  // one per context, model order
  Provenance provenance = Provenance::inferred_lcd;
};

// Smallest sample sizes under which each context's table is a table of
// integer counts: the least common multiple of the entry denominators.
SampleSizePlan infer_sample_sizes(const EmpiricalModel& model);

struct ConfidenceInterval {
  double low = 0.0;
  double high = 1.0;
  double level = 0.95;
};

struct BootstrapResult {
  std::uint64_t resample_count = 0;
  std::uint64_t noncontextual_count = 0;
  Rational noncontextual_fraction;
  ConfidenceInterval confidence_interval;  // Wilson score interval
  std::uint64_t seed = 0;
};

// Parametric bootstrap for two-context binary-pair systems: resamples each
// context's table from counts of the planned size, reruns the closed-form
// decision, and reports how often the resampled system came out
// non-contextual. Deterministic given (seed, plan, resamples).
// Throws ShapeError for other model shapes.
BootstrapResult bootstrap_noncontextuality(const EmpiricalModel& model,
                                           const SampleSizePlan& plan,
                                           std::uint64_t resamples, std::uint64_t seed);

}  // namespace ctxkit::bootstrap
