#include "ctxkit/bootstrap.hpp"

#include "ctxkit/cbd.hpp"
#include "ctxkit/errors.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctxkit::bootstrap {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// 97.5% normal quantile, for the two-sided 95% Wilson interval.
constexpr double kZ = 1.959963984540054;

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::next() { return mix64(key_ + counter_++ * kGolden); }

CounterRng resample_stream(std::uint64_t seed, std::uint64_t resample_index) {
  return CounterRng(mix64(seed ^ ((resample_index + 1) * kGolden)));
}

bool bernoulli(CounterRng& rng, const Rational& p) {
  if (p < 0 || p > 1) throw std::invalid_argument("bernoulli probability outside [0, 1]");
  if (p == 0) return false;
  if (p == 1) return true;
  const std::uint64_t u = rng.next();
  // success iff u < p * 2^64, i.e. u * den < num * 2^64 — all exact.
  Integer lhs = Integer(u) * denominator(p);
  Integer rhs = numerator(p) << 64;
  return lhs < rhs;
}

std::vector<std::uint64_t> multinomial(CounterRng& rng, std::uint64_t trials,
                                       const std::vector<Rational>& probabilities) {
  Rational total(0);
  for (const auto& p : probabilities) total += p;
  if (total != 1) throw std::invalid_argument("multinomial probabilities must sum to 1");

  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  std::uint64_t remaining = trials;
  Rational mass_left(1);
  for (std::size_t i = 0; i + 1 < probabilities.size(); ++i) {
    if (remaining == 0 || mass_left == 0) break;
    const Rational conditional = probabilities[i] / mass_left;
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < remaining; ++t) {
      if (bernoulli(rng, conditional)) ++hits;
    }
    counts[i] = hits;
    remaining -= hits;
    mass_left -= probabilities[i];
  }
  if (!counts.empty()) counts.back() = remaining;
  return counts;
}

SampleSizePlan infer_sample_sizes(const EmpiricalModel& model) {
  SampleSizePlan plan;
  plan.provenance = SampleSizePlan::Provenance::inferred_lcd;
  for (const auto& ctx : model.contexts) {
    Integer lcm_den = 1;
    for (const auto& [tuple, value] : ctx.table) {
      (void)tuple;
      lcm_den = boost::multiprecision::lcm(lcm_den, denominator(value));
    }
    if (lcm_den > Integer(std::uint64_t{1} << 62)) {
      throw SizeCapError("inferred sample size " + lcm_den.str() + " is unreasonably large");
    }
    plan.sizes.push_back(lcm_den.template convert_to<std::uint64_t>());
  }
  return plan;
}

BootstrapResult bootstrap_noncontextuality(const EmpiricalModel& model,
                                           const SampleSizePlan& plan,
                                           std::uint64_t resamples, std::uint64_t seed) {
  if (!cbd::cyclic2_shaped(model)) {
    throw ShapeError("bootstrap needs exactly two contexts over one shared pair of "
                     "binary measurements");
  }
  if (plan.sizes.size() != model.contexts.size()) {
    throw std::invalid_argument("sample-size plan length does not match context count");
  }
  for (auto n : plan.sizes) {
    if (n == 0) throw std::invalid_argument("sample sizes must be positive");
  }
  if (resamples == 0) throw std::invalid_argument("resample count must be positive");

  // Per context: support tuples (lexicographic) and their probabilities.
  std::vector<std::vector<OutcomeTuple>> categories(model.contexts.size());
  std::vector<std::vector<Rational>> weights(model.contexts.size());
  for (std::size_t c = 0; c < model.contexts.size(); ++c) {
    for (const auto& [tuple, value] : model.contexts[c].table) {
      if (value == 0) continue;
      categories[c].push_back(tuple);
      weights[c].push_back(value);
    }
  }

  BootstrapResult result;
  result.resample_count = resamples;
  result.seed = seed;

  EmpiricalModel resampled = model;  // reuse shape; tables swapped per resample
  for (std::uint64_t r = 0; r < resamples; ++r) {
    CounterRng rng = resample_stream(seed, r);
    for (std::size_t c = 0; c < model.contexts.size(); ++c) {
      const std::uint64_t n = plan.sizes[c];
      const auto counts = multinomial(rng, n, weights[c]);
      std::map<OutcomeTuple, Rational> table;
      for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        table.emplace(categories[c][i],
                      Rational(Integer(counts[i]), Integer(n)));
      }
      resampled.contexts[c].table = std::move(table);
    }
    const auto verdict = cbd::cyclic2_analyze(resampled);
    if (!verdict.contextual) ++result.noncontextual_count;
  }

  result.noncontextual_fraction =
      Rational(Integer(result.noncontextual_count), Integer(resamples));

  // Wilson score interval at 95%.
  const double n = static_cast<double>(resamples);
  const double p = static_cast<double>(result.noncontextual_count) / n;
  const double z2 = kZ * kZ;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  result.confidence_interval.low = std::max(0.0, center - half);
  result.confidence_interval.high = std::min(1.0, center + half);
  result.confidence_interval.level = 0.95;
  return result;
}

}  // namespace ctxkit::bootstrap
