#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ctxkit/bootstrap.hpp>
#include <ctxkit/cbd.hpp>
#include <ctxkit/errors.hpp>
#include <ctxkit/model_io.hpp>

#include <set>
#include <string>

using namespace ctxkit;
using bootstrap::CounterRng;

namespace {

std::string data_path(const char* name) {
  return std::string(CTXKIT_DATA_DIR) + "/" + name;
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

Context ctx(std::vector<std::string> measurements,
            std::vector<std::pair<OutcomeTuple, Rational>> entries,
            std::string orientation = "") {
  Context c;
  c.measurements = std::move(measurements);
  c.orientation = std::move(orientation);
  for (auto& [tuple, p] : entries) c.table.emplace(tuple, p);
  return c;
}

EmpiricalModel two_context_model(std::vector<std::pair<OutcomeTuple, Rational>> first,
                                 std::vector<std::pair<OutcomeTuple, Rational>> second) {
  EmpiricalModel m;
  m.measurements = {{"A", {"0", "1"}}, {"B", {"0", "1"}}};
  m.contexts = {ctx({"A", "B"}, std::move(first), "first"),
                ctx({"A", "B"}, std::move(second), "second")};
  return m;
}

}  // namespace

TEST_CASE("the counter generator reproduces the reference finalizer stream") {
  // Key 0 walks the canonical sequence of the splitmix-style finalizer.
  CounterRng rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
  CHECK(rng.next() == 0xF88BB8A8724C81ECULL);
  CHECK(rng.next() == 0x1B39896A51A8749BULL);
}

TEST_CASE("draw i of stream k is the mix of k plus i strides — order cannot matter") {
  const std::uint64_t key = 0xDEADBEEFCAFEF00DULL;
  CounterRng rng(key);
  CHECK(rng.next() == bootstrap::mix64(key));
  CHECK(rng.next() == bootstrap::mix64(key + kGolden));
  CHECK(rng.next() == bootstrap::mix64(key + 2 * kGolden));
}

TEST_CASE("resample streams are keyed by seed and index") {
  CounterRng first = bootstrap::resample_stream(7, 0);
  CHECK(first.next() == 0x9816B5431C115F88ULL);  // mix64(mix64(7 ^ golden))

  // A fresh object for the same pair replays identically; neighbours differ.
  CHECK(bootstrap::resample_stream(7, 0).next() == 0x9816B5431C115F88ULL);
  std::set<std::uint64_t> firsts;
  for (std::uint64_t r = 0; r < 100; ++r) {
    firsts.insert(bootstrap::resample_stream(7, r).next());
  }
  CHECK(firsts.size() == 100);
  CHECK_FALSE(firsts.count(bootstrap::resample_stream(8, 0).next()));
}

TEST_CASE("exact coin flips: degenerate probabilities consume no entropy") {
  CounterRng a(42), b(42);
  CHECK_FALSE(bootstrap::bernoulli(a, Rational(0)));
  CHECK(bootstrap::bernoulli(a, Rational(1)));
  CHECK(a.next() == b.next());  // nothing was drawn above

  CHECK_THROWS_AS(bootstrap::bernoulli(a, Rational(-1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(bootstrap::bernoulli(a, Rational(3, 2)), std::invalid_argument);
}

TEST_CASE("coin flips hit their probability on average") {
  CounterRng rng(2024);
  int hits = 0;
  const int trials = 40000;
  for (int i = 0; i < trials; ++i) {
    if (bootstrap::bernoulli(rng, Rational(1, 3))) ++hits;
  }
  const double rate = static_cast<double>(hits) / trials;
  CHECK(rate > 0.32);
  CHECK(rate < 0.35);
}

TEST_CASE("category counts conserve the number of trials") {
  CounterRng rng(5);
  const std::vector<Rational> probs{Rational(1, 2), Rational(1, 4), Rational(1, 4)};
  std::uint64_t grand[3] = {0, 0, 0};
  for (int rep = 0; rep < 400; ++rep) {
    const auto counts = bootstrap::multinomial(rng, 100, probs);
    REQUIRE(counts.size() == 3);
    CHECK(counts[0] + counts[1] + counts[2] == 100);
    for (int i = 0; i < 3; ++i) grand[i] += counts[i];
  }
  // 40000 trials split roughly 1/2 : 1/4 : 1/4.
  CHECK(grand[0] > 19000);
  CHECK(grand[0] < 21000);
  CHECK(grand[1] > 9000);
  CHECK(grand[1] < 11000);
}

TEST_CASE("impossible and certain categories are respected exactly") {
  CounterRng rng(11);
  const auto counts =
      bootstrap::multinomial(rng, 50, {Rational(0), Rational(1), Rational(0)});
  CHECK(counts == std::vector<std::uint64_t>{0, 50, 0});

  const auto single = bootstrap::multinomial(rng, 9, {Rational(1)});
  CHECK(single == std::vector<std::uint64_t>{9});

  CHECK_THROWS_AS(bootstrap::multinomial(rng, 10, {Rational(1, 2), Rational(1, 4)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(bootstrap::multinomial(rng, 10, {}), std::invalid_argument);
}

TEST_CASE("replayed streams give identical category counts") {
  const std::vector<Rational> probs{Rational(2, 5), Rational(1, 10), Rational(1, 2)};
  CounterRng a(77), b(77);
  CHECK(bootstrap::multinomial(a, 123, probs) == bootstrap::multinomial(b, 123, probs));
}

TEST_CASE("sample sizes are the smallest integers clearing every denominator") {
  const auto adopt = bootstrap::infer_sample_sizes(load_model(data_path("adopt_boxer.json")));
  CHECK(adopt.sizes == std::vector<std::uint64_t>{30, 4});
  CHECK(adopt.provenance == bootstrap::SampleSizePlan::Provenance::inferred_lcd);

  const auto throw_plan =
      bootstrap::infer_sample_sizes(load_model(data_path("throw_pitcher.json")));
  CHECK(throw_plan.sizes == std::vector<std::uint64_t>{10, 3});

  // A point mass needs exactly one observation.
  const auto point = two_context_model({{{0, 0}, Rational(1)}}, {{{1, 1}, Rational(1)}});
  CHECK(bootstrap::infer_sample_sizes(point).sizes == std::vector<std::uint64_t>{1, 1});
}

TEST_CASE("absurd denominators trip the size guard") {
  const Rational tiny(Integer(1), Integer(1) << 63);
  const auto m = two_context_model({{{0, 0}, tiny}, {{1, 1}, Rational(1) - tiny}},
                                   {{{0, 0}, Rational(1)}});
  CHECK_THROWS_AS(bootstrap::infer_sample_sizes(m), SizeCapError);
}

TEST_CASE("resampling rejects wrong shapes and empty plans") {
  const auto plan = bootstrap::SampleSizePlan{{10, 10},
                                              bootstrap::SampleSizePlan::Provenance::user_supplied};
  CHECK_THROWS_AS(bootstrap::bootstrap_noncontextuality(
                      load_model(data_path("bell_fig1.json")), plan, 10, 1),
                  ShapeError);

  const auto model = load_model(data_path("adopt_boxer.json"));
  bootstrap::SampleSizePlan short_plan;
  short_plan.sizes = {30};
  CHECK_THROWS_AS(bootstrap::bootstrap_noncontextuality(model, short_plan, 10, 1),
                  std::invalid_argument);
  bootstrap::SampleSizePlan zero_plan;
  zero_plan.sizes = {30, 0};
  CHECK_THROWS_AS(bootstrap::bootstrap_noncontextuality(model, zero_plan, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      bootstrap::bootstrap_noncontextuality(model, bootstrap::infer_sample_sizes(model), 0, 1),
      std::invalid_argument);
}

TEST_CASE("the verb-pair resampling tallies are pinned by the seed") {
  const auto model = load_model(data_path("adopt_boxer.json"));
  const auto plan = bootstrap::infer_sample_sizes(model);
  const auto result = bootstrap::bootstrap_noncontextuality(model, plan, 2000, 7);

  CHECK(result.resample_count == 2000);
  CHECK(result.seed == 7);
  CHECK(result.noncontextual_count == 1150);
  CHECK(result.noncontextual_fraction == Rational(1150, 2000));
  CHECK(result.confidence_interval.level == doctest::Approx(0.95));
  CHECK(result.confidence_interval.low == doctest::Approx(0.55321).epsilon(0.001));
  CHECK(result.confidence_interval.high == doctest::Approx(0.59650).epsilon(0.001));

  // Bit-for-bit reproducible.
  const auto again = bootstrap::bootstrap_noncontextuality(model, plan, 2000, 7);
  CHECK(again.noncontextual_count == result.noncontextual_count);
}

TEST_CASE("the second verb-pair tally under the same seed") {
  const auto model = load_model(data_path("throw_pitcher.json"));
  const auto plan = bootstrap::infer_sample_sizes(model);
  const auto result = bootstrap::bootstrap_noncontextuality(model, plan, 2000, 7);
  CHECK(plan.sizes == std::vector<std::uint64_t>{10, 3});
  CHECK(result.noncontextual_count == 693);
  CHECK(result.noncontextual_fraction == Rational(693, 2000));
}

TEST_CASE("a comfortably noncontextual system resamples noncontextual nearly always") {
  // Mirrored near-deterministic contexts: the expectation gap term sits around
  // 3.2 while the correlation difference stays near zero, so the decision has
  // a huge margin.
  const auto m = two_context_model(
      {{{0, 0}, Rational(4, 5)}, {{0, 1}, Rational(1, 10)}, {{1, 0}, Rational(1, 10)}},
      {{{1, 1}, Rational(4, 5)}, {{1, 0}, Rational(1, 10)}, {{0, 1}, Rational(1, 10)}});
  REQUIRE_FALSE(cbd::cyclic2_analyze(m).contextual);
  const auto plan = bootstrap::infer_sample_sizes(m);
  CHECK(plan.sizes == std::vector<std::uint64_t>{10, 10});
  const auto result = bootstrap::bootstrap_noncontextuality(m, plan, 3000, 99);
  CHECK(result.noncontextual_fraction >= Rational(99, 100));
}

TEST_CASE("point-mass tables resample to themselves") {
  const auto m = two_context_model({{{0, 1}, Rational(1)}}, {{{1, 0}, Rational(1)}});
  const auto plan = bootstrap::infer_sample_sizes(m);
  const auto result = bootstrap::bootstrap_noncontextuality(m, plan, 500, 3);
  CHECK(result.noncontextual_count == 500);
  CHECK(result.confidence_interval.high == doctest::Approx(1.0));
}
