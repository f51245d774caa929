#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "pfst/decode.hpp"
#include "pfst/oracle.hpp"
#include "pfst/synth.hpp"

using namespace pfst;
using pfst::testing::toy_model;

TEST_CASE("toy model has two complete paths") {
  const TransducerModel m = toy_model();
  const PathSet set = enumerate_paths(m, tokenize(m, "le chat </s>"));
  REQUIRE(set.paths.size() == 2);
  CHECK(set.paths[0].arcs == std::vector<ArcId>{0, 2, 4});
  CHECK(set.paths[1].arcs == std::vector<ArcId>{1, 3, 5});
  CHECK(set.paths[0].weight == static_cast<long double>(0.48));
  CHECK(set.paths[1].weight == static_cast<long double>(0.08));

  CHECK(oracle_viterbi(set).weight == set.paths[0].weight);
  CHECK(std::fabs(static_cast<double>(oracle_total(set)) - 0.56) < 1e-15);
  const auto gamma = oracle_posteriors(set);
  // 0.48 / 0.56 by hand.
  CHECK(std::fabs(static_cast<double>(gamma[0].at(0)) - 6.0 / 7.0) < 1e-15);
  CHECK(std::fabs(static_cast<double>(gamma[0].at(1)) - 1.0 / 7.0) < 1e-15);
}

TEST_CASE("empty input on a final start state") {
  const FinalWeight finals[] = {{0, 1.0}};
  const TransducerModel m = build_from_arcs({}, 1, 0, finals);
  const PathSet set = enumerate_paths(m, {});
  REQUIRE(set.paths.size() == 1);
  CHECK(set.paths[0].weight == 1.0L);
  CHECK(set.paths[0].arcs.empty());
}

TEST_CASE("no complete path") {
  const TransducerModel m = toy_model();
  const PathSet set = enumerate_paths(m, tokenize(m, "le"));
  CHECK(set.paths.empty());
  CHECK(oracle_total(set) == 0.0L);
  CHECK_THROWS_AS(oracle_viterbi(set), NoPath);
  CHECK_THROWS_AS(oracle_posteriors(set), NoPath);
}

TEST_CASE("single path has unit posteriors") {
  const std::vector<ArcSpec> arcs{{0, 1, "a", "x", 0.3}, {1, 2, "b", "y", 0.7}};
  const FinalWeight finals[] = {{2, 0.5}};
  const TransducerModel m = build_from_arcs(arcs, 3, 0, finals);
  const std::vector<SymbolId> input{0, 1};
  const auto gamma = oracle_posteriors(enumerate_paths(m, input));
  CHECK(gamma[0].at(0) == 1.0L);
  CHECK(gamma[1].at(1) == 1.0L);
}

TEST_CASE("two equal paths split the posterior mass") {
  const std::vector<ArcSpec> arcs{{0, 1, "a", "x", 0.5}, {0, 2, "a", "y", 0.5}};
  const FinalWeight finals[] = {{1, 1.0}, {2, 1.0}};
  const TransducerModel m = build_from_arcs(arcs, 3, 0, finals);
  const std::vector<SymbolId> input{0};
  const PathSet set = enumerate_paths(m, input);
  const auto gamma = oracle_posteriors(set);
  CHECK(gamma[0].at(0) == 0.5L);
  CHECK(gamma[0].at(1) == 0.5L);
  // Tie goes to the larger final index.
  CHECK(oracle_viterbi(set).final_index == 1);
}

TEST_CASE("size guard") {
  const TransducerModel m = toy_model();
  const std::vector<SymbolId> long_input(kOracleMaxLength + 1, 0);
  CHECK_THROWS_AS(enumerate_paths(m, long_input), Error);
  const TransducerModel big = build_from_arcs({}, kOracleMaxStates + 1, 0, {});
  CHECK_THROWS_AS(enumerate_paths(big, {}), Error);
}

TEST_CASE("oracle self-consistency on random models") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const TransducerModel m = random_model({}, rng);
    const auto input = random_input(m, rng() % 6, rng);
    const PathSet set = enumerate_paths(m, input);
    for (const OraclePath& p : set.paths) {
      REQUIRE(p.arcs.size() == input.size());
      StateId q = m.start();
      for (std::size_t t = 0; t < p.arcs.size(); ++t) {
        CHECK(m.arcs().source[p.arcs[t]] == q);
        CHECK(transitions_for(m, input[t]).contains(p.arcs[t]));
        q = m.arcs().target[p.arcs[t]];
      }
      CHECK(m.finals()[p.final_index].state == q);
    }
    const long double total = oracle_total(set);
    if (total == 0.0L) continue;
    CHECK(oracle_viterbi(set).weight <= total);
    for (const auto& step : oracle_posteriors(set)) {
      long double sum = 0.0L;
      for (const auto& [k, g] : step) sum += g;
      CHECK(std::fabs(static_cast<double>(sum - 1.0L)) <= 1e-12);
    }
  }
}
