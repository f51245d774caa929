#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "pfst/decode.hpp"
#include "pfst/oracle.hpp"
#include "pfst/synth.hpp"

using namespace pfst;
using pfst::testing::rel_close;
using pfst::testing::toy_arcs;
using pfst::testing::toy_model;

namespace {

void check_chain(const TransducerModel& m, std::span<const SymbolId> input, const DecodePath& p) {
  REQUIRE(p.arcs.size() == input.size());
  StateId q = m.start();
  for (std::size_t t = 0; t < p.arcs.size(); ++t) {
    CHECK(m.arcs().source[p.arcs[t]] == q);
    CHECK(transitions_for(m, input[t]).contains(p.arcs[t]));
    q = m.arcs().target[p.arcs[t]];
  }
  CHECK(m.finals()[p.final_index].state == q);
  CHECK(m.finals()[p.final_index].weight > 0.0);
}

TransducerModel scaled(const TransducerModel& m, double c) {
  auto arcs = arc_specs(m);
  for (auto& a : arcs) a.weight *= c;
  std::vector<FinalWeight> finals(m.finals().begin(), m.finals().end());
  for (auto& f : finals) f.weight *= c;
  return build_from_arcs(arcs, m.num_states(), m.start(), finals, m.input_symbols(),
                         m.output_symbols());
}

}  // namespace

TEST_CASE("tokenize") {
  const TransducerModel m = toy_model();
  CHECK(tokenize(m, "le chat </s>") == std::vector<SymbolId>{0, 1, 2});
  CHECK(tokenize(m, "  le\tchat  ") == std::vector<SymbolId>{0, 1});
  CHECK(tokenize(m, "").empty());
  try {
    tokenize(m, "le gato");
    FAIL("expected UnknownToken");
  } catch (const UnknownToken& e) {
    CHECK(e.token() == "gato");
    CHECK(e.position() == 1);
  }
}

TEST_CASE("viterbi_fill on the toy model") {
  const TransducerModel m = toy_model();
  const auto input = tokenize(m, "le chat </s>");
  // Expected values come from enumerating both complete paths.
  const PathSet paths = enumerate_paths(m, input);
  const double best = static_cast<double>(oracle_viterbi(paths).weight);
  REQUIRE(best == 0.48);

  SUBCASE("probability domain") {
    const ViterbiChart chart = viterbi_fill(m, input, WeightDomain::prob);
    CHECK(unpack(chart.cells.at(1, 1)) == ScoredArc{0.48f, 0});
    CHECK(unpack(chart.cells.at(3, 5)) == ScoredArc{0.48f, 4});
    CHECK(unpack(chart.cells.at(0, 0)) == ScoredArc{1.0f, kNullBackPointer});
    CHECK(chart.cells.at(1, 3) == empty_cell(WeightDomain::prob));
  }
  SUBCASE("log domain") {
    const ViterbiChart chart = viterbi_fill(m, input);
    CHECK(cell_back_pointer(chart.cells.at(1, 1)) == 0);
    CHECK(cell_back_pointer(chart.cells.at(3, 5)) == 4);
    CHECK(std::exp(cell_weight(chart.cells.at(3, 5))) == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("viterbi_fill edge cases") {
  const TransducerModel m = toy_model();
  const ViterbiChart empty = viterbi_fill(m, {});
  CHECK(empty.cells.num_rows() == 1);

  SymbolTable seeded;
  seeded.add("le");
  seeded.add("chat");
  seeded.add("</s>");
  seeded.add("silent");
  const auto arcs = toy_arcs();
  const TransducerModel with_unused = build_from_arcs(arcs, 6, 0, {}, seeded);
  const std::vector<SymbolId> input{0, 3};
  const ViterbiChart chart = viterbi_fill(with_unused, input);
  for (PackedCell c : chart.cells.row(2)) CHECK(c == empty_cell(WeightDomain::log));
}

TEST_CASE("finish") {
  const TransducerModel m = toy_model();
  const auto input = tokenize(m, "le chat </s>");
  const FinalChoice best = finish(m, viterbi_fill(m, input));
  CHECK(best.final_index == 0);
  CHECK(std::exp(best.log_weight) == doctest::Approx(0.48).epsilon(1e-6));

  const FinalWeight finals[] = {{0, 0.25}};
  const TransducerModel accept_empty = build_from_arcs({}, 1, 0, finals);
  CHECK(std::exp(finish(accept_empty, viterbi_fill(accept_empty, {})).log_weight) ==
        doctest::Approx(0.25).epsilon(1e-7));
  CHECK(finish(accept_empty, viterbi_fill(accept_empty, {}, WeightDomain::prob)).log_weight ==
        std::log(static_cast<double>(0.25f)));

  // Only partial paths exist, as the oracle confirms.
  const auto partial = tokenize(m, "le");
  REQUIRE(enumerate_paths(m, partial).paths.empty());
  CHECK_THROWS_AS(finish(m, viterbi_fill(m, partial)), NoPath);
}

TEST_CASE("viterbi_backtrace") {
  const TransducerModel m = toy_model();
  const auto input = tokenize(m, "le chat </s>");
  const ViterbiChart chart = viterbi_fill(m, input);
  const DecodePath path = viterbi_backtrace(m, chart, input, finish(m, chart));
  CHECK(path.arcs == std::vector<ArcId>{0, 2, 4});
  CHECK(path.output_text() == "the cat </s>");
  CHECK(rel_close(path.probability(), 0.48, 1e-12));
  CHECK(path.log_weight == path_log_weight(m, path.arcs, path.final_index));

  SUBCASE("single arc") {
    const std::vector<ArcSpec> arcs{{0, 1, "x", "y", 0.7}};
    const FinalWeight finals[] = {{1, 1.0}};
    const TransducerModel one = build_from_arcs(arcs, 2, 0, finals);
    const DecodePath p = decode(one, "x");
    CHECK(p.arcs == std::vector<ArcId>{0});
    CHECK(p.output_text() == "y");
    CHECK(rel_close(p.probability(), 0.7, 1e-15));
  }
  SUBCASE("empty input") {
    const FinalWeight finals[] = {{0, 1.0}};
    const TransducerModel accept_empty = build_from_arcs({}, 1, 0, finals);
    const DecodePath p = decode(accept_empty, "");
    CHECK(p.arcs.empty());
    CHECK(p.output.empty());
    CHECK(p.log_weight == 0.0);
  }
  SUBCASE("corrupted back-pointer") {
    ViterbiChart broken = chart;
    broken.cells.at(2, 3) = pack(0.0f, 3);  // arc 3 ends in state 4, not 3
    CHECK_THROWS_AS(viterbi_backtrace(m, broken, input, finish(m, broken)), CorruptChart);
    broken.cells.at(2, 3) = pack(0.0f, kNullBackPointer);
    CHECK_THROWS_AS(viterbi_backtrace(m, broken, input, finish(m, broken)), CorruptChart);
  }
}

TEST_CASE("decode") {
  const TransducerModel m = toy_model();
  const DecodePath p = decode(m, "le chat </s>");
  CHECK(p.output_text() == "the cat </s>");
  CHECK(rel_close(p.probability(), 0.48, 1e-12));
  CHECK(p.output_text() == decode(m, "le chat </s>", WeightDomain::prob).output_text());
  CHECK_THROWS_AS(decode(m, "le chien </s>"), UnknownToken);

  auto arcs = toy_arcs();
  arcs.erase(arcs.begin());
  const FinalWeight finals[] = {{5, 1.0}};
  const TransducerModel without_the = build_from_arcs(arcs, 6, 0, finals);
  const auto input = tokenize(without_the, "le chat </s>");
  const double oracle = static_cast<double>(oracle_viterbi(enumerate_paths(without_the, input)).weight);
  const DecodePath q = decode(without_the, "le chat </s>");
  CHECK(q.output_text() == "a cat </s>");
  CHECK(rel_close(q.probability(), oracle, 1e-12));
  CHECK(rel_close(q.probability(), 0.08, 1e-12));
}

TEST_CASE("decode matches the enumeration oracle on random models") {
  std::mt19937_64 rng(31);
  int decoded = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const TransducerModel m = random_model({}, rng);
    const auto input = random_input(m, rng() % 6, rng);
    const PathSet set = enumerate_paths(m, input);
    for (WeightDomain d : {WeightDomain::log, WeightDomain::prob}) {
      const ViterbiChart chart = viterbi_fill(m, input, d);
      if (set.paths.empty()) {
        CHECK_THROWS_AS(finish(m, chart), NoPath);
        continue;
      }
      const DecodePath p = viterbi_backtrace(m, chart, input, finish(m, chart));
      check_chain(m, input, p);
      CHECK(rel_close(p.probability(), static_cast<double>(oracle_viterbi(set).weight), 1e-12));
      CHECK(p.log_weight == path_log_weight(m, p.arcs, p.final_index));
      ++decoded;
    }
  }
  CHECK(decoded > 100);
}

TEST_CASE("argmax path is invariant under scaling all weights") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    const TransducerModel m = random_model({}, rng);
    const auto input = random_input(m, 1 + rng() % 5, rng);
    if (enumerate_paths(m, input).paths.empty()) continue;
    const auto chart = viterbi_fill(m, input, WeightDomain::prob);
    const DecodePath base = viterbi_backtrace(m, chart, input, finish(m, chart));
    for (double c : {0.5, 2.0}) {
      const TransducerModel s = scaled(m, c);
      const auto sc = viterbi_fill(s, input, WeightDomain::prob);
      CHECK(viterbi_backtrace(s, sc, input, finish(s, sc)).arcs == base.arcs);
    }
  }
}
