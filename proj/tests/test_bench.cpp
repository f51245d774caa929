#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "pfst/bench.hpp"
#include "pfst/decode.hpp"
#include "pfst/synth.hpp"

using namespace pfst;
using pfst::testing::toy_model;

TEST_CASE("method names") {
  for (std::string_view name : {"serial", "parallel", "serial-forward", "parallel-forward",
                                "serial-backward", "parallel-backward", "serial-combined",
                                "parallel-combined"}) {
    CHECK(bench_method_name(parse_bench_method(name)) == name);
  }
  CHECK(is_parallel(BenchMethod::parallel_combined));
  CHECK_FALSE(is_parallel(BenchMethod::serial_forward));
  CHECK_THROWS_AS(parse_bench_method("gpu"), std::invalid_argument);
}

TEST_CASE("report on the toy model") {
  const TransducerModel m = toy_model();
  const std::vector<std::vector<SymbolId>> sentences{tokenize(m, "le chat </s>"),
                                                     tokenize(m, "le")};
  const BenchMethod methods[] = {BenchMethod::serial, BenchMethod::parallel};
  const BenchReport report = run_bench(m, sentences, methods, 3);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].method == "serial");
  CHECK(report.rows[1].method == "parallel");
  CHECK(report.rows[1].backend.rfind("threads", 0) == 0);
  CHECK(report.repetitions == 3);
  CHECK(report.num_sentences == 2);
  CHECK(check_report(report).empty());
  int fastest = 0;
  for (const auto& row : report.rows) {
    CHECK(row.ratio >= 1.0);
    if (row.ratio == 1.0) ++fastest;
  }
  CHECK(fastest >= 1);

  std::ostringstream table, tsv;
  write_report_table(table, report);
  write_report_tsv(tsv, report);
  CHECK(table.str().find("method") != std::string::npos);
  CHECK(tsv.str().rfind("method\tbackend\tseconds\tratio\n", 0) == 0);
  const std::string tsv_text = tsv.str();
  CHECK(std::count(tsv_text.begin(), tsv_text.end(), '\n') == 3);

  CHECK_THROWS_AS(run_bench(m, sentences, methods, 0), std::invalid_argument);
}

TEST_CASE("check_report flags broken ratios") {
  BenchReport report;
  report.rows = {{"serial", "serial", 2.0, 2.0}, {"parallel", "threads", 1.0, 1.0}};
  CHECK(check_report(report).empty());
  report.rows[0].ratio = 0.5;
  CHECK_FALSE(check_report(report).empty());
  report.rows[0].ratio = 2.0;
  report.rows[1].ratio = 1.1;
  CHECK_FALSE(check_report(report).empty());
}

TEST_CASE("per-sentence timings") {
  std::mt19937_64 rng(71);
  RandomModelShape shape;
  shape.num_states = 100;
  shape.num_symbols = 5;
  shape.num_arcs = 5000;
  const TransducerModel m = random_model(shape, rng);
  std::vector<std::vector<SymbolId>> sentences;
  for (std::size_t len : {40, 5, 20, 10}) sentences.push_back(random_input(m, len, rng));
  const auto timings = time_per_sentence(m, sentences, BenchMethod::serial, 3);
  REQUIRE(timings.size() == 4);
  CHECK(timings[0].length == 5);
  CHECK(timings[3].length == 40);
  for (const auto& t : timings) CHECK(t.seconds > 0.0);
  CHECK(timing_slope(timings) > 0.0);

  const SentenceTiming line[] = {{1, 1.0}, {2, 3.0}, {3, 5.0}};
  CHECK(timing_slope(line) == doctest::Approx(2.0));
}
