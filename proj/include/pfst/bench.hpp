#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pfst/automaton.hpp"
#include "pfst/parallel.hpp"

namespace pfst {

// Timed workloads: Viterbi ("serial", "parallel") and the
// forward / backward / forward+backward+counts passes of each backend.
enum class BenchMethod {
  serial,
  parallel,
  serial_forward,
  parallel_forward,
  serial_backward,
  parallel_backward,
  serial_combined,
  parallel_combined,
};

BenchMethod parse_bench_method(std::string_view name);  // throws std::invalid_argument
std::string_view bench_method_name(BenchMethod method);
bool is_parallel(BenchMethod method);

struct BenchRow {
  std::string method;
  std::string backend;
  double seconds = 0.0;
  double ratio = 1.0;  // seconds / fastest seconds
};

struct BenchReport {
  ModelStats model;
  std::size_t num_sentences = 0;
  std::size_t repetitions = 0;
  std::string note;
  std::vector<BenchRow> rows;
};

struct SentenceTiming {
  std::size_t length = 0;
  double seconds = 0.0;
};

// Runs every method over all sentences `repeat` times and reports the
// wall-clock totals. Sentences without a complete path still count.
BenchReport run_bench(const TransducerModel& model,
                      const std::vector<std::vector<SymbolId>>& sentences,
                      std::span<const BenchMethod> methods, std::size_t repeat,
                      const ParallelConfig& config = {});

// Median seconds of `repeat` runs per sentence (after one untimed warm-up
// run), sorted by sentence length.
std::vector<SentenceTiming> time_per_sentence(const TransducerModel& model,
                                              const std::vector<std::vector<SymbolId>>& sentences,
                                              BenchMethod method, std::size_t repeat,
                                              const ParallelConfig& config = {});

// Empty iff ratios are >= 1 and the fastest row has ratio exactly 1.
std::vector<std::string> check_report(const BenchReport& report);

void write_report_table(std::ostream& out, const BenchReport& report);
void write_report_tsv(std::ostream& out, const BenchReport& report);

// Least-squares slope of seconds against length.
double timing_slope(std::span<const SentenceTiming> timings);

}  // namespace pfst
