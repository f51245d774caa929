#include "pfst/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "pfst/decode.hpp"
#include "pfst/estimate.hpp"

namespace pfst {

namespace {

struct MethodInfo {
  BenchMethod method;
  std::string_view name;
};

constexpr MethodInfo kMethods[] = {
    {BenchMethod::serial, "serial"},
    {BenchMethod::parallel, "parallel"},
    {BenchMethod::serial_forward, "serial-forward"},
    {BenchMethod::parallel_forward, "parallel-forward"},
    {BenchMethod::serial_backward, "serial-backward"},
    {BenchMethod::parallel_backward, "parallel-backward"},
    {BenchMethod::serial_combined, "serial-combined"},
    {BenchMethod::parallel_combined, "parallel-combined"},
};

// Runs one method on one sentence. Sentences without a path are not errors.
void run_once(BenchMethod method, const TransducerModel& model, ParallelBackend* backend,
              std::span<const SymbolId> input) {
  try {
    switch (method) {
      case BenchMethod::serial: {
        const auto chart = viterbi_fill(model, input);
        viterbi_backtrace(model, chart, input, finish(model, chart));
        break;
      }
      case BenchMethod::parallel:
        backend->reconstruct(backend->viterbi_fill(input), input);
        break;
      case BenchMethod::serial_forward:
        forward_fill(model, input);
        break;
      case BenchMethod::parallel_forward:
        backend->forward_fill(input);
        break;
      case BenchMethod::serial_backward:
        backward_fill(model, input);
        break;
      case BenchMethod::parallel_backward:
        backend->backward_fill(input);
        break;
      case BenchMethod::serial_combined:
        expected_counts(model, input);
        break;
      case BenchMethod::parallel_combined:
        backend->expected_counts(input);
        break;
    }
  } catch (const NoPath&) {
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

BenchMethod parse_bench_method(std::string_view name) {
  for (const auto& m : kMethods) {
    if (m.name == name) return m.method;
  }
  throw std::invalid_argument("unknown bench method '" + std::string(name) + "'");
}

std::string_view bench_method_name(BenchMethod method) {
  for (const auto& m : kMethods) {
    if (m.method == method) return m.name;
  }
  return "?";
}

bool is_parallel(BenchMethod method) {
  switch (method) {
    case BenchMethod::parallel:
    case BenchMethod::parallel_forward:
    case BenchMethod::parallel_backward:
    case BenchMethod::parallel_combined:
      return true;
    default:
      return false;
  }
}

BenchReport run_bench(const TransducerModel& model,
                      const std::vector<std::vector<SymbolId>>& sentences,
                      std::span<const BenchMethod> methods, std::size_t repeat,
                      const ParallelConfig& config) {
  if (repeat == 0) throw std::invalid_argument("repeat must be at least 1");
  BenchReport report;
  report.model = stats(model);
  report.num_sentences = sentences.size();
  report.repetitions = repeat;
  report.note = "decode-only wall clock; model loading excluded";

  std::unique_ptr<ParallelBackend> backend;
  for (BenchMethod method : methods) {
    std::string backend_name = "serial";
    if (is_parallel(method)) {
      if (!backend) backend = std::make_unique<ParallelBackend>(model, config);
      backend_name = fmt::format("{}x{}", backend->config().backend_name,
                                 backend->config().num_workers);
    }
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t r = 0; r < repeat; ++r) {
      for (const auto& input : sentences) run_once(method, model, backend.get(), input);
    }
    report.rows.push_back({std::string(bench_method_name(method)), backend_name,
                           seconds_since(start), 1.0});
  }

  if (!report.rows.empty()) {
    const auto fastest = std::min_element(
        report.rows.begin(), report.rows.end(),
        [](const BenchRow& a, const BenchRow& b) { return a.seconds < b.seconds; });
    const double best = fastest->seconds;
    for (auto& row : report.rows) {
      row.ratio = &row == &*fastest || best <= 0.0 ? 1.0 : row.seconds / best;
    }
  }
  return report;
}

std::vector<SentenceTiming> time_per_sentence(const TransducerModel& model,
                                              const std::vector<std::vector<SymbolId>>& sentences,
                                              BenchMethod method, std::size_t repeat,
                                              const ParallelConfig& config) {
  if (repeat == 0) throw std::invalid_argument("repeat must be at least 1");
  std::unique_ptr<ParallelBackend> backend;
  if (is_parallel(method)) backend = std::make_unique<ParallelBackend>(model, config);

  std::vector<SentenceTiming> out;
  out.reserve(sentences.size());
  std::vector<double> runs(repeat);
  for (const auto& input : sentences) {
    run_once(method, model, backend.get(), input);  // warm-up, untimed
    for (std::size_t r = 0; r < repeat; ++r) {
      const auto start = std::chrono::steady_clock::now();
      run_once(method, model, backend.get(), input);
      runs[r] = seconds_since(start);
    }
    std::nth_element(runs.begin(), runs.begin() + repeat / 2, runs.end());
    out.push_back({input.size(), runs[repeat / 2]});
  }
  std::stable_sort(out.begin(), out.end(), [](const SentenceTiming& a, const SentenceTiming& b) {
    return a.length < b.length;
  });
  return out;
}

std::vector<std::string> check_report(const BenchReport& report) {
  std::vector<std::string> problems;
  if (report.rows.empty()) return problems;
  bool has_unit = false;
  double fastest = report.rows.front().seconds;
  for (const auto& row : report.rows) fastest = std::min(fastest, row.seconds);
  for (const auto& row : report.rows) {
    if (!(row.ratio >= 1.0)) problems.push_back(row.method + ": ratio below 1");
    if (row.ratio == 1.0) has_unit = true;
    if (row.seconds == fastest && row.ratio != 1.0) {
      problems.push_back(row.method + ": fastest row does not have ratio 1");
    }
  }
  if (!has_unit) problems.push_back("no row has ratio 1");
  return problems;
}

void write_report_table(std::ostream& out, const BenchReport& report) {
  out << fmt::format("# states={} transitions={} density={:.6g} sentences={} repeat={}\n",
                     report.model.num_states, report.model.num_transitions, report.model.density,
                     report.num_sentences, report.repetitions);
  if (!report.note.empty()) out << "# " << report.note << '\n';
  std::size_t method_w = 6, backend_w = 7;
  for (const auto& row : report.rows) {
    method_w = std::max(method_w, row.method.size());
    backend_w = std::max(backend_w, row.backend.size());
  }
  out << fmt::format("{:<{}}  {:<{}}  {:>12}  {:>8}\n", "method", method_w, "backend", backend_w,
                     "seconds", "ratio");
  for (const auto& row : report.rows) {
    out << fmt::format("{:<{}}  {:<{}}  {:>12.6f}  {:>8.3f}\n", row.method, method_w, row.backend,
                       backend_w, row.seconds, row.ratio);
  }
}

void write_report_tsv(std::ostream& out, const BenchReport& report) {
  out << "method\tbackend\tseconds\tratio\n";
  for (const auto& row : report.rows) {
    out << fmt::format("{}\t{}\t{:.9f}\t{:.6f}\n", row.method, row.backend, row.seconds, row.ratio);
  }
}

double timing_slope(std::span<const SentenceTiming> timings) {
  if (timings.size() < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (const auto& t : timings) {
    mx += static_cast<double>(t.length);
    my += t.seconds;
  }
  mx /= static_cast<double>(timings.size());
  my /= static_cast<double>(timings.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& t : timings) {
    const double dx = static_cast<double>(t.length) - mx;
    sxy += dx * (t.seconds - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace pfst
