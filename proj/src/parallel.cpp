#include "pfst/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "pfst/worker_pool.hpp"

namespace pfst {

void atomic_max_packed(PackedCell& cell, PackedCell candidate) {
  std::atomic_ref<PackedCell> ref(cell);
  PackedCell current = ref.load(std::memory_order_relaxed);
  while (current < candidate &&
         !ref.compare_exchange_weak(current, candidate, std::memory_order_relaxed)) {
  }
}

void atomic_log_add(double& cell, double value, bool fast_math) {
  if (value == kLogZero) return;
  std::atomic_ref<double> ref(cell);
  double current = ref.load(std::memory_order_relaxed);
  double updated;
  do {
    updated = fast_math ? log_add_fast(current, value) : log_add(current, value);
  } while (!ref.compare_exchange_weak(current, updated, std::memory_order_relaxed));
}

ParallelConfig resolve(ParallelConfig config) {
  if (config.backend_name != "threads") {
    throw std::invalid_argument("unknown parallel backend '" + config.backend_name + "'");
  }
  if (config.work_group_size == 0) config.work_group_size = kPoolPreferredGroupSize;
  if (config.num_workers == 0) {
    config.num_workers = std::max<std::size_t>(4, std::thread::hardware_concurrency());
  }
  return config;
}

ParallelBackend::ParallelBackend(const TransducerModel& model, ParallelConfig config)
    : model_(&model), config_(resolve(std::move(config))) {
  const TransitionStore& a = model.arcs();
  device_.source = a.source;
  device_.target = a.target;
  device_.weight = a.weight;
  device_.log_weight.assign(model.log_weights().begin(), model.log_weights().end());
  pool_ = std::make_unique<WorkerPool>(config_.num_workers);
}

ParallelBackend::~ParallelBackend() = default;

template <class PerArc>
void ParallelBackend::launch(ArcRange range, PerArc&& per_arc) {
  if (range.empty()) return;
  const std::size_t group = config_.work_group_size;
  // Round the work up to whole groups; the last group runs short.
  const std::size_t groups = (range.size() + group - 1) / group;
  const std::function<void(std::size_t)> task = [&](std::size_t g) {
    const ArcId first = static_cast<ArcId>(range.begin + g * group);
    const ArcId last = static_cast<ArcId>(std::min<std::size_t>(range.end, first + group));
    for (ArcId k = first; k < last; ++k) per_arc(k);
  };
  pool_->run(groups, task);
}

void ParallelBackend::report(std::size_t row, std::uint64_t checksum) const {
  if (config_.step_checksum) config_.step_checksum(row, checksum);
}

ViterbiChart ParallelBackend::viterbi_fill(std::span<const SymbolId> input, WeightDomain domain) {
  const PackedCell zero = empty_cell(domain);
  const float zero_weight = viterbi_zero(domain);
  ViterbiChart chart{domain, Chart<PackedCell>(input.size() + 1, model_->num_states(), zero)};
  chart.cells.at(0, model_->start()) = pack_unchecked(viterbi_one(domain), kNullBackPointer);
  if (config_.step_checksum) report(0, row_checksum(chart.cells.row(0)));

  const StateId* source = device_.source.data();
  const StateId* target = device_.target.data();
  const double* log_w = device_.log_weight.data();
  const double* w = device_.weight.data();

  for (std::size_t t = 1; t <= input.size(); ++t) {
    const auto prev = chart.cells.row(t - 1);
    auto cur = chart.cells.row(t);
    launch(transitions_for(*model_, input[t - 1]), [&](ArcId k) {
      const float from = cell_weight(prev[source[k]]);
      if (from == zero_weight) return;
      atomic_max_packed(cur[target[k]],
                        pack_unchecked(viterbi_extend(domain, from, log_w[k], w[k]), k));
    });
    if (config_.step_checksum) report(t, row_checksum(chart.cells.row(t)));
  }
  return chart;
}

LogChart ParallelBackend::forward_fill(std::span<const SymbolId> input) {
  LogChart forward(input.size() + 1, model_->num_states(), kLogZero);
  forward.at(0, model_->start()) = kLogOne;
  if (config_.step_checksum) report(0, row_checksum(forward.row(0)));

  const StateId* source = device_.source.data();
  const StateId* target = device_.target.data();
  const double* log_w = device_.log_weight.data();
  const bool fast = config_.fast_math;

  for (std::size_t t = 0; t < input.size(); ++t) {
    const auto prev = forward.row(t);
    auto next = forward.row(t + 1);
    launch(transitions_for(*model_, input[t]), [&](ArcId k) {
      const double from = prev[source[k]];
      if (from == kLogZero) return;
      atomic_log_add(next[target[k]], from + log_w[k], fast);
    });
    if (config_.step_checksum) report(t + 1, row_checksum(forward.row(t + 1)));
  }
  return forward;
}

LogChart ParallelBackend::backward_fill(std::span<const SymbolId> input) {
  const std::size_t n = input.size();
  LogChart backward(n + 1, model_->num_states(), kLogZero);
  for (const FinalWeight& f : model_->finals()) backward.at(n, f.state) = std::log(f.weight);
  if (config_.step_checksum) report(n, row_checksum(backward.row(n)));

  const StateId* source = device_.source.data();
  const StateId* target = device_.target.data();
  const double* log_w = device_.log_weight.data();
  const bool fast = config_.fast_math;

  for (std::size_t t = n; t-- > 0;) {
    const auto next = backward.row(t + 1);
    auto cur = backward.row(t);
    launch(transitions_for(*model_, input[t]), [&](ArcId k) {
      const double to = next[target[k]];
      if (to == kLogZero) return;
      atomic_log_add(cur[source[k]], log_w[k] + to, fast);
    });
    if (config_.step_checksum) report(t, row_checksum(backward.row(t)));
  }
  return backward;
}

PosteriorTable ParallelBackend::expected_counts(std::span<const SymbolId> input) {
  const LogChart forward = forward_fill(input);
  const LogChart backward = backward_fill(input);

  PosteriorTable table;
  table.log_z = log_partition(*model_, forward);
  table.arc_totals.assign(device_.source.size(), 0.0);
  table.steps.reserve(input.size());

  const StateId* source = device_.source.data();
  const StateId* target = device_.target.data();
  const double* log_w = device_.log_weight.data();

  for (std::size_t t = 0; t < input.size(); ++t) {
    const ArcRange range = transitions_for(*model_, input[t]);
    StepPosteriors step{range, std::vector<double>(range.size(), 0.0)};
    const auto alpha = forward.row(t);
    const auto beta = backward.row(t + 1);
    // Each arc appears once per step, so its gamma slot and running total
    // have a single writer within the step.
    launch(range, [&](ArcId k) {
      const double mass = log_mul(log_mul(alpha[source[k]], log_w[k]), beta[target[k]]);
      if (mass == kLogZero) return;
      const double g = std::exp(mass - table.log_z);
      step.gamma[k - range.begin] = g;
      table.arc_totals[k] += g;
    });
    table.steps.push_back(std::move(step));
  }
  return table;
}

DecodePath ParallelBackend::reconstruct(const ViterbiChart& chart, std::span<const SymbolId> input) {
  const FinalChoice best = finish(*model_, chart);
  if (chart.cells.num_rows() != input.size() + 1) throw CorruptChart("chart/input length mismatch");

  // Sequential walk over the backend arrays.
  std::vector<ArcId> arcs(input.size());
  StateId q = model_->finals()[best.final_index].state;
  const std::size_t z = device_.source.size();
  for (std::size_t t = input.size(); t > 0; --t) {
    const std::uint32_t k = cell_back_pointer(chart.cells.at(t, q));
    if (k >= z || device_.target[k] != q) {
      throw CorruptChart("broken back-pointer at step " + std::to_string(t) + ", state " +
                         std::to_string(q));
    }
    arcs[t - 1] = k;
    q = device_.source[k];
  }
  if (q != model_->start()) throw CorruptChart("back-pointer chain does not reach the start state");
  return make_path(*model_, std::move(arcs), best.final_index);
}

DecodePath ParallelBackend::decode(std::string_view sentence, WeightDomain domain) {
  const auto input = tokenize(*model_, sentence);
  return reconstruct(viterbi_fill(input, domain), input);
}

ViterbiChart par_viterbi_fill(const TransducerModel& model, std::span<const SymbolId> input,
                              const ParallelConfig& config, WeightDomain domain) {
  return ParallelBackend(model, config).viterbi_fill(input, domain);
}

LogChart par_forward_fill(const TransducerModel& model, std::span<const SymbolId> input,
                          const ParallelConfig& config) {
  return ParallelBackend(model, config).forward_fill(input);
}

LogChart par_backward_fill(const TransducerModel& model, std::span<const SymbolId> input,
                           const ParallelConfig& config) {
  return ParallelBackend(model, config).backward_fill(input);
}

PosteriorTable par_expected_counts(const TransducerModel& model, std::span<const SymbolId> input,
                                   const ParallelConfig& config) {
  return ParallelBackend(model, config).expected_counts(input);
}

DecodePath reconstruct_on_device(const ViterbiChart& chart, const TransducerModel& model,
                                 std::span<const SymbolId> input, const ParallelConfig& config) {
  return ParallelBackend(model, config).reconstruct(chart, input);
}

}  // namespace pfst
