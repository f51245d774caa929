#include "pfst/estimate.hpp"

#include <cmath>

#include "pfst/semiring.hpp"

namespace pfst {

LogChart forward_fill(const TransducerModel& model, std::span<const SymbolId> input) {
  const TransitionStore& a = model.arcs();
  const auto log_w = model.log_weights();
  LogChart forward(input.size() + 1, model.num_states(), kLogZero);
  forward.at(0, model.start()) = kLogOne;

  for (std::size_t t = 0; t < input.size(); ++t) {
    const auto prev = forward.row(t);
    auto next = forward.row(t + 1);
    for (ArcId k : transitions_for(model, input[t]).indices()) {
      const double from = prev[a.source[k]];
      if (from == kLogZero) continue;
      double& cell = next[a.target[k]];
      cell = log_add(cell, from + log_w[k]);
    }
  }
  return forward;
}

LogChart backward_fill(const TransducerModel& model, std::span<const SymbolId> input) {
  const TransitionStore& a = model.arcs();
  const auto log_w = model.log_weights();
  const std::size_t n = input.size();
  LogChart backward(n + 1, model.num_states(), kLogZero);
  for (const FinalWeight& f : model.finals()) backward.at(n, f.state) = std::log(f.weight);

  for (std::size_t t = n; t-- > 0;) {
    const auto next = backward.row(t + 1);
    auto cur = backward.row(t);
    for (ArcId k : transitions_for(model, input[t]).indices()) {
      const double to = next[a.target[k]];
      if (to == kLogZero) continue;
      double& cell = cur[a.source[k]];
      cell = log_add(cell, log_w[k] + to);
    }
  }
  return backward;
}

double log_partition(const TransducerModel& model, const LogChart& forward) {
  const auto last = forward.row(forward.num_rows() - 1);
  double log_z = kLogZero;
  for (const FinalWeight& f : model.finals()) {
    log_z = log_add(log_z, log_mul(last[f.state], std::log(f.weight)));
  }
  if (log_z == kLogZero) throw NoPath();
  return log_z;
}

double partition(const TransducerModel& model, std::span<const SymbolId> input) {
  return std::exp(log_partition(model, forward_fill(model, input)));
}

double PosteriorTable::gamma(std::size_t t, ArcId k) const {
  const StepPosteriors& step = steps.at(t);
  return step.arcs.contains(k) ? step.gamma[k - step.arcs.begin] : 0.0;
}

PosteriorTable expected_counts(const TransducerModel& model, std::span<const SymbolId> input) {
  return expected_counts(model, input, forward_fill(model, input), backward_fill(model, input));
}

PosteriorTable expected_counts(const TransducerModel& model, std::span<const SymbolId> input,
                               const LogChart& forward, const LogChart& backward) {
  const TransitionStore& a = model.arcs();
  const auto log_w = model.log_weights();

  PosteriorTable table;
  table.log_z = log_partition(model, forward);
  table.arc_totals.assign(a.size(), 0.0);
  table.steps.reserve(input.size());

  for (std::size_t t = 0; t < input.size(); ++t) {
    const ArcRange range = transitions_for(model, input[t]);
    StepPosteriors step{range, std::vector<double>(range.size(), 0.0)};
    const auto alpha = forward.row(t);
    const auto beta = backward.row(t + 1);
    for (ArcId k : range.indices()) {
      const double mass = log_mul(log_mul(alpha[a.source[k]], log_w[k]), beta[a.target[k]]);
      if (mass == kLogZero) continue;
      const double g = std::exp(mass - table.log_z);
      step.gamma[k - range.begin] = g;
      table.arc_totals[k] += g;
    }
    table.steps.push_back(std::move(step));
  }
  return table;
}

}  // namespace pfst
