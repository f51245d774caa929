#pragma once

#include <span>
#include <vector>

#include "pfst/automaton.hpp"
#include "pfst/chart.hpp"

namespace pfst {

using LogChart = Chart<double>;

// forward[t][q]: log total weight of paths from the start consuming the
// first t symbols and ending in q.
LogChart forward_fill(const TransducerModel& model, std::span<const SymbolId> input);

// backward[t][q]: log total weight of paths from q consuming the remaining
// symbols and accepting. Row n holds the log final weights.
LogChart backward_fill(const TransducerModel& model, std::span<const SymbolId> input);

// log Z from a filled forward chart. Throws NoPath when Z = 0.
double log_partition(const TransducerModel& model, const LogChart& forward);
double partition(const TransducerModel& model, std::span<const SymbolId> input);

// Posteriors of the arcs consumed at one time step.
struct StepPosteriors {
  ArcRange arcs;
  std::vector<double> gamma;  // gamma[j] belongs to arc arcs.begin + j
};

struct PosteriorTable {
  double log_z = 0.0;
  std::vector<StepPosteriors> steps;  // one per input symbol
  std::vector<double> arc_totals;     // expected count per arc index

  // Zero for arcs not active at step t.
  double gamma(std::size_t t, ArcId k) const;
};

// Arc posteriors and per-arc expected counts. Throws NoPath.
PosteriorTable expected_counts(const TransducerModel& model, std::span<const SymbolId> input);

// Same from precomputed charts.
PosteriorTable expected_counts(const TransducerModel& model, std::span<const SymbolId> input,
                               const LogChart& forward, const LogChart& backward);

}  // namespace pfst
