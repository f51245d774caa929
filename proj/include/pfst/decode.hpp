#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfst/automaton.hpp"
#include "pfst/chart.hpp"
#include "pfst/semiring.hpp"

namespace pfst {

// Maps whitespace-separated tokens through the input alphabet.
// Throws UnknownToken(token, position).
std::vector<SymbolId> tokenize(const TransducerModel& model, std::string_view sentence);

struct ViterbiChart {
  WeightDomain domain = WeightDomain::log;
  Chart<PackedCell> cells;

  friend bool operator==(const ViterbiChart&, const ViterbiChart&) = default;
};

ViterbiChart viterbi_fill(const TransducerModel& model, std::span<const SymbolId> input,
                          WeightDomain domain = WeightDomain::log);

struct FinalChoice {
  std::size_t final_index = 0;  // index into model.finals()
  double log_weight = 0.0;      // chart value at the final state times its final weight
};

// Best accepting entry of the last chart row. Ties go to the larger final
// index. Throws NoPath when every candidate has weight zero.
FinalChoice finish(const TransducerModel& model, const ViterbiChart& chart);

struct DecodePath {
  std::vector<ArcId> arcs;
  std::vector<std::string> output;
  std::size_t final_index = 0;
  double log_weight = 0.0;  // sum of arc log weights plus the final log weight

  double probability() const { return std::exp(log_weight); }
  std::string output_text() const;
};

// Log weight of a complete path, accumulated in arc order in double precision.
double path_log_weight(const TransducerModel& model, std::span<const ArcId> arcs,
                       std::size_t final_index);

// Builds a DecodePath from an arc sequence, looking outputs up through O.
DecodePath make_path(const TransducerModel& model, std::vector<ArcId> arcs,
                     std::size_t final_index);

// Follows back-pointers from the chosen final state. Throws CorruptChart
// when the chain does not lead back to the start state.
DecodePath viterbi_backtrace(const TransducerModel& model, const ViterbiChart& chart,
                             std::span<const SymbolId> input, const FinalChoice& best);

DecodePath decode(const TransducerModel& model, std::string_view sentence,
                  WeightDomain domain = WeightDomain::log);

// Order-sensitive hash of a chart row's bits.
std::uint64_t row_checksum(std::span<const PackedCell> row);
std::uint64_t row_checksum(std::span<const double> row);

}  // namespace pfst
