#pragma once

#include <cstddef>
#include <ranges>
#include <span>
#include <string>
#include <vector>

#include "pfst/symbol_table.hpp"
#include "pfst/types.hpp"

namespace pfst {

// One arc as supplied by a caller, with symbols given as tokens.
struct ArcSpec {
  StateId source = 0;
  StateId target = 0;
  std::string input;
  std::string output;
  double weight = 1.0;

  friend bool operator==(const ArcSpec&, const ArcSpec&) = default;
};

struct FinalWeight {
  StateId state = 0;
  double weight = 1.0;

  friend bool operator==(const FinalWeight&, const FinalWeight&) = default;
};

// Half-open range [begin, end) of arc indices sharing one input symbol.
struct ArcRange {
  ArcId begin = 0;
  ArcId end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool contains(ArcId k) const { return begin <= k && k < end; }
  auto indices() const { return std::views::iota(begin, end); }

  friend bool operator==(const ArcRange&, const ArcRange&) = default;
};

// CSR over input symbols, COO within each symbol's segment.
//
// Arcs on input symbol a occupy [offsets[a], offsets[a+1]), sorted by
// (source, target). offsets.back() equals the number of arcs.
struct TransitionStore {
  std::vector<ArcId> offsets;    // R, length m+1
  std::vector<StateId> source;   // S
  std::vector<StateId> target;   // T
  std::vector<SymbolId> output;  // O
  std::vector<double> weight;    // P, probabilities

  std::size_t size() const { return source.size(); }
};

// Weighted finite-state transducer without epsilon arcs.
//
// Immutable once constructed. The constructor does not check invariants so
// that malformed models can be inspected with validate(); use build_from_arcs
// for checked construction.
class TransducerModel {
 public:
  TransducerModel() : TransducerModel(1, {}, {}, 0, {}, TransitionStore{{0}, {}, {}, {}, {}}) {}
  TransducerModel(std::size_t num_states, SymbolTable input_symbols, SymbolTable output_symbols,
                  StateId start, std::vector<FinalWeight> finals, TransitionStore arcs);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_arcs() const { return arcs_.size(); }
  const SymbolTable& input_symbols() const { return input_symbols_; }
  const SymbolTable& output_symbols() const { return output_symbols_; }
  StateId start() const { return start_; }
  std::span<const FinalWeight> finals() const { return finals_; }
  const TransitionStore& arcs() const { return arcs_; }

  // Natural log of every arc weight, index-aligned with arcs().weight.
  std::span<const double> log_weights() const { return log_weights_; }

 private:
  std::size_t num_states_;
  SymbolTable input_symbols_;
  SymbolTable output_symbols_;
  StateId start_;
  std::vector<FinalWeight> finals_;
  TransitionStore arcs_;
  std::vector<double> log_weights_;
};

// Assembles the CSR/COO layout. Input and output symbols not already present
// in the seed tables get ids in first-appearance order.
//
// Throws ModelError on out-of-range states, non-positive weights, duplicate
// (source, target, input, output) arcs or duplicate final states.
TransducerModel build_from_arcs(std::span<const ArcSpec> arcs, std::size_t num_states,
                                StateId start, std::span<const FinalWeight> finals,
                                SymbolTable input_symbols = {}, SymbolTable output_symbols = {});

// Throws std::out_of_range when `symbol` is not a valid input id.
ArcRange transitions_for(const TransducerModel& model, SymbolId symbol);

// Empty iff every structural invariant holds.
std::vector<std::string> validate(const TransducerModel& model);

struct ModelStats {
  std::size_t num_states = 0;
  std::size_t num_transitions = 0;
  double density = 0.0;  // z / (m * |Q|^2)
};

ModelStats stats(const TransducerModel& model);

// Arcs in store order, with symbols mapped back to tokens.
std::vector<ArcSpec> arc_specs(const TransducerModel& model);

}  // namespace pfst
