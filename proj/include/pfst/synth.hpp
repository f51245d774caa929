#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pfst/automaton.hpp"

namespace pfst {

// Random models for tests and benchmarks.
struct RandomModelShape {
  std::size_t num_states = 6;
  std::size_t num_symbols = 3;
  std::size_t num_output_symbols = 3;
  std::size_t num_arcs = 20;  // upper bound; duplicates are skipped
  double min_weight = 0.1;
  double max_weight = 1.0;
  // Probability that a state is final (state 0 excluded from the draw only
  // when `start_final` is false).
  double final_fraction = 0.3;
  bool start_final = false;
};

// Input symbols are named "i0".."i{m-1}" and seeded in order so id == index.
TransducerModel random_model(const RandomModelShape& shape, std::mt19937_64& rng);

// Uniform symbol ids in [0, m).
std::vector<SymbolId> random_input(const TransducerModel& model, std::size_t length,
                                   std::mt19937_64& rng);

// Tokens of `input` joined with spaces.
std::string to_sentence(const TransducerModel& model, std::span<const SymbolId> input);

}  // namespace pfst
