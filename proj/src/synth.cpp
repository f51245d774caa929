#include "pfst/synth.hpp"

#include <set>
#include <tuple>

namespace pfst {

TransducerModel random_model(const RandomModelShape& shape, std::mt19937_64& rng) {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  for (std::size_t i = 0; i < shape.num_symbols; ++i) inputs.push_back("i" + std::to_string(i));
  for (std::size_t i = 0; i < shape.num_output_symbols; ++i) outputs.push_back("o" + std::to_string(i));

  std::uniform_int_distribution<StateId> state(0, static_cast<StateId>(shape.num_states - 1));
  std::uniform_int_distribution<std::size_t> in_sym(0, shape.num_symbols - 1);
  std::uniform_int_distribution<std::size_t> out_sym(0, shape.num_output_symbols - 1);
  std::uniform_real_distribution<double> weight(shape.min_weight, shape.max_weight);
  std::bernoulli_distribution is_final(shape.final_fraction);

  std::set<std::tuple<StateId, StateId, std::size_t, std::size_t>> seen;
  std::vector<ArcSpec> arcs;
  arcs.reserve(shape.num_arcs);
  for (std::size_t i = 0; i < shape.num_arcs; ++i) {
    const StateId s = state(rng);
    const StateId t = state(rng);
    const std::size_t a = in_sym(rng);
    const std::size_t o = out_sym(rng);
    const double w = weight(rng);
    if (!seen.emplace(s, t, a, o).second) continue;
    arcs.push_back({s, t, inputs[a], outputs[o], w});
  }

  std::vector<FinalWeight> finals;
  for (StateId q = 0; q < shape.num_states; ++q) {
    const bool f = q == 0 ? (shape.start_final || is_final(rng)) : is_final(rng);
    if (f) finals.push_back({q, weight(rng)});
  }
  return build_from_arcs(arcs, shape.num_states, 0, finals, SymbolTable(inputs),
                         SymbolTable(outputs));
}

std::vector<SymbolId> random_input(const TransducerModel& model, std::size_t length,
                                   std::mt19937_64& rng) {
  std::uniform_int_distribution<SymbolId> sym(
      0, static_cast<SymbolId>(model.input_symbols().size() - 1));
  std::vector<SymbolId> input(length);
  for (auto& s : input) s = sym(rng);
  return input;
}

std::string to_sentence(const TransducerModel& model, std::span<const SymbolId> input) {
  std::string text;
  for (SymbolId s : input) {
    if (!text.empty()) text += ' ';
    text += model.input_symbols().token(s);
  }
  return text;
}

}  // namespace pfst
