#include "pfst/automaton.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

namespace pfst {

TransducerModel::TransducerModel(std::size_t num_states, SymbolTable input_symbols,
                                 SymbolTable output_symbols, StateId start,
                                 std::vector<FinalWeight> finals, TransitionStore arcs)
    : num_states_(num_states),
      input_symbols_(std::move(input_symbols)),
      output_symbols_(std::move(output_symbols)),
      start_(start),
      finals_(std::move(finals)),
      arcs_(std::move(arcs)) {
  log_weights_.reserve(arcs_.weight.size());
  for (double w : arcs_.weight) log_weights_.push_back(std::log(w));
}

TransducerModel build_from_arcs(std::span<const ArcSpec> arcs, std::size_t num_states,
                                StateId start, std::span<const FinalWeight> finals,
                                SymbolTable input_symbols, SymbolTable output_symbols) {
  if (num_states == 0) throw ModelError("model needs at least one state");
  if (start >= num_states) throw ModelError("start state " + std::to_string(start) + " out of range");

  struct Staged {
    SymbolId input;
    StateId source;
    StateId target;
    SymbolId output;
    double weight;
  };
  std::vector<Staged> staged;
  staged.reserve(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const ArcSpec& arc = arcs[i];
    if (arc.source >= num_states || arc.target >= num_states) {
      throw ModelError("arc " + std::to_string(i) + ": state index out of range");
    }
    if (!(arc.weight > 0.0) || !std::isfinite(arc.weight)) {
      throw ModelError("arc " + std::to_string(i) + ": non-positive weight");
    }
    staged.push_back({input_symbols.add(arc.input), arc.source, arc.target,
                      output_symbols.add(arc.output), arc.weight});
  }

  const auto key = [](const Staged& s) { return std::tie(s.input, s.source, s.target, s.output); };
  std::stable_sort(staged.begin(), staged.end(),
                   [&](const Staged& a, const Staged& b) { return key(a) < key(b); });
  for (std::size_t i = 1; i < staged.size(); ++i) {
    if (key(staged[i - 1]) == key(staged[i])) {
      const Staged& d = staged[i];
      throw ModelError("duplicate arc " + std::to_string(d.source) + " -> " +
                       std::to_string(d.target) + " on " + input_symbols.token(d.input) + ":" +
                       output_symbols.token(d.output));
    }
  }

  std::set<StateId> seen_finals;
  for (const auto& f : finals) {
    if (f.state >= num_states) throw ModelError("final state " + std::to_string(f.state) + " out of range");
    if (!(f.weight > 0.0) || !std::isfinite(f.weight)) {
      throw ModelError("final state " + std::to_string(f.state) + ": non-positive weight");
    }
    if (!seen_finals.insert(f.state).second) {
      throw ModelError("duplicate final state " + std::to_string(f.state));
    }
  }

  TransitionStore store;
  const std::size_t m = input_symbols.size();
  store.offsets.assign(m + 1, 0);
  store.source.reserve(staged.size());
  store.target.reserve(staged.size());
  store.output.reserve(staged.size());
  store.weight.reserve(staged.size());
  for (const Staged& s : staged) {
    ++store.offsets[s.input + 1];
    store.source.push_back(s.source);
    store.target.push_back(s.target);
    store.output.push_back(s.output);
    store.weight.push_back(s.weight);
  }
  std::partial_sum(store.offsets.begin(), store.offsets.end(), store.offsets.begin());

  return TransducerModel(num_states, std::move(input_symbols), std::move(output_symbols), start,
                         std::vector<FinalWeight>(finals.begin(), finals.end()), std::move(store));
}

ArcRange transitions_for(const TransducerModel& model, SymbolId symbol) {
  const auto& offsets = model.arcs().offsets;
  if (symbol + std::size_t{1} >= offsets.size()) {
    throw std::out_of_range("input symbol id " + std::to_string(symbol) + " out of range");
  }
  return {offsets[symbol], offsets[symbol + 1]};
}

std::vector<std::string> validate(const TransducerModel& model) {
  std::vector<std::string> out;
  const TransitionStore& a = model.arcs();
  const std::size_t m = model.input_symbols().size();
  const std::size_t z = a.source.size();
  const std::size_t q = model.num_states();

  if (q == 0) out.push_back("model has no states");
  if (a.target.size() != z || a.output.size() != z || a.weight.size() != z) {
    out.push_back("S, T, O, P lengths differ");
    return out;
  }
  if (a.offsets.size() != m + 1) {
    out.push_back("R has length " + std::to_string(a.offsets.size()) + ", expected " +
                  std::to_string(m + 1));
  } else {
    if (a.offsets.front() != 0) out.push_back("R[0] is not 0");
    for (std::size_t i = 1; i < a.offsets.size(); ++i) {
      if (a.offsets[i] < a.offsets[i - 1]) {
        out.push_back("R not nondecreasing at index " + std::to_string(i));
      }
    }
    if (a.offsets.back() != z) out.push_back("R[m] is not z");
  }

  for (std::size_t k = 0; k < z; ++k) {
    if (a.source[k] >= q) out.push_back("S out of range at arc " + std::to_string(k));
    if (a.target[k] >= q) out.push_back("T out of range at arc " + std::to_string(k));
    if (a.output[k] >= model.output_symbols().size()) {
      out.push_back("O out of range at arc " + std::to_string(k));
    }
    if (!(a.weight[k] > 0.0)) out.push_back("non-positive weight at arc " + std::to_string(k));
  }

  // Sort order is only meaningful when R is well formed.
  if (out.empty()) {
    for (std::size_t s = 0; s < m; ++s) {
      for (std::size_t k = a.offsets[s] + 1; k < a.offsets[s + 1]; ++k) {
        if (std::tie(a.source[k - 1], a.target[k - 1]) > std::tie(a.source[k], a.target[k])) {
          out.push_back("segment " + std::to_string(s) + " not sorted by (S, T) at arc " +
                        std::to_string(k));
        }
      }
    }
  }

  if (model.start() >= q) out.push_back("start state out of range");
  std::set<StateId> seen;
  for (std::size_t i = 0; i < model.finals().size(); ++i) {
    const FinalWeight& f = model.finals()[i];
    if (f.state >= q) out.push_back("final state out of range at entry " + std::to_string(i));
    if (!(f.weight > 0.0)) out.push_back("non-positive final weight at entry " + std::to_string(i));
    if (!seen.insert(f.state).second) out.push_back("duplicate final state at entry " + std::to_string(i));
  }
  return out;
}

ModelStats stats(const TransducerModel& model) {
  ModelStats s;
  s.num_states = model.num_states();
  s.num_transitions = model.num_arcs();
  const double cells = static_cast<double>(model.input_symbols().size()) *
                       static_cast<double>(s.num_states) * static_cast<double>(s.num_states);
  s.density = cells > 0.0 ? static_cast<double>(s.num_transitions) / cells : 0.0;
  return s;
}

std::vector<ArcSpec> arc_specs(const TransducerModel& model) {
  std::vector<ArcSpec> out;
  const TransitionStore& a = model.arcs();
  out.reserve(a.size());
  for (SymbolId s = 0; s < model.input_symbols().size(); ++s) {
    for (ArcId k : transitions_for(model, s).indices()) {
      out.push_back({a.source[k], a.target[k], model.input_symbols().token(s),
                     model.output_symbols().token(a.output[k]), a.weight[k]});
    }
  }
  return out;
}

}  // namespace pfst
