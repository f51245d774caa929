#include "pfst/oracle.hpp"

#include <algorithm>

namespace pfst {

namespace {

struct Enumerator {
  const TransducerModel& model;
  std::span<const SymbolId> input;
  PathSet& out;
  std::vector<ArcId> prefix;

  void walk(std::size_t t, StateId q, long double weight) {
    if (t == input.size()) {
      const auto finals = model.finals();
      for (std::size_t i = 0; i < finals.size(); ++i) {
        if (finals[i].state != q) continue;
        out.paths.push_back({prefix, i, weight * static_cast<long double>(finals[i].weight)});
      }
      return;
    }
    const TransitionStore& a = model.arcs();
    for (ArcId k : transitions_for(model, input[t]).indices()) {
      if (a.source[k] != q) continue;
      prefix.push_back(k);
      walk(t + 1, a.target[k], weight * static_cast<long double>(a.weight[k]));
      prefix.pop_back();
    }
  }
};

// Reverse-lexicographic comparison on (final index, arc n, ..., arc 1).
bool tie_less(const OraclePath& a, const OraclePath& b) {
  if (a.final_index != b.final_index) return a.final_index < b.final_index;
  return std::lexicographical_compare(a.arcs.rbegin(), a.arcs.rend(), b.arcs.rbegin(),
                                      b.arcs.rend());
}

}  // namespace

PathSet enumerate_paths(const TransducerModel& model, std::span<const SymbolId> input) {
  if (model.num_states() > kOracleMaxStates || input.size() > kOracleMaxLength) {
    throw Error("oracle size guard exceeded (at most " + std::to_string(kOracleMaxStates) +
                " states and input length " + std::to_string(kOracleMaxLength) + ")");
  }
  PathSet set;
  set.input_length = input.size();
  Enumerator e{model, input, set, {}};
  e.prefix.reserve(input.size());
  e.walk(0, model.start(), 1.0L);
  return set;
}

const OraclePath& oracle_viterbi(const PathSet& paths) {
  if (paths.paths.empty()) throw NoPath();
  const OraclePath* best = &paths.paths.front();
  for (const OraclePath& p : paths.paths) {
    if (p.weight > best->weight || (p.weight == best->weight && tie_less(*best, p))) best = &p;
  }
  return *best;
}

long double oracle_total(const PathSet& paths) {
  // Kahan summation on top of extended precision.
  long double sum = 0.0L;
  long double carry = 0.0L;
  for (const OraclePath& p : paths.paths) {
    const long double y = p.weight - carry;
    const long double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::vector<std::map<ArcId, long double>> oracle_posteriors(const PathSet& paths) {
  const long double total = oracle_total(paths);
  if (!(total > 0.0L)) throw NoPath();
  std::vector<std::map<ArcId, long double>> gamma(paths.input_length);
  for (const OraclePath& p : paths.paths) {
    for (std::size_t t = 0; t < p.arcs.size(); ++t) gamma[t][p.arcs[t]] += p.weight;
  }
  for (auto& step : gamma) {
    for (auto& [k, mass] : step) mass /= total;
  }
  return gamma;
}

}  // namespace pfst
