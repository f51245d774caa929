#pragma once

#include <map>
#include <span>
#include <vector>

#include "pfst/automaton.hpp"

namespace pfst {

// Brute-force reference computed by explicit path enumeration.

struct OraclePath {
  std::vector<ArcId> arcs;
  std::size_t final_index = 0;
  long double weight = 0.0L;  // product of arc weights and the final weight
};

struct PathSet {
  std::size_t input_length = 0;
  std::vector<OraclePath> paths;
};

inline constexpr std::size_t kOracleMaxStates = 64;
inline constexpr std::size_t kOracleMaxLength = 12;

// Every complete path consuming `input`, found depth-first in store order.
// Throws Error when the model or input exceeds the size guard.
PathSet enumerate_paths(const TransducerModel& model, std::span<const SymbolId> input);

// Highest-weight path. Among equal weights the path that is larger when
// compared as (final index, last arc, ..., first arc) wins, matching the
// packed tie-break. Throws NoPath on an empty set.
const OraclePath& oracle_viterbi(const PathSet& paths);

long double oracle_total(const PathSet& paths);

// gamma[t][k]: share of total mass on paths whose t-th arc is k.
// Throws NoPath when the total is zero.
std::vector<std::map<ArcId, long double>> oracle_posteriors(const PathSet& paths);

}  // namespace pfst
