#include "pfst/decode.hpp"

#include <algorithm>
#include <sstream>

namespace pfst {

std::vector<SymbolId> tokenize(const TransducerModel& model, std::string_view sentence) {
  std::vector<SymbolId> ids;
  std::istringstream in{std::string(sentence)};
  std::string token;
  while (in >> token) {
    auto id = model.input_symbols().find(token);
    if (!id) throw UnknownToken(token, ids.size());
    ids.push_back(*id);
  }
  return ids;
}

ViterbiChart viterbi_fill(const TransducerModel& model, std::span<const SymbolId> input,
                          WeightDomain domain) {
  const TransitionStore& arcs = model.arcs();
  const auto log_w = model.log_weights();
  const PackedCell zero = empty_cell(domain);
  const float zero_weight = viterbi_zero(domain);

  ViterbiChart chart{domain, Chart<PackedCell>(input.size() + 1, model.num_states(), zero)};
  chart.cells.at(0, model.start()) = pack_unchecked(viterbi_one(domain), kNullBackPointer);

  for (std::size_t t = 1; t <= input.size(); ++t) {
    const auto prev = chart.cells.row(t - 1);
    auto cur = chart.cells.row(t);
    for (ArcId k : transitions_for(model, input[t - 1]).indices()) {
      const float w = cell_weight(prev[arcs.source[k]]);
      if (w == zero_weight) continue;
      const PackedCell candidate =
          pack_unchecked(viterbi_extend(domain, w, log_w[k], arcs.weight[k]), k);
      PackedCell& cell = cur[arcs.target[k]];
      cell = packed_max(cell, candidate);
    }
  }
  return chart;
}

FinalChoice finish(const TransducerModel& model, const ViterbiChart& chart) {
  const WeightDomain d = chart.domain;
  const auto last = chart.cells.row(chart.cells.num_rows() - 1);
  PackedCell best = empty_cell(d);
  const auto finals = model.finals();
  for (std::size_t i = 0; i < finals.size(); ++i) {
    const float w = cell_weight(last[finals[i].state]);
    if (w == viterbi_zero(d)) continue;
    const float fw = viterbi_extend(d, w, std::log(finals[i].weight), finals[i].weight);
    best = packed_max(best, pack_unchecked(fw, static_cast<std::uint32_t>(i)));
  }
  if (cell_back_pointer(best) == kNullBackPointer) throw NoPath();
  return {cell_back_pointer(best), viterbi_to_log(d, cell_weight(best))};
}

std::string DecodePath::output_text() const {
  std::string text;
  for (const auto& token : output) {
    if (!text.empty()) text += ' ';
    text += token;
  }
  return text;
}

double path_log_weight(const TransducerModel& model, std::span<const ArcId> arcs,
                       std::size_t final_index) {
  double sum = 0.0;
  for (ArcId k : arcs) sum += model.log_weights()[k];
  return sum + std::log(model.finals()[final_index].weight);
}

DecodePath make_path(const TransducerModel& model, std::vector<ArcId> arcs,
                     std::size_t final_index) {
  DecodePath path;
  path.output.reserve(arcs.size());
  for (ArcId k : arcs) path.output.push_back(model.output_symbols().token(model.arcs().output[k]));
  path.log_weight = path_log_weight(model, arcs, final_index);
  path.final_index = final_index;
  path.arcs = std::move(arcs);
  return path;
}

DecodePath viterbi_backtrace(const TransducerModel& model, const ViterbiChart& chart,
                             std::span<const SymbolId> input, const FinalChoice& best) {
  const TransitionStore& a = model.arcs();
  if (chart.cells.num_rows() != input.size() + 1) throw CorruptChart("chart/input length mismatch");
  if (best.final_index >= model.finals().size()) throw CorruptChart("final index out of range");

  std::vector<ArcId> arcs(input.size());
  StateId q = model.finals()[best.final_index].state;
  for (std::size_t t = input.size(); t > 0; --t) {
    const std::uint32_t k = cell_back_pointer(chart.cells.at(t, q));
    if (!transitions_for(model, input[t - 1]).contains(k) || a.target[k] != q) {
      throw CorruptChart("broken back-pointer at step " + std::to_string(t) + ", state " +
                         std::to_string(q));
    }
    arcs[t - 1] = k;
    q = a.source[k];
  }
  if (q != model.start()) throw CorruptChart("back-pointer chain does not reach the start state");
  return make_path(model, std::move(arcs), best.final_index);
}

DecodePath decode(const TransducerModel& model, std::string_view sentence, WeightDomain domain) {
  const auto input = tokenize(model, sentence);
  const auto chart = viterbi_fill(model, input, domain);
  return viterbi_backtrace(model, chart, input, finish(model, chart));
}

namespace {

// FNV-1a over 64-bit words.
std::uint64_t fnv(std::uint64_t h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xFF;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

std::uint64_t row_checksum(std::span<const PackedCell> row) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (PackedCell c : row) h = fnv(h, c.word);
  return h;
}

std::uint64_t row_checksum(std::span<const double> row) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (double v : row) h = fnv(h, std::bit_cast<std::uint64_t>(v));
  return h;
}

}  // namespace pfst
