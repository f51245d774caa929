#include "pfst/modelio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace pfst {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool is_comment_or_blank(const std::vector<std::string_view>& fields) {
  return fields.empty() || fields.front().front() == '#';
}

template <class T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

double to_probability(std::string_view text, WeightConvention convention, std::size_t line) {
  const auto value = parse_number<double>(text);
  if (!value) throw ParseError(line, "malformed weight '" + std::string(text) + "'");
  const double p = convention == WeightConvention::neglog ? std::exp(-*value) : *value;
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw ParseError(line, "weight '" + std::string(text) + "' is not a positive probability");
  }
  return p;
}

std::string format_weight(double p, WeightConvention convention) {
  if (convention == WeightConvention::neglog) return fmt::format("{}", -std::log(p) + 0.0);
  return fmt::format("{}", p);
}

// Resolves an arc label by token first, then by numeric file id.
std::string resolve_label(std::string_view label, const SymbolTable& table,
                          const std::map<std::uint64_t, std::string>& by_file_id,
                          std::size_t line, const char* which) {
  if (label == kEpsilon) throw ParseError(line, "epsilon arcs are not supported");
  if (table.find(label)) return std::string(label);
  if (auto id = parse_number<std::uint64_t>(label)) {
    if (*id == 0) throw ParseError(line, "epsilon arcs are not supported");
    if (auto it = by_file_id.find(*id); it != by_file_id.end()) return it->second;
  }
  throw ParseError(line, std::string("unknown ") + which + " symbol '" + std::string(label) + "'");
}

struct SymbolFile {
  SymbolTable table;
  std::map<std::uint64_t, std::string> by_id;
};

SymbolFile parse_symbol_file(std::istream& in) {
  std::map<std::uint64_t, std::string> by_id;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (is_comment_or_blank(fields)) continue;
    if (fields.size() != 2) throw ParseError(line_no, "expected 'token<TAB>id'");
    const auto id = parse_number<std::uint64_t>(fields[1]);
    if (!id) throw ParseError(line_no, "malformed symbol id '" + std::string(fields[1]) + "'");
    if (!by_id.emplace(*id, std::string(fields[0])).second) {
      throw ParseError(line_no, "duplicate symbol id " + std::to_string(*id));
    }
  }
  SymbolFile file;
  for (const auto& [id, token] : by_id) {
    if (id == 0) continue;
    if (file.table.find(token)) throw ParseError(0, "duplicate symbol '" + token + "'");
    file.table.add(token);
  }
  by_id.erase(0);
  file.by_id = std::move(by_id);
  return file;
}

}  // namespace

WeightConvention parse_weight_convention(std::string_view name) {
  if (name == "prob") return WeightConvention::prob;
  if (name == "neglog") return WeightConvention::neglog;
  throw std::invalid_argument("unknown weight convention '" + std::string(name) + "'");
}

SymbolTable read_symbol_file(std::istream& in) { return parse_symbol_file(in).table; }

std::string write_symbol_file(const SymbolTable& symbols) {
  std::string out = fmt::format("{}\t0\n", kEpsilon);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    out += fmt::format("{}\t{}\n", symbols.token(static_cast<SymbolId>(i)), i + 1);
  }
  return out;
}

TransducerModel read_att_text(std::istream& fst, std::istream& isyms, std::istream& osyms,
                              WeightConvention convention) {
  const SymbolFile in_file = parse_symbol_file(isyms);
  const SymbolFile out_file = parse_symbol_file(osyms);

  std::vector<ArcSpec> arcs;
  std::vector<FinalWeight> finals;
  std::size_t max_state = 0;
  const auto parse_state = [&](std::string_view text, std::size_t line) {
    const auto s = parse_number<StateId>(text);
    if (!s) throw ParseError(line, "malformed state '" + std::string(text) + "'");
    max_state = std::max<std::size_t>(max_state, *s);
    return *s;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(fst, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (is_comment_or_blank(fields)) continue;
    switch (fields.size()) {
      case 1:
      case 2: {
        const StateId s = parse_state(fields[0], line_no);
        const double w = fields.size() == 2 ? to_probability(fields[1], convention, line_no) : 1.0;
        finals.push_back({s, w});
        break;
      }
      case 4:
      case 5: {
        ArcSpec arc;
        arc.source = parse_state(fields[0], line_no);
        arc.target = parse_state(fields[1], line_no);
        arc.input = resolve_label(fields[2], in_file.table, in_file.by_id, line_no, "input");
        arc.output = resolve_label(fields[3], out_file.table, out_file.by_id, line_no, "output");
        arc.weight = fields.size() == 5 ? to_probability(fields[4], convention, line_no) : 1.0;
        arcs.push_back(std::move(arc));
        break;
      }
      default:
        throw ParseError(line_no, "expected 1, 2, 4 or 5 fields, got " +
                                      std::to_string(fields.size()));
    }
  }
  return build_from_arcs(arcs, max_state + 1, 0, finals, in_file.table, out_file.table);
}

AttText write_att_text(const TransducerModel& model, WeightConvention convention) {
  const StateId start = model.start();
  const auto relabel = [start](StateId s) -> StateId {
    if (s == start) return 0;
    if (s == 0) return start;
    return s;
  };

  AttText text;
  const TransitionStore& a = model.arcs();
  for (SymbolId sym = 0; sym < model.input_symbols().size(); ++sym) {
    for (ArcId k : transitions_for(model, sym).indices()) {
      text.fst += fmt::format("{}\t{}\t{}\t{}\t{}\n", relabel(a.source[k]), relabel(a.target[k]),
                              model.input_symbols().token(sym),
                              model.output_symbols().token(a.output[k]),
                              format_weight(a.weight[k], convention));
    }
  }
  for (const FinalWeight& f : model.finals()) {
    text.fst += fmt::format("{}\t{}\n", relabel(f.state), format_weight(f.weight, convention));
  }
  text.isyms = write_symbol_file(model.input_symbols());
  text.osyms = write_symbol_file(model.output_symbols());
  return text;
}

ModelFiles ModelFiles::from_prefix(const std::string& prefix) {
  return {prefix + ".fst", prefix + ".isyms", prefix + ".osyms"};
}

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace

TransducerModel load_model(const ModelFiles& files, WeightConvention convention) {
  auto fst = open_in(files.fst);
  auto isyms = open_in(files.isyms);
  auto osyms = open_in(files.osyms);
  try {
    return read_att_text(fst, isyms, osyms, convention);
  } catch (const ParseError& e) {
    throw Error(files.fst + ": " + e.what());
  }
}

void save_model(const TransducerModel& model, const ModelFiles& files,
                WeightConvention convention) {
  const AttText text = write_att_text(model, convention);
  write_file(files.fst, text.fst);
  write_file(files.isyms, text.isyms);
  write_file(files.osyms, text.osyms);
}

// ---------------------------------------------------------------------------

TranslationTable read_translation_table(std::istream& in) {
  TranslationTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (is_comment_or_blank(fields)) continue;
    if (fields.size() != 3) throw ParseError(line_no, "expected 'e<TAB>f<TAB>p'");
    const auto p = parse_number<double>(fields[2]);
    if (!p) throw ParseError(line_no, "malformed probability '" + std::string(fields[2]) + "'");
    table.rows.push_back({std::string(fields[0]), std::string(fields[1]), *p});
  }
  return table;
}

double BigramModel::prob(const std::string& u, const std::string& v) const {
  auto it = probs.find({u, v});
  return it == probs.end() ? 0.0 : it->second;
}

BigramModel build_bigram_lm(std::istream& corpus) {
  // Bigram counts keyed by first appearance.
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  std::map<std::string, std::size_t> context_counts;
  std::vector<std::string> vocabulary{std::string(kSentenceStart)};
  std::map<std::string, StateId> word_state{{std::string(kSentenceStart), 0}};

  std::string line;
  std::size_t sentences = 0;
  while (std::getline(corpus, line)) {
    std::istringstream words(line);
    std::vector<std::string> tokens{std::string(kSentenceStart)};
    for (std::string w; words >> w;) tokens.push_back(std::move(w));
    if (tokens.size() == 1) continue;
    tokens.emplace_back(kSentenceEnd);
    ++sentences;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const auto& v = tokens[i];
      if (v == kSentenceStart) throw Error("corpus may not contain the <s> marker");
      if (std::find(vocabulary.begin(), vocabulary.end(), v) == vocabulary.end()) {
        vocabulary.push_back(v);
      }
      if (v != kSentenceEnd && !word_state.contains(v)) {
        word_state.emplace(v, static_cast<StateId>(word_state.size()));
      }
      if (i + 1 < tokens.size() && v == kSentenceEnd) {
        throw Error("corpus may not contain the </s> marker mid-sentence");
      }
      auto bigram = std::make_pair(tokens[i - 1], v);
      if (counts[bigram]++ == 0) order.push_back(bigram);
      ++context_counts[tokens[i - 1]];
    }
  }
  if (sentences == 0) throw Error("empty corpus");

  BigramModel lm;
  lm.vocabulary = std::move(vocabulary);
  const auto final_state = static_cast<StateId>(word_state.size());
  std::vector<ArcSpec> arcs;
  arcs.reserve(order.size());
  for (const auto& bigram : order) {
    const auto& [u, v] = bigram;
    const double p = static_cast<double>(counts.at(bigram)) /
                     static_cast<double>(context_counts.at(u));
    lm.probs.emplace(bigram, p);
    const StateId target = v == kSentenceEnd ? final_state : word_state.at(v);
    arcs.push_back({word_state.at(u), target, v, v, p});
  }
  const FinalWeight finals[] = {{final_state, 1.0}};
  lm.acceptor = build_from_arcs(arcs, final_state + 1, 0, finals);
  return lm;
}

TransducerModel build_translation_fst(const TranslationTable& table) {
  std::map<std::string, double> mass;
  std::vector<ArcSpec> arcs;
  arcs.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (!(row.prob > 0.0)) {
      throw ModelError("translation " + row.target + " -> " + row.source +
                       " has non-positive probability");
    }
    mass[row.target] += row.prob;
    arcs.push_back({0, 0, row.target, row.source, row.prob});
  }
  for (const auto& [e, total] : mass) {
    if (total > 1.0 + 1e-9) {
      throw ModelError(fmt::format("translations of '{}' sum to {} > 1", e, total));
    }
  }
  const FinalWeight finals[] = {{0, 1.0}};
  return build_from_arcs(arcs, 1, 0, finals);
}

TransducerModel compose_lm_tt(const TransducerModel& lm, const TransducerModel& tt,
                              std::vector<std::string>* dropped) {
  if (tt.num_states() != 1) throw ModelError("translation transducer must have one state");
  const TransitionStore& lm_arcs = lm.arcs();
  const TransitionStore& tt_arcs = tt.arcs();

  std::vector<ArcSpec> arcs;
  for (SymbolId e = 0; e < lm.input_symbols().size(); ++e) {
    const std::string& word = lm.input_symbols().token(e);
    const auto tt_symbol = tt.input_symbols().find(word);
    const ArcRange translations =
        tt_symbol ? transitions_for(tt, *tt_symbol) : ArcRange{};
    const ArcRange lm_range = transitions_for(lm, e);
    if (translations.empty()) {
      if (dropped && !lm_range.empty()) dropped->push_back(word);
      continue;
    }
    for (ArcId i : lm_range.indices()) {
      for (ArcId j : translations.indices()) {
        arcs.push_back({lm_arcs.source[i], lm_arcs.target[i],
                        tt.output_symbols().token(tt_arcs.output[j]), word,
                        lm_arcs.weight[i] * tt_arcs.weight[j]});
      }
    }
  }
  if (arcs.empty()) throw ModelError("composition has no arcs");
  return build_from_arcs(arcs, lm.num_states(), lm.start(), lm.finals());
}

}  // namespace pfst
