#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pfst/automaton.hpp"

namespace pfst {

// How weights are written in text files: plain probabilities, or negative
// natural logs (the OpenFST tropical/log convention).
enum class WeightConvention { prob, neglog };

WeightConvention parse_weight_convention(std::string_view name);

inline constexpr std::string_view kEpsilon = "<eps>";
inline constexpr std::string_view kSentenceStart = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";

// `token<TAB>id` lines. Id 0 is epsilon and is dropped; the remaining
// tokens are returned in id order.
SymbolTable read_symbol_file(std::istream& in);
std::string write_symbol_file(const SymbolTable& symbols);

// AT&T / OpenFST text: `src dst ilabel olabel [weight]` arc lines and
// `state [weight]` final lines; `#` starts a comment line. State 0 is the
// start state. Labels are tokens of the symbol files, or their numeric ids.
// Throws ParseError (with line number) or ModelError.
TransducerModel read_att_text(std::istream& fst, std::istream& isyms, std::istream& osyms,
                              WeightConvention convention = WeightConvention::prob);

struct AttText {
  std::string fst;
  std::string isyms;
  std::string osyms;
};

// Arcs in store order, then final lines. A model whose start state is not 0
// is written with states 0 and start swapped.
AttText write_att_text(const TransducerModel& model,
                       WeightConvention convention = WeightConvention::prob);

struct ModelFiles {
  std::string fst;
  std::string isyms;
  std::string osyms;

  static ModelFiles from_prefix(const std::string& prefix);
};

TransducerModel load_model(const ModelFiles& files, WeightConvention convention);
void save_model(const TransducerModel& model, const ModelFiles& files,
                WeightConvention convention);

// ---------------------------------------------------------------------------
// Toy model construction.

struct TranslationRow {
  std::string target;  // e
  std::string source;  // f
  double prob = 0.0;   // p(f | e)
};

struct TranslationTable {
  std::vector<TranslationRow> rows;
};

// `e<TAB>f<TAB>p` lines.
TranslationTable read_translation_table(std::istream& in);

struct BigramModel {
  std::vector<std::string> vocabulary;  // first-appearance order, markers included
  std::map<std::pair<std::string, std::string>, double> probs;  // (u, v) -> p(v | u)
  TransducerModel acceptor;

  double prob(const std::string& u, const std::string& v) const;
};

// Unsmoothed maximum-likelihood bigram model over `<s> line </s>`. State 0
// is the <s> context, then one state per word in first-appearance order,
// then a single final state entered on </s>. Throws Error on an empty corpus.
BigramModel build_bigram_lm(std::istream& corpus);

// Single state, initial and final with weight 1, one self-loop e:f/p per row.
// Throws ModelError on p <= 0 or when some e has total mass above 1.
TransducerModel build_translation_fst(const TranslationTable& table);

// Composes an LM acceptor over target words with a single-state translation
// transducer: each LM arc on e and each translation e:f/p becomes an arc
// f:e with weight p_lm * p. LM words without translations lose their arcs
// and are reported in `dropped`. Throws ModelError when no arc survives.
TransducerModel compose_lm_tt(const TransducerModel& lm, const TransducerModel& tt,
                              std::vector<std::string>* dropped = nullptr);

}  // namespace pfst
