#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "pfst/modelio.hpp"
#include "pfst/parallel.hpp"

namespace pfst::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitPartial = 2;  // at least one sentence had no path

struct ModelOptions {
  std::string prefix;  // <prefix>.fst, <prefix>.isyms, <prefix>.osyms
  std::string fst;
  std::string isyms;
  std::string osyms;
  WeightConvention weights = WeightConvention::prob;

  ModelFiles files() const;
};

struct SentenceOptions {
  std::string path;
  bool append_eos = false;
};

struct BackendOptions {
  std::string backend = "serial";  // serial | parallel
  ParallelConfig parallel;
  std::size_t jobs = 1;
};

struct DecodeOptions {
  ModelOptions model;
  SentenceOptions sentences;
  BackendOptions backend;
};

struct PosteriorOptions {
  ModelOptions model;
  SentenceOptions sentences;
  BackendOptions backend;
  bool aggregate = false;
};

struct BuildOptions {
  std::string corpus;
  std::string table;
  std::string out;
  WeightConvention weights = WeightConvention::prob;
};

struct BenchOptions {
  ModelOptions model;
  SentenceOptions sentences;
  std::vector<std::string> methods{"serial", "parallel"};
  std::size_t repeat = 1;
  bool per_sentence = false;
  std::string tsv;  // also write the report as TSV here when set
  ParallelConfig parallel;
  // Synthetic workload instead of model/sentence files when states > 0.
  std::size_t synthetic_states = 0;
  std::size_t synthetic_symbols = 50;
  std::size_t synthetic_arcs = 250000;
  std::size_t synthetic_sentences = 20;
  std::size_t synthetic_max_length = 40;
  std::uint64_t seed = 1;
};

struct OracleOptions {
  ModelOptions model;
  SentenceOptions sentences;
};

// Each returns a process exit code; diagnostics go to `err`.
int cmd_decode(const DecodeOptions& options, std::ostream& out, std::ostream& err);
int cmd_posteriors(const PosteriorOptions& options, std::ostream& out, std::ostream& err);
int cmd_build(const BuildOptions& options, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);
int cmd_validate(const ModelOptions& options, std::ostream& out, std::ostream& err);
int cmd_oracle(const OracleOptions& options, std::ostream& out, std::ostream& err);

}  // namespace pfst::cli
