// pfst: Viterbi decoding, posteriors, model building and benchmarks for
// weighted finite-state transducers in CSR/COO form.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pfst/commands.hpp"

namespace {

using namespace pfst;
using namespace pfst::cli;

void add_model_options(CLI::App* app, ModelOptions& model, std::string& weights) {
  app->add_option("--model", model.prefix, "Model prefix (<prefix>.fst/.isyms/.osyms)");
  app->add_option("--fst", model.fst, "FST text file");
  app->add_option("--isyms", model.isyms, "Input symbol table");
  app->add_option("--osyms", model.osyms, "Output symbol table");
  app->add_option("--weights", weights, "Weight convention in text files")
      ->check(CLI::IsMember({"prob", "neglog"}));
}

void add_sentence_options(CLI::App* app, SentenceOptions& sentences) {
  app->add_option("--sentences", sentences.path, "One whitespace-tokenized sentence per line")
      ->required();
  app->add_flag("--append-eos", sentences.append_eos, "Append </s> to every sentence");
}

void add_parallel_options(CLI::App* app, ParallelConfig& config) {
  app->add_option("--work-group-size", config.work_group_size, "Arcs per work unit (0 = default)");
  app->add_option("--workers", config.num_workers, "Worker threads per step (0 = default)");
  app->add_flag("--fast-math", config.fast_math, "Single-precision log-add in forward/backward");
}

void add_backend_options(CLI::App* app, BackendOptions& backend) {
  app->add_option("--backend", backend.backend, "serial or parallel")
      ->check(CLI::IsMember({"serial", "parallel"}));
  app->add_option("--jobs", backend.jobs, "Sentences processed concurrently");
  add_parallel_options(app, backend.parallel);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted finite-state transducer toolkit"};
  app.require_subcommand(1);

  std::string weights = "prob";

  DecodeOptions decode;
  auto* decode_cmd = app.add_subcommand("decode", "Viterbi-decode sentences");
  add_model_options(decode_cmd, decode.model, weights);
  add_sentence_options(decode_cmd, decode.sentences);
  add_backend_options(decode_cmd, decode.backend);

  PosteriorOptions post;
  auto* post_cmd = app.add_subcommand("posteriors", "Arc posteriors and expected counts");
  add_model_options(post_cmd, post.model, weights);
  add_sentence_options(post_cmd, post.sentences);
  add_backend_options(post_cmd, post.backend);
  post_cmd->add_flag("--aggregate", post.aggregate, "Emit per-arc expected counts over the file");

  BuildOptions build;
  auto* build_cmd = app.add_subcommand("build", "Build a transducer from a corpus and translation table");
  build_cmd->add_option("--corpus", build.corpus, "Target-language corpus")->required();
  build_cmd->add_option("--table", build.table, "Translation table (e<TAB>f<TAB>p)")->required();
  build_cmd->add_option("--out", build.out, "Output prefix")->required();
  build_cmd->add_option("--weights", weights, "Weight convention")->check(CLI::IsMember({"prob", "neglog"}));

  BenchOptions bench;
  std::string methods = "serial,parallel";
  auto* bench_cmd = app.add_subcommand("bench", "Time decoding methods");
  add_model_options(bench_cmd, bench.model, weights);
  bench_cmd->add_option("--sentences", bench.sentences.path, "Sentences file");
  bench_cmd->add_flag("--append-eos", bench.sentences.append_eos, "Append </s> to every sentence");
  bench_cmd->add_option("--methods", methods, "Comma-separated methods");
  bench_cmd->add_option("--repeat", bench.repeat, "Passes over the sentence set")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--per-sentence", bench.per_sentence, "Emit length<TAB>seconds per sentence");
  bench_cmd->add_option("--tsv", bench.tsv, "Also write the report as TSV");
  bench_cmd->add_option("--synthetic-states", bench.synthetic_states, "Generate a random model with this many states");
  bench_cmd->add_option("--synthetic-symbols", bench.synthetic_symbols, "Input symbols of the random model");
  bench_cmd->add_option("--synthetic-arcs", bench.synthetic_arcs, "Arcs drawn for the random model");
  bench_cmd->add_option("--synthetic-sentences", bench.synthetic_sentences, "Random sentences");
  bench_cmd->add_option("--synthetic-max-length", bench.synthetic_max_length, "Longest random sentence");
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  add_parallel_options(bench_cmd, bench.parallel);

  ModelOptions validate_model;
  auto* validate_cmd = app.add_subcommand("validate", "Check model invariants");
  add_model_options(validate_cmd, validate_model, weights);

  OracleOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Enumerate all paths (small models)");
  oracle_cmd->group("");
  add_model_options(oracle_cmd, oracle.model, weights);
  add_sentence_options(oracle_cmd, oracle.sentences);

  CLI11_PARSE(app, argc, argv);

  const WeightConvention convention = parse_weight_convention(weights);
  for (ModelOptions* m : {&decode.model, &post.model, &bench.model, &validate_model, &oracle.model}) {
    m->weights = convention;
  }
  build.weights = convention;

  if (*decode_cmd) return cmd_decode(decode, std::cout, std::cerr);
  if (*post_cmd) return cmd_posteriors(post, std::cout, std::cerr);
  if (*build_cmd) return cmd_build(build, std::cout, std::cerr);
  if (*bench_cmd) {
    bench.methods.clear();
    std::string item;
    for (char c : methods + ",") {
      if (c == ',') {
        if (!item.empty()) bench.methods.push_back(item);
        item.clear();
      } else {
        item += c;
      }
    }
    return cmd_bench(bench, std::cout, std::cerr);
  }
  if (*validate_cmd) return cmd_validate(validate_model, std::cout, std::cerr);
  if (*oracle_cmd) return cmd_oracle(oracle, std::cout, std::cerr);
  return kExitError;
}
