#include "pfst/commands.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "pfst/bench.hpp"
#include "pfst/decode.hpp"
#include "pfst/estimate.hpp"
#include "pfst/oracle.hpp"
#include "pfst/synth.hpp"

namespace pfst::cli {

ModelFiles ModelOptions::files() const {
  ModelFiles f = prefix.empty() ? ModelFiles{} : ModelFiles::from_prefix(prefix);
  if (!fst.empty()) f.fst = fst;
  if (!isyms.empty()) f.isyms = isyms;
  if (!osyms.empty()) f.osyms = osyms;
  if (f.fst.empty() || f.isyms.empty() || f.osyms.empty()) {
    throw Error("model files not given (use --model PREFIX or --fst/--isyms/--osyms)");
  }
  return f;
}

namespace {

std::vector<std::string> read_sentences(const SentenceOptions& options) {
  std::ifstream in(options.path);
  if (!in) throw Error("cannot open '" + options.path + "'");
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (options.append_eos) {
      line += line.find_first_not_of(" \t") == std::string::npos ? "" : " ";
      line += kSentenceEnd;
    }
    out.push_back(std::move(line));
  }
  return out;
}

struct SentenceResult {
  std::string text;
  std::optional<std::string> error;
  bool no_path = false;
};

// Runs `work(i, backend)` for every sentence on `jobs` threads; each thread
// owns its backend when the parallel backend is selected.
template <class Work>
std::vector<SentenceResult> for_each_sentence(const TransducerModel& model, std::size_t count,
                                              const BackendOptions& options, Work work) {
  const bool parallel = options.backend == "parallel";
  if (!parallel && options.backend != "serial") {
    throw Error("unknown backend '" + options.backend + "' (expected serial or parallel)");
  }
  std::vector<SentenceResult> results(count);
  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, count));
  auto run = [&](std::size_t job) {
    std::unique_ptr<ParallelBackend> backend;
    if (parallel) backend = std::make_unique<ParallelBackend>(model, options.parallel);
    for (std::size_t i = job; i < count; i += jobs) {
      try {
        results[i] = work(i, backend.get());
      } catch (const NoPath&) {
        results[i].no_path = true;
      } catch (const UnknownToken& e) {
        results[i].error = fmt::format("sentence {}: unknown token '{}' at position {}", i,
                                       e.token(), e.position());
      } catch (const std::exception& e) {
        results[i].error = fmt::format("sentence {}: {}", i, e.what());
      }
    }
  };
  if (jobs == 1) {
    run(0);
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(run, j);
  }
  return results;
}

template <class Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace

int cmd_decode(const DecodeOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TransducerModel model = load_model(options.model.files(), options.model.weights);
    const auto sentences = read_sentences(options.sentences);
    const auto results = for_each_sentence(
        model, sentences.size(), options.backend, [&](std::size_t i, ParallelBackend* backend) {
          const DecodePath path =
              backend ? backend->decode(sentences[i]) : decode(model, sentences[i]);
          return SentenceResult{
              fmt::format("{}\t{}\t{:.6f}\n", i, path.output_text(), path.log_weight),
              std::nullopt, false};
        });

    bool partial = false;
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].error) {
        err << "error: " << *results[i].error << '\n';
        return kExitError;
      }
      if (results[i].no_path) {
        out << i << "\tNOPATH\t-inf\n";
        partial = true;
      } else {
        out << results[i].text;
      }
    }
    return partial ? kExitPartial : kExitOk;
  });
}

int cmd_posteriors(const PosteriorOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TransducerModel model = load_model(options.model.files(), options.model.weights);
    const auto sentences = read_sentences(options.sentences);
    std::vector<PosteriorTable> tables(sentences.size());
    const auto results = for_each_sentence(
        model, sentences.size(), options.backend, [&](std::size_t i, ParallelBackend* backend) {
          const auto input = tokenize(model, sentences[i]);
          tables[i] = backend ? backend->expected_counts(input) : expected_counts(model, input);
          std::string text = fmt::format("{}\tlogZ\t{:.9f}\n", i, tables[i].log_z);
          if (!options.aggregate) {
            for (std::size_t t = 0; t < tables[i].steps.size(); ++t) {
              const StepPosteriors& step = tables[i].steps[t];
              for (std::size_t j = 0; j < step.gamma.size(); ++j) {
                if (step.gamma[j] == 0.0) continue;
                text += fmt::format("{}\t{}\t{}\t{:.9f}\n", i, t, step.arcs.begin + j,
                                    step.gamma[j]);
              }
            }
          }
          return SentenceResult{std::move(text), std::nullopt, false};
        });

    bool partial = false;
    std::vector<double> totals(model.num_arcs(), 0.0);
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].error) {
        err << "error: " << *results[i].error << '\n';
        return kExitError;
      }
      if (results[i].no_path) {
        out << i << "\tlogZ\t-inf\n";
        partial = true;
        continue;
      }
      out << results[i].text;
      for (std::size_t k = 0; k < totals.size(); ++k) totals[k] += tables[i].arc_totals[k];
    }
    if (options.aggregate) {
      for (std::size_t k = 0; k < totals.size(); ++k) {
        if (totals[k] != 0.0) out << fmt::format("{}\t{:.9f}\n", k, totals[k]);
      }
    }
    return partial ? kExitPartial : kExitOk;
  });
}

int cmd_build(const BuildOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream corpus(options.corpus);
    if (!corpus) throw Error("cannot open '" + options.corpus + "'");
    std::ifstream table_in(options.table);
    if (!table_in) throw Error("cannot open '" + options.table + "'");
    if (options.out.empty()) throw Error("--out prefix is required");

    const BigramModel lm = build_bigram_lm(corpus);
    const TranslationTable table = read_translation_table(table_in);
    if (table.rows.empty()) throw Error("empty translation table");
    const TransducerModel tt = build_translation_fst(table);
    std::vector<std::string> dropped;
    const TransducerModel model = compose_lm_tt(lm.acceptor, tt, &dropped);
    for (const auto& word : dropped) {
      err << "warning: no translation for '" << word << "'; its language-model arcs were dropped\n";
    }
    const ModelFiles files = ModelFiles::from_prefix(options.out);
    save_model(model, files, options.weights);
    const ModelStats s = stats(model);
    out << fmt::format("wrote {} ({} states, {} transitions, density {:.6g})\n", files.fst,
                       s.num_states, s.num_transitions, s.density);
    return kExitOk;
  });
}

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<BenchMethod> methods;
    for (const auto& name : options.methods) methods.push_back(parse_bench_method(name));
    if (options.repeat == 0) throw Error("--repeat must be at least 1");

    TransducerModel model;
    std::vector<std::vector<SymbolId>> sentences;
    if (options.synthetic_states > 0) {
      std::mt19937_64 rng(options.seed);
      RandomModelShape shape;
      shape.num_states = options.synthetic_states;
      shape.num_symbols = options.synthetic_symbols;
      shape.num_output_symbols = options.synthetic_symbols;
      shape.num_arcs = options.synthetic_arcs;
      shape.final_fraction = 0.5;
      model = random_model(shape, rng);
      std::uniform_int_distribution<std::size_t> length(
          1, std::max<std::size_t>(1, options.synthetic_max_length));
      for (std::size_t i = 0; i < options.synthetic_sentences; ++i) {
        sentences.push_back(random_input(model, length(rng), rng));
      }
    } else {
      model = load_model(options.model.files(), options.model.weights);
      for (const auto& s : read_sentences(options.sentences)) sentences.push_back(tokenize(model, s));
    }

    if (options.per_sentence) {
      for (BenchMethod method : methods) {
        out << "# " << bench_method_name(method) << '\n';
        const auto timings =
            time_per_sentence(model, sentences, method, options.repeat, options.parallel);
        for (const auto& row : timings) {
          out << fmt::format("{}\t{:.9f}\n", row.length, row.seconds);
        }
      }
      return kExitOk;
    }

    const BenchReport report = run_bench(model, sentences, methods, options.repeat, options.parallel);
    write_report_table(out, report);
    if (!options.tsv.empty()) {
      std::ofstream tsv(options.tsv);
      if (!tsv) throw Error("cannot write '" + options.tsv + "'");
      write_report_tsv(tsv, report);
    }
    return kExitOk;
  });
}

int cmd_validate(const ModelOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TransducerModel model = load_model(options.files(), options.weights);
    const auto violations = validate(model);
    for (const auto& v : violations) out << v << '\n';
    if (!violations.empty()) return kExitError;
    const ModelStats s = stats(model);
    out << fmt::format("ok\t{} states\t{} transitions\tdensity {:.6g}\n", s.num_states,
                       s.num_transitions, s.density);
    return kExitOk;
  });
}

int cmd_oracle(const OracleOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TransducerModel model = load_model(options.model.files(), options.model.weights);
    const auto sentences = read_sentences(options.sentences);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const PathSet set = enumerate_paths(model, tokenize(model, sentences[i]));
      for (const OraclePath& p : set.paths) {
        std::string arcs;
        for (ArcId k : p.arcs) arcs += (arcs.empty() ? "" : ",") + std::to_string(k);
        out << fmt::format("{}\tpath\t{:.17g}\t{}\t{}\n", i, static_cast<double>(p.weight), arcs,
                           make_path(model, p.arcs, p.final_index).output_text());
      }
      out << fmt::format("{}\ttotal\t{:.17g}\n", i, static_cast<double>(oracle_total(set)));
    }
    return kExitOk;
  });
}

}  // namespace pfst::cli
