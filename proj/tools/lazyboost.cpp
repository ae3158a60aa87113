// Command-line front end: corpus summaries, training, cross-validated
// evaluation, LazyBoosting timing and synthetic corpus generation.
//
// Exit codes: 0 success, 2 bad flags or configuration, 3 unreadable or
// malformed corpus, 4 any other failure while running.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lazyboost/baselines.hpp"
#include "lazyboost/boosting.hpp"
#include "lazyboost/dataset.hpp"
#include "lazyboost/eval.hpp"
#include "lazyboost/parallel.hpp"
#include "lazyboost/selection.hpp"
#include "lazyboost/synthetic.hpp"

namespace fs = std::filesystem;
using namespace lazyboost;

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 2, kInputError = 3, kRuntimeError = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string corpus;
  std::string synth;
  std::vector<std::string> algos{"mfs", "nb", "knn", "boost"};
  std::size_t rounds = 750;
  double stop_error = 0.05;
  std::optional<double> smoothing;
  std::string filter = "none";
  std::size_t filter_param = 1;
  std::optional<double> rejection;
  double sample_p = 1.0;
  std::size_t knn_k = 15;
  std::size_t folds = 10;
  bool unstratified = false;
  std::uint64_t seed = 1;
  std::string out;
  std::size_t jobs = default_jobs();
  std::vector<std::size_t> curve_rounds;
  std::vector<double> rejection_levels;
  std::vector<std::string> reductions{"freq", "lfreq", "rlm", "lazy"};
  std::size_t repeats = 3;
};

struct Word {
  std::vector<RawInstance> records;
  Dataset data;
};

std::vector<Word> load_words(const Options& opt) {
  if (opt.corpus.empty() == opt.synth.empty()) throw ConfigError("give exactly one of --corpus and --synth");
  std::vector<RawInstance> records;
  if (!opt.corpus.empty()) {
    records = read_corpus_file(opt.corpus);
  } else {
    SuiteSpec suite;
    try {
      suite = parse_suite_spec(opt.synth);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--synth: ") + e.what());
    }
    records = generate_suite(suite, opt.seed);
  }
  std::vector<Word> words;
  for (auto& group : group_by_word(records)) {
    Dataset ds = build_dataset(group);
    words.push_back({std::move(group), std::move(ds)});
  }
  return words;
}

TrainConfig train_config(const Options& opt) {
  TrainConfig cfg;
  cfg.max_rounds = opt.rounds;
  cfg.stop_error = opt.stop_error;
  cfg.smoothing = opt.smoothing;
  cfg.sampler.proportion = opt.sample_p;
  cfg.sampler.seed = opt.seed;
  return cfg;
}

FilterMethod filter_method(const Options& opt) {
  try {
    return filter_from_name(opt.filter);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("--filter: ") + e.what());
  }
}

/// Word names become file names; anything unusual is replaced.
std::string file_stem(const std::string& word) {
  std::string s = word;
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return s.empty() ? "_" : s;
}

fs::path output_dir(const Options& opt) {
  if (opt.out.empty()) throw ConfigError("--out is required");
  fs::create_directories(opt.out);
  return opt.out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

// Commands -------------------------------------------------------------------

int cmd_ingest(const Options& opt) {
  const auto words = load_words(opt);
  std::cout << words.size() << (words.size() == 1 ? " word" : " words") << '\n';
  if (words.empty()) return kOk;
  std::cout << "word\tpos\tsenses\texamples\tattributes\tmfs\n";
  for (const auto& w : words) {
    const auto s = summarize(w.data);
    std::cout << s.word << '\t' << s.pos << '\t' << s.senses << '\t' << s.examples << '\t' << s.attributes << '\t'
              << format_real(s.mfs_share) << '\n';
  }
  return kOk;
}

int cmd_synth(const Options& opt) {
  if (opt.synth.empty()) throw ConfigError("synth needs --synth SPEC");
  if (!opt.corpus.empty()) throw ConfigError("synth does not read a corpus");
  const auto words = load_words(opt);
  std::vector<RawInstance> all;
  for (const auto& w : words) all.insert(all.end(), w.records.begin(), w.records.end());
  if (opt.out.empty() || opt.out == "-") {
    write_corpus(std::cout, all);
  } else {
    if (fs::path(opt.out).has_parent_path()) fs::create_directories(fs::path(opt.out).parent_path());
    auto f = open_out(opt.out);
    write_corpus(f, all);
  }
  return kOk;
}

int cmd_train(const Options& opt) {
  const auto words = load_words(opt);
  const auto dir = output_dir(opt);
  const auto cfg = train_config(opt);
  const auto method = filter_method(opt);
  std::vector<CombinedModel> models(words.size());
  parallel_for(words.size(), opt.jobs, [&](std::size_t w) {
    const auto& ds = words[w].data;
    const auto pool = opt.rejection ? filter_for_rejection(ds, method, *opt.rejection)
                                    : apply_filter(ds, method, opt.filter_param);
    if (pool.kept.empty()) throw std::runtime_error(ds.word() + ": the filter rejected every attribute");
    models[w] = train(ds, cfg, pool.kept);
  });
  for (std::size_t w = 0; w < words.size(); ++w) {
    const auto& model = models[w];
    const auto stem = file_stem(model.word());
    auto mf = open_out(dir / (stem + ".model"));
    save_model(mf, model);
    auto lf = open_out(dir / (stem + ".log.csv"));
    lf << "round,attr,feature,z,z_empirical,training_error,hamming_loss,loss_bound\n";
    for (const auto& r : model.round_log()) {
      const auto& fv = model.attributes()[r.attr];
      std::string feature = std::string(position_name(fv.position)) + "=" + fv.value;
      std::replace(feature.begin(), feature.end(), ',', ';');
      lf << r.round << ',' << r.attr << ',' << feature << ',' << format_real(r.z) << ','
         << format_real(r.z_empirical) << ',' << format_real(r.training_error) << ','
         << format_real(r.hamming_loss) << ',' << format_real(r.loss_bound) << '\n';
    }
    const double err = model.round_log().empty() ? 0.0 : model.round_log().back().training_error;
    std::cout << model.word() << ": " << model.rounds_trained() << " rules, training error " << format_real(err)
              << '\n';
  }
  return kOk;
}

std::vector<AlgorithmSpec> algorithm_specs(const Options& opt) {
  std::vector<AlgorithmSpec> specs;
  for (const auto& name : opt.algos) {
    AlgorithmSpec spec;
    try {
      spec.algorithm = algorithm_from_name(name);
    } catch (const EvalError& e) {
      throw ConfigError(std::string("--algo: ") + e.what());
    }
    spec.knn_k = opt.knn_k;
    spec.boost = train_config(opt);
    spec.filter = filter_method(opt);
    spec.filter_param = opt.filter_param;
    spec.rejection = opt.rejection;
    specs.push_back(spec);
  }
  if (specs.empty()) throw ConfigError("--algo needs at least one algorithm");
  return specs;
}

int cmd_eval(const Options& opt) {
  const auto words = load_words(opt);
  const auto dir = output_dir(opt);
  const auto specs = algorithm_specs(opt);
  std::vector<Reduction> reductions;
  for (const auto& r : opt.reductions) {
    try {
      reductions.push_back(reduction_from_name(r));
    } catch (const EvalError& e) {
      throw ConfigError(std::string("--reductions: ") + e.what());
    }
  }

  std::vector<std::vector<CvResult>> results(specs.size());
  std::vector<WordSummary> summaries;
  std::vector<Comparison> comparisons;
  for (const auto& w : words) {
    const auto& ds = w.data;
    summaries.push_back(summarize(ds));
    const auto plan = make_folds(ds, opt.folds, opt.seed, !opt.unstratified);
    std::vector<CvResult> row;
    for (std::size_t a = 0; a < specs.size(); ++a) {
      row.push_back(cross_validate(specs[a], ds, plan, opt.jobs));
      results[a].push_back(row.back());
    }
    for (std::size_t a = 0; a < specs.size(); ++a)
      for (std::size_t b = a + 1; b < specs.size(); ++b) comparisons.push_back(compare(row[a], row[b]));

    const auto stem = file_stem(ds.word());
    if (!opt.curve_rounds.empty()) {
      auto f = open_out(dir / (stem + ".rounds.csv"));
      write_round_curve_csv(f, cv_curve_rounds(ds, plan, train_config(opt), opt.curve_rounds, opt.jobs));
    }
    if (!opt.rejection_levels.empty()) {
      for (auto r : reductions) {
        auto f = open_out(dir / (stem + "." + std::string(reduction_name(r)) + ".rejection.csv"));
        write_rejection_csv(f, curve_rejection(ds, plan, r, opt.rejection_levels, train_config(opt), opt.jobs));
      }
    }
    std::cerr << ds.word() << " done\n";
  }

  std::vector<CvResult> flat;
  for (std::size_t w = 0; w < words.size(); ++w)
    for (const auto& r : results) flat.push_back(r[w]);
  auto acc = open_out(dir / "accuracy.csv");
  write_accuracy_csv(acc, flat);
  auto cmp = open_out(dir / "comparison.csv");
  write_comparison_csv(cmp, comparisons);

  std::ostringstream report;
  if (!words.empty()) {
    write_summary_table(report, summaries, results);
    report << '\n';
  }
  report << "wins(significant)-ties-losses(significant)\n";
  for (std::size_t a = 0; a < specs.size(); ++a) {
    for (std::size_t b = a + 1; b < specs.size(); ++b) {
      report << specs[a].tag() << " vs " << specs[b].tag() << ": " << compare_table(results[a], results[b]).str()
             << '\n';
    }
  }
  auto summary = open_out(dir / "summary.txt");
  summary << report.str();
  std::cout << report.str();
  return kOk;
}

int cmd_bench(const Options& opt) {
  const auto words = load_words(opt);
  if (opt.repeats == 0) throw ConfigError("--repeats must be positive");
  std::printf("%-14s %8s %7s %12s %12s %12s %12s %8s\n", "word", "attrib.", "rounds", "full ms/rnd", "lazy ms/rnd",
              "full total s", "lazy total s", "speedup");
  for (const auto& w : words) {
    const auto& ds = w.data;
    auto cfg = train_config(opt);
    auto run = [&](double p) {
      auto c = cfg;
      c.sampler.proportion = p;
      TrainTiming best;
      for (std::size_t r = 0; r < opt.repeats; ++r) {
        TrainTiming t;
        const auto model = train(ds, c, {}, &t);
        if (t.rounds != model.round_log().size()) throw std::logic_error("round count mismatch");
        if (r == 0 || t.weak_learner_seconds < best.weak_learner_seconds) best = t;
      }
      return best;
    };
    const auto full = run(1.0);
    const auto lazy = run(opt.sample_p);
    const double full_per = full.weak_learner_seconds / static_cast<double>(full.rounds);
    const double lazy_per = lazy.weak_learner_seconds / static_cast<double>(lazy.rounds);
    std::printf("%-14s %8u %3zu/%-3zu %12.4f %12.4f %12.3f %12.3f %8.2f\n", ds.word().c_str(), ds.num_attributes(),
                full.rounds, lazy.rounds, 1e3 * full_per, 1e3 * lazy_per, full.total_seconds, lazy.total_seconds,
                full_per / lazy_per);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boosting-based word sense disambiguation experiments"};
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "Flat key=value file mirroring the long flags; flags override it; quote values that contain commas");
  Options opt;

  auto* ingest = app.add_subcommand("ingest", "Summarize a corpus: senses, examples and attributes per word");
  auto* train_cmd = app.add_subcommand("train", "Train one model per word and write models and round logs");
  auto* eval = app.add_subcommand("eval", "Cross-validate algorithms; write accuracy, comparison and curve CSVs");
  auto* bench = app.add_subcommand("bench", "Time the weak learner with full search against LazyBoosting");
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus");
  for (auto* sub : {ingest, train_cmd, eval, bench, synth}) sub->fallthrough();

  app.add_option("--corpus", opt.corpus, "Corpus file (tab-separated: word, pos, sense, 4 context tokens)");
  app.add_option("--synth", opt.synth,
                 "Synthetic corpus spec, e.g. 'benchmark' or 'words=3,senses=4:8,examples=200,noise=0.1:0.3'");
  app.add_option("--algo", opt.algos, "Algorithms: mfs, nb, knn, boost")->delimiter(',');
  app.add_option("--rounds", opt.rounds, "Maximum boosting rounds")->check(CLI::PositiveNumber);
  app.add_option("--stop-error", opt.stop_error, "Stop once training error falls below this")
      ->check(CLI::Range(0.0, 0.999999));
  app.add_option("--smoothing", opt.smoothing, "Confidence smoothing (default 1/(m k))")->check(CLI::PositiveNumber);
  app.add_option("--filter", opt.filter, "Attribute filter: none, freq, lfreq, rlm");
  app.add_option("--filter-param", opt.filter_param, "Filter parameter: N for freq/lfreq, budget for rlm")
      ->check(CLI::PositiveNumber);
  app.add_option("--rejection", opt.rejection, "Target rejected-attribute fraction; overrides --filter-param")
      ->check(CLI::Range(0.0, 0.999999));
  app.add_option("--sample-p", opt.sample_p, "LazyBoosting sample proportion per round")
      ->check(CLI::Range(1e-9, 1.0));
  app.add_option("--knn-k", opt.knn_k, "Neighbours for k-NN")->check(CLI::PositiveNumber);
  app.add_option("--folds", opt.folds, "Cross-validation folds")->check(CLI::Range(2, 1000000));
  app.add_flag("--unstratified", opt.unstratified, "Deal folds without stratifying by sense");
  app.add_option("--seed", opt.seed, "Seed for folds, sampling and synthetic corpora");
  app.add_option("--out", opt.out, "Output directory (synth: output file, default stdout)");
  app.add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--curve-rounds", opt.curve_rounds, "eval: checkpoints of the error-vs-rounds curve")
      ->delimiter(',');
  app.add_option("--rejection-levels", opt.rejection_levels, "eval: levels of the error-vs-rejection sweep")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 0.999999));
  app.add_option("--reductions", opt.reductions, "eval: reductions in the sweep: freq, lfreq, rlm, lazy")
      ->delimiter(',');
  app.add_option("--repeats", opt.repeats, "bench: timing repetitions (the fastest is kept)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*ingest) return cmd_ingest(opt);
    if (*train_cmd) return cmd_train(opt);
    if (*eval) return cmd_eval(opt);
    if (*bench) return cmd_bench(opt);
    if (*synth) return cmd_synth(opt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DatasetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kConfigError;
}
