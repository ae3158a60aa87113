#include "lazyboost/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>

#include "lazyboost/parallel.hpp"

namespace lazyboost {

// Folds ---------------------------------------------------------------------

std::vector<std::uint32_t> FoldPlan::training_indices(std::size_t fold) const {
  const auto& held_out = folds.at(fold);
  std::vector<std::uint32_t> out;
  out.reserve(examples - held_out.size());
  std::size_t j = 0;
  for (std::uint32_t i = 0; i < examples; ++i) {
    if (j < held_out.size() && held_out[j] == i) {
      ++j;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

std::uint64_t FoldPlan::fingerprint() const {
  // FNV-1a over the fold boundaries and members.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(examples);
  for (const auto& fold : folds) {
    mix(fold.size());
    for (auto i : fold) mix(i);
  }
  return h;
}

FoldPlan make_folds(const Dataset& ds, std::size_t n, std::uint64_t seed, bool stratified) {
  const std::size_t m = ds.size();
  if (n < 2) throw EvalError("cross-validation needs at least 2 folds");
  if (n > m) throw EvalError("more folds (" + std::to_string(n) + ") than examples (" + std::to_string(m) + ")");

  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> order;
  order.reserve(m);
  if (stratified) {
    std::vector<std::vector<std::uint32_t>> by_sense(ds.num_senses());
    for (std::uint32_t i = 0; i < m; ++i) by_sense[ds.example(i).label].push_back(i);
    for (auto& group : by_sense) {
      std::shuffle(group.begin(), group.end(), rng);
      order.insert(order.end(), group.begin(), group.end());
    }
  } else {
    order.resize(m);
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);
  }

  FoldPlan plan{m, seed, stratified, std::vector<std::vector<std::uint32_t>>(n)};
  for (std::size_t p = 0; p < m; ++p) plan.folds[p % n].push_back(order[p]);
  for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
  return plan;
}

// Algorithms ----------------------------------------------------------------

std::string_view algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::kMfs: return "mfs";
    case Algorithm::kNb: return "nb";
    case Algorithm::kKnn: return "knn";
    case Algorithm::kBoost: return "boost";
  }
  return "?";
}

Algorithm algorithm_from_name(std::string_view name) {
  if (name == "mfs") return Algorithm::kMfs;
  if (name == "nb") return Algorithm::kNb;
  if (name == "knn") return Algorithm::kKnn;
  if (name == "boost") return Algorithm::kBoost;
  throw EvalError("unknown algorithm '" + std::string(name) + "'");
}

std::string AlgorithmSpec::tag() const {
  switch (algorithm) {
    case Algorithm::kMfs: return "mfs";
    case Algorithm::kNb: return "nb";
    case Algorithm::kKnn: return "knn" + std::to_string(knn_k);
    case Algorithm::kBoost: {
      std::string t = "boost";
      if (filter != FilterMethod::kAll) t += "-" + std::string(filter_name(filter));
      if (boost.sampler.proportion < 1.0) t += "-lazy";
      return t;
    }
  }
  return "?";
}

Learner make_learner(const AlgorithmSpec& spec) {
  switch (spec.algorithm) {
    case Algorithm::kMfs:
      return [](const Dataset& train) -> Predictor {
        return [model = train_mfs(train)](const SparseExample& ex) { return model.classify(ex); };
      };
    case Algorithm::kNb:
      return [options = spec.nb](const Dataset& train) -> Predictor {
        return [model = train_nb(train, options)](const SparseExample& ex) { return model.classify(ex); };
      };
    case Algorithm::kKnn:
      return [k = spec.knn_k](const Dataset& train) -> Predictor {
        auto model = std::make_shared<KnnModel>(train, k);
        return [model](const SparseExample& ex) { return model->classify(ex); };
      };
    case Algorithm::kBoost:
      return [spec](const Dataset& train) -> Predictor {
        const auto pool = spec.rejection ? filter_for_rejection(train, spec.filter, *spec.rejection)
                                         : apply_filter(train, spec.filter, spec.filter_param);
        if (pool.kept.empty()) throw EvalError("attribute filter rejected every attribute");
        auto model = std::make_shared<CombinedModel>(lazyboost::train(train, spec.boost, pool.kept));
        return [model](const SparseExample& ex) { return model->classify(ex); };
      };
  }
  throw EvalError("unknown algorithm");
}

// Cross-validation ----------------------------------------------------------

CvResult cross_validate(const Learner& learner, const std::string& tag, const Dataset& ds, const FoldPlan& plan,
                        std::size_t jobs) {
  if (plan.examples != ds.size()) throw EvalError("fold plan was made for a different dataset");
  CvResult result{tag, ds.word(), std::vector<double>(plan.size(), 0.0), 0.0, plan.fingerprint()};
  parallel_for(plan.size(), jobs, [&](std::size_t f) {
    const auto train_idx = plan.training_indices(f);
    const Dataset train = ds.subset(train_idx);
    const Predictor predict = learner(train);
    const auto& test = plan.folds[f];
    std::size_t correct = 0;
    for (auto i : test) correct += predict(ds.example(i)) == ds.example(i).label;
    result.fold_accuracy[f] = test.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(test.size());
  });
  result.mean = std::accumulate(result.fold_accuracy.begin(), result.fold_accuracy.end(), 0.0) /
                static_cast<double>(result.fold_accuracy.size());
  return result;
}

CvResult cross_validate(const AlgorithmSpec& spec, const Dataset& ds, const FoldPlan& plan, std::size_t jobs) {
  return cross_validate(make_learner(spec), spec.tag(), ds, plan, jobs);
}

// Significance --------------------------------------------------------------

std::string_view winner_name(Winner w) {
  switch (w) {
    case Winner::kA: return "A";
    case Winner::kB: return "B";
    case Winner::kTie: return "tie";
  }
  return "?";
}

Comparison paired_t(std::span<const double> a, std::span<const double> b, double threshold) {
  if (a.size() != b.size()) throw EvalError("paired t-test needs equally many folds on both sides");
  const std::size_t n = a.size();
  if (n < 2) throw EvalError("paired t-test needs at least 2 folds");

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  double sum = 0;
  for (double v : d) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  Comparison c;
  if (sd == 0) {
    c.t = mean == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), mean);
    c.significant = mean != 0;
  } else {
    c.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    c.significant = std::abs(c.t) > threshold;
  }
  c.winner = !c.significant ? Winner::kTie : (c.t > 0 ? Winner::kA : Winner::kB);
  return c;
}

Comparison compare(const CvResult& a, const CvResult& b, double threshold) {
  if (a.word != b.word) throw EvalError("comparing results for different words");
  if (a.plan != b.plan) throw EvalError("results for '" + a.word + "' were computed on different fold plans");
  auto c = paired_t(a.fold_accuracy, b.fold_accuracy, threshold);
  c.word = a.word;
  c.algo_a = a.algorithm;
  c.algo_b = b.algorithm;
  return c;
}

std::string WinsTiesLosses::str() const {
  return std::to_string(wins) + "(" + std::to_string(significant_wins) + ")-" + std::to_string(ties) + "-" +
         std::to_string(losses) + "(" + std::to_string(significant_losses) + ")";
}

WinsTiesLosses compare_table(std::span<const CvResult> a, std::span<const CvResult> b, double threshold) {
  if (a.size() != b.size()) throw EvalError("word sets differ between the compared result sets");
  std::map<std::string, const CvResult*> by_word;
  for (const auto& r : b) by_word[r.word] = &r;
  WinsTiesLosses out;
  for (const auto& ra : a) {
    const auto it = by_word.find(ra.word);
    if (it == by_word.end()) throw EvalError("word '" + ra.word + "' missing from the second result set");
    const auto& rb = *it->second;
    const auto c = compare(ra, rb, threshold);
    if (ra.mean > rb.mean) {
      ++out.wins;
      out.significant_wins += c.winner == Winner::kA;
    } else if (ra.mean < rb.mean) {
      ++out.losses;
      out.significant_losses += c.winner == Winner::kB;
    } else {
      ++out.ties;
    }
  }
  return out;
}

// Curves --------------------------------------------------------------------

std::vector<CurvePoint> curve_rounds(const CombinedModel& model, std::span<const SparseExample> test,
                                     std::span<const std::size_t> checkpoints) {
  for (auto r : checkpoints) {
    if (r > model.rounds_trained()) {
      throw EvalError("checkpoint " + std::to_string(r) + " exceeds the " +
                      std::to_string(model.rounds_trained()) + " trained rounds");
    }
  }
  std::vector<std::size_t> order(checkpoints.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return checkpoints[x] < checkpoints[y]; });

  const std::size_t k = model.num_senses();
  std::vector<double> f(test.size() * k, 0.0);
  std::vector<CurvePoint> out(checkpoints.size());
  std::size_t applied = 0;
  for (auto idx : order) {
    const std::size_t target = checkpoints[idx];
    for (; applied < target; ++applied) {
      const auto& rule = model.rules()[applied];
      for (std::size_t i = 0; i < test.size(); ++i) {
        const auto& c = rule_holds(test[i], rule.attr) ? rule.c1 : rule.c0;
        for (std::size_t l = 0; l < k; ++l) f[i * k + l] += c[l];
      }
    }
    std::size_t errors = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
      errors += argmax_sense({f.data() + i * k, k}, model.sense_counts()) != test[i].label;
    }
    out[idx] = {target, test.empty() ? 0.0 : static_cast<double>(errors) / static_cast<double>(test.size())};
  }
  return out;
}

std::vector<CurvePoint> cv_curve_rounds(const Dataset& ds, const FoldPlan& plan, const TrainConfig& config,
                                        std::span<const std::size_t> checkpoints, std::size_t jobs) {
  if (plan.examples != ds.size()) throw EvalError("fold plan was made for a different dataset");
  std::vector<std::vector<CurvePoint>> per_fold(plan.size());
  parallel_for(plan.size(), jobs, [&](std::size_t f) {
    const Dataset train = ds.subset(plan.training_indices(f));
    const auto model = lazyboost::train(train, config);
    std::vector<std::size_t> clamped(checkpoints.begin(), checkpoints.end());
    for (auto& r : clamped) r = std::min(r, model.rounds_trained());
    std::vector<SparseExample> test;
    for (auto i : plan.folds[f]) test.push_back(ds.example(i));
    per_fold[f] = curve_rounds(model, test, clamped);
  });
  std::vector<CurvePoint> out(checkpoints.size());
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    double sum = 0;
    for (const auto& fold : per_fold) sum += fold[c].error;
    out[c] = {checkpoints[c], sum / static_cast<double>(plan.size())};
  }
  return out;
}

std::string_view reduction_name(Reduction r) {
  switch (r) {
    case Reduction::kFreq: return "freq";
    case Reduction::kLFreq: return "lfreq";
    case Reduction::kRlm: return "rlm";
    case Reduction::kLazy: return "lazy";
  }
  return "?";
}

Reduction reduction_from_name(std::string_view name) {
  if (name == "freq") return Reduction::kFreq;
  if (name == "lfreq") return Reduction::kLFreq;
  if (name == "rlm") return Reduction::kRlm;
  if (name == "lazy") return Reduction::kLazy;
  throw EvalError("unknown reduction method '" + std::string(name) + "'");
}

std::vector<RejectionPoint> curve_rejection(const Dataset& ds, const FoldPlan& plan, Reduction method,
                                            std::span<const double> levels, const TrainConfig& config,
                                            std::size_t jobs) {
  if (plan.examples != ds.size()) throw EvalError("fold plan was made for a different dataset");
  for (double level : levels) {
    if (!(level >= 0.0 && level < 1.0)) throw EvalError("rejection levels must lie in [0, 1)");
  }
  const std::size_t folds = plan.size();
  std::vector<double> error(levels.size() * folds), achieved(levels.size() * folds);

  parallel_for(folds, jobs, [&](std::size_t f) {
    const Dataset train = ds.subset(plan.training_indices(f));
    std::vector<SparseExample> test;
    for (auto i : plan.folds[f]) test.push_back(ds.example(i));
    const auto everything = all_attributes(train);

    for (std::size_t v = 0; v < levels.size(); ++v) {
      TrainConfig cfg = config;
      AttributeSubset pool;
      if (method == Reduction::kLazy) {
        pool = everything;
        cfg.sampler.proportion = 1.0 - levels[v];
        achieved[v * folds + f] =
            1.0 - static_cast<double>(sample_size(pool.kept.size(), cfg.sampler.proportion)) /
                      static_cast<double>(pool.kept.size());
      } else {
        const FilterMethod fm = method == Reduction::kFreq    ? FilterMethod::kFreq
                                : method == Reduction::kLFreq ? FilterMethod::kLFreq
                                                              : FilterMethod::kRlm;
        pool = filter_for_rejection(train, fm, levels[v]);
        achieved[v * folds + f] = rejection_fraction(train, pool);
      }
      const auto model = lazyboost::train(train, cfg, pool.kept);
      std::size_t errors = 0;
      for (const auto& ex : test) errors += model.classify(ex) != ex.label;
      error[v * folds + f] = test.empty() ? 0.0 : static_cast<double>(errors) / static_cast<double>(test.size());
    }
  });

  std::vector<RejectionPoint> out(levels.size());
  for (std::size_t v = 0; v < levels.size(); ++v) {
    double e = 0, a = 0;
    for (std::size_t f = 0; f < folds; ++f) {
      e += error[v * folds + f];
      a += achieved[v * folds + f];
    }
    out[v] = {levels[v], a / static_cast<double>(folds), e / static_cast<double>(folds)};
  }
  return out;
}

// Reports -------------------------------------------------------------------

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_accuracy_csv(std::ostream& out, std::span<const CvResult> results) {
  out << "word,algo,fold,accuracy\n";
  for (const auto& r : results) {
    for (std::size_t f = 0; f < r.fold_accuracy.size(); ++f) {
      out << r.word << ',' << r.algorithm << ',' << f << ',' << format_real(r.fold_accuracy[f]) << '\n';
    }
  }
}

void write_comparison_csv(std::ostream& out, std::span<const Comparison> comparisons) {
  out << "word,algoA,algoB,t,significant,winner\n";
  for (const auto& c : comparisons) {
    out << c.word << ',' << c.algo_a << ',' << c.algo_b << ',' << format_real(c.t) << ','
        << (c.significant ? "true" : "false") << ',' << winner_name(c.winner) << '\n';
  }
}

void write_round_curve_csv(std::ostream& out, std::span<const CurvePoint> curve) {
  out << "round,error\n";
  for (const auto& p : curve) out << p.round << ',' << format_real(p.error) << '\n';
}

void write_rejection_csv(std::ostream& out, std::span<const RejectionPoint> curve) {
  out << "rejection,error\n";
  for (const auto& p : curve) out << format_real(p.level) << ',' << format_real(p.error) << '\n';
}

WordSummary summarize(const Dataset& ds) {
  const auto totals = ds.sense_totals();
  const auto majority = ds.size() == 0 ? 0u : totals[ds.majority_sense()];
  return {ds.word(), ds.pos(), ds.num_senses(), ds.size(), ds.num_attributes(),
          ds.size() == 0 ? 0.0 : static_cast<double>(majority) / static_cast<double>(ds.size())};
}

namespace {

std::string fixed(double v, int decimals) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

}  // namespace

void write_summary_table(std::ostream& out, std::span<const WordSummary> words,
                         std::span<const std::vector<CvResult>> results) {
  for (const auto& r : results) {
    if (r.size() != words.size()) throw EvalError("summary table needs one result per word and algorithm");
  }
  out << pad("word", 14, true) << pad("pos", 4) << pad("senses", 8) << pad("examp.", 8) << pad("attrib.", 9)
      << pad("MFS", 7);
  for (const auto& r : results) out << pad(r.empty() ? "?" : r.front().algorithm, 10);
  out << '\n';

  struct Acc {
    std::size_t n = 0;
    double senses = 0, examples = 0, attributes = 0, mfs = 0;
    std::vector<double> acc;
  };
  Acc nouns, verbs, all;
  for (auto* a : {&nouns, &verbs, &all}) a->acc.assign(results.size(), 0.0);

  for (std::size_t w = 0; w < words.size(); ++w) {
    const auto& s = words[w];
    out << pad(s.word, 14, true) << pad(s.pos, 4) << pad(std::to_string(s.senses), 8)
        << pad(std::to_string(s.examples), 8) << pad(std::to_string(s.attributes), 9)
        << pad(fixed(100 * s.mfs_share, 1), 7);
    for (const auto& r : results) out << pad(fixed(100 * r[w].mean, 1), 10);
    out << '\n';
    std::vector<Acc*> groups{&all};
    if (s.pos == "n") groups.push_back(&nouns);
    if (s.pos == "v") groups.push_back(&verbs);
    for (auto* g : groups) {
      ++g->n;
      g->senses += s.senses;
      g->examples += s.examples;
      g->attributes += s.attributes;
      g->mfs += s.mfs_share;
      for (std::size_t a = 0; a < results.size(); ++a) g->acc[a] += results[a][w].mean;
    }
  }
  const std::pair<const char*, const Acc*> rows[] = {{"avg. nouns", &nouns}, {"avg. verbs", &verbs}, {"avg. all", &all}};
  for (const auto& [label, g] : rows) {
    if (g->n == 0) continue;
    const double n = static_cast<double>(g->n);
    out << pad(label, 18, true) << pad(fixed(g->senses / n, 1), 8) << pad(fixed(g->examples / n, 1), 8)
        << pad(fixed(g->attributes / n, 1), 9) << pad(fixed(100 * g->mfs / n, 1), 7);
    for (double a : g->acc) out << pad(fixed(100 * a / n, 1), 10);
    out << '\n';
  }
}

}  // namespace lazyboost
