#pragma once

// Cross-validation protocol: stratified folds shared across algorithms,
// per-fold accuracies, the paired Student's t-test, wins-ties-losses tables,
// error-vs-rounds and error-vs-rejection curves, and the report writers.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lazyboost/baselines.hpp"
#include "lazyboost/boosting.hpp"
#include "lazyboost/dataset.hpp"
#include "lazyboost/selection.hpp"

namespace lazyboost {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FoldPlan {
  std::size_t examples = 0;
  std::uint64_t seed = 0;
  bool stratified = true;
  /// Test indices of each fold, ascending.
  std::vector<std::vector<std::uint32_t>> folds;

  std::size_t size() const { return folds.size(); }
  /// Indices outside the fold, ascending.
  std::vector<std::uint32_t> training_indices(std::size_t fold) const;
  /// Hash of the partition; results computed on different plans never compare.
  std::uint64_t fingerprint() const;
};

/// Deals a seeded shuffle of each sense's examples round-robin over n folds.
/// Fold sizes differ by at most one, and so do each sense's counts per fold.
FoldPlan make_folds(const Dataset& ds, std::size_t n, std::uint64_t seed, bool stratified = true);

using Predictor = std::function<SenseId(const SparseExample&)>;
/// Builds a predictor from a training fold.
using Learner = std::function<Predictor(const Dataset& train)>;

enum class Algorithm { kMfs, kNb, kKnn, kBoost };

std::string_view algorithm_name(Algorithm algo);
Algorithm algorithm_from_name(std::string_view name);

struct AlgorithmSpec {
  AlgorithmSpec() = default;
  explicit AlgorithmSpec(Algorithm algo) : algorithm(algo) {}

  Algorithm algorithm = Algorithm::kBoost;
  std::size_t knn_k = 15;
  NbOptions nb;
  TrainConfig boost;
  FilterMethod filter = FilterMethod::kAll;
  /// Explicit filter parameter (N or budget); ignored when rejection is set.
  std::size_t filter_param = 1;
  /// Target fraction of training attributes to reject, converted per fold.
  std::optional<double> rejection;

  /// Short label used in reports, e.g. "boost", "knn15", "boost-rlm".
  std::string tag() const;
};

Learner make_learner(const AlgorithmSpec& spec);

struct CvResult {
  std::string algorithm;
  std::string word;
  std::vector<double> fold_accuracy;
  double mean = 0;
  std::uint64_t plan = 0;
};

CvResult cross_validate(const Learner& learner, const std::string& tag, const Dataset& ds, const FoldPlan& plan,
                        std::size_t jobs = 1);
CvResult cross_validate(const AlgorithmSpec& spec, const Dataset& ds, const FoldPlan& plan, std::size_t jobs = 1);

/// t_{9, 0.975}
inline constexpr double kPairedTThreshold = 2.262;

enum class Winner { kA, kB, kTie };
std::string_view winner_name(Winner w);

struct Comparison {
  std::string word;
  std::string algo_a;
  std::string algo_b;
  double t = 0;
  bool significant = false;
  Winner winner = Winner::kTie;
};

/// Paired t over per-fold differences a_i - b_i with the (n-1)-denominator
/// standard deviation. Zero variance: significant iff the mean difference is
/// nonzero (t is then +-infinity).
Comparison paired_t(std::span<const double> a, std::span<const double> b,
                    double threshold = kPairedTThreshold);
/// Refuses results computed on different words or fold plans.
Comparison compare(const CvResult& a, const CvResult& b, double threshold = kPairedTThreshold);

struct WinsTiesLosses {
  std::size_t wins = 0, significant_wins = 0;
  std::size_t ties = 0;
  std::size_t losses = 0, significant_losses = 0;

  /// "wins(sig)-ties-losses(sig)"
  std::string str() const;
};

/// Matches results by word; both sides must cover the same words.
WinsTiesLosses compare_table(std::span<const CvResult> a, std::span<const CvResult> b,
                             double threshold = kPairedTThreshold);

struct CurvePoint {
  std::size_t round = 0;
  double error = 0;
};

/// Error of each rule prefix on `test`, accumulated in a single pass.
std::vector<CurvePoint> curve_rounds(const CombinedModel& model, std::span<const SparseExample> test,
                                     std::span<const std::size_t> checkpoints);

/// Fold-averaged held-out error of boosting at each checkpoint. Checkpoints
/// past the rounds a fold actually trained (early stop) reuse its final model.
std::vector<CurvePoint> cv_curve_rounds(const Dataset& ds, const FoldPlan& plan, const TrainConfig& config,
                                        std::span<const std::size_t> checkpoints, std::size_t jobs = 1);

/// Ways of shrinking the weak learner's search space that the rejection
/// sweep compares. kLazy rejects by sampling 1 - level of the pool per round.
enum class Reduction { kFreq, kLFreq, kRlm, kLazy };
std::string_view reduction_name(Reduction r);
Reduction reduction_from_name(std::string_view name);

struct RejectionPoint {
  double level = 0;
  /// Fold-averaged rejection actually achieved.
  double achieved = 0;
  double error = 0;
};

/// Cross-validated error at each rejection level. Filters are fitted on each
/// training fold only.
std::vector<RejectionPoint> curve_rejection(const Dataset& ds, const FoldPlan& plan, Reduction method,
                                            std::span<const double> levels, const TrainConfig& config,
                                            std::size_t jobs = 1);

// Reports -------------------------------------------------------------------

void write_accuracy_csv(std::ostream& out, std::span<const CvResult> results);
void write_comparison_csv(std::ostream& out, std::span<const Comparison> comparisons);
void write_round_curve_csv(std::ostream& out, std::span<const CurvePoint> curve);
void write_rejection_csv(std::ostream& out, std::span<const RejectionPoint> curve);

struct WordSummary {
  std::string word;
  std::string pos;
  std::size_t senses = 0;
  std::size_t examples = 0;
  std::size_t attributes = 0;
  double mfs_share = 0;  // fraction of the majority sense
};

WordSummary summarize(const Dataset& ds);

/// Per-word table with averages over nouns, verbs and all words. `results[a]`
/// holds algorithm a's results in the same word order as `words`.
void write_summary_table(std::ostream& out, std::span<const WordSummary> words,
                         std::span<const std::vector<CvResult>> results);

/// Formats with 10 significant digits, the precision used in every report.
std::string format_real(double v);

}  // namespace lazyboost
