#pragma once

// AdaBoost.MH with confidence-rated single-predicate weak rules, restricted to
// one label per example.
//
// Conventions: j = 1 is the partition where the rule's predicate holds, j = 0
// where it fails. Y_i[l] = +1 iff l is example i's sense.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "lazyboost/dataset.hpp"
#include "lazyboost/selection.hpp"

namespace lazyboost {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// m x k weights over (example, label) pairs.
class Distribution {
 public:
  Distribution() = default;
  Distribution(std::size_t examples, std::size_t labels, std::vector<double> weights);

  std::size_t examples() const { return m_; }
  std::size_t labels() const { return k_; }
  double operator()(std::size_t i, std::size_t l) const { return w_[i * k_ + l]; }
  std::span<const double> row(std::size_t i) const { return {w_.data() + i * k_, k_}; }
  std::span<const double> weights() const { return w_; }
  std::span<double> mutable_weights() { return w_; }
  double total() const;

 private:
  std::size_t m_ = 0;
  std::size_t k_ = 0;
  std::vector<double> w_;
};

/// D_1(i, l) = 1 / (m k).
Distribution init_distribution(std::size_t examples, std::size_t labels);

enum Polarity : int { kPlus = 0, kMinus = 1 };

/// W[j][l][b]: mass of the (example, label) pairs in partition j whose label
/// membership sign is b.
class WeightTable {
 public:
  explicit WeightTable(std::size_t labels) : k_(labels), cells_(4 * labels, 0.0) {}

  std::size_t labels() const { return k_; }
  double& operator()(int j, std::size_t l, Polarity b) { return cells_[(j * k_ + l) * 2 + b]; }
  double operator()(int j, std::size_t l, Polarity b) const { return cells_[(j * k_ + l) * 2 + b]; }
  double total() const;

 private:
  std::size_t k_;
  std::vector<double> cells_;
};

WeightTable weight_table(const Dataset& ds, const Distribution& dist, AttrId attr);

struct WeakRule {
  AttrId attr = 0;
  std::vector<double> c0;  // predicate fails
  std::vector<double> c1;  // predicate holds

  bool operator==(const WeakRule&) const = default;
};

struct Confidences {
  std::vector<double> c0;
  std::vector<double> c1;
};

/// c_jl = 1/2 ln((W[j][l][+] + eps) / (W[j][l][-] + eps)).
Confidences rule_confidences(const WeightTable& w, double smoothing);

/// Z = 2 sum_j sum_l sqrt(W[j][l][+] W[j][l][-]), the value reached with the
/// unsmoothed optimal confidences.
double rule_z(const WeightTable& w);

/// Candidates whose Z lies within this distance of the minimum are treated as
/// tied and resolved toward the lowest attribute id, so the choice does not
/// depend on floating-point summation order.
inline constexpr double kZTieTolerance = 1e-12;

struct RuleChoice {
  WeakRule rule;
  double z = 1.0;
};

RuleChoice best_rule(const Dataset& ds, const Distribution& dist, std::span<const AttrId> candidates,
                     double smoothing);

/// Reweights in place: D(i,l) <- D(i,l) exp(-Y_i[l] h(x_i,l)) / Z. Returns Z,
/// the mass before normalization.
double update_distribution(Distribution& dist, const WeakRule& rule, const Dataset& ds);

struct TrainConfig {
  std::size_t max_rounds = 750;
  /// Training stops after the first round whose training error is strictly
  /// below this value.
  double stop_error = 0.05;
  /// Defaults to 1 / (m k).
  std::optional<double> smoothing;
  SamplerConfig sampler;
};

struct RoundLog {
  std::size_t round = 0;
  AttrId attr = 0;
  double z = 0;            // closed form, unsmoothed
  double z_empirical = 0;  // normalizer actually applied
  double training_error = 0;
  double hamming_loss = 0;
  double loss_bound = 0;  // product of z_empirical so far
};

/// Index of the largest score. Ties go to the sense with the larger training
/// count, then to the lower id. Scores within `tolerance` of the maximum count
/// as tied.
SenseId argmax_sense(std::span<const double> scores, std::span<const std::uint32_t> sense_counts,
                     double tolerance = 0.0);

class CombinedModel {
 public:
  CombinedModel() = default;
  CombinedModel(std::string word, std::string pos, std::vector<std::string> senses,
                std::vector<std::uint32_t> sense_counts, std::vector<FeatureValue> attributes);

  const std::string& word() const { return word_; }
  const std::string& pos() const { return pos_; }
  std::span<const std::string> senses() const { return senses_; }
  std::size_t num_senses() const { return senses_.size(); }
  std::span<const std::uint32_t> sense_counts() const { return sense_counts_; }
  std::span<const FeatureValue> attributes() const { return attributes_; }
  std::span<const WeakRule> rules() const { return rules_; }
  std::size_t rounds_trained() const { return rules_.size(); }
  std::span<const RoundLog> round_log() const { return log_; }

  void add_rule(WeakRule rule, std::optional<RoundLog> log = std::nullopt);

  /// f(x, l) summed over the first `prefix` rules (all rules by default).
  std::vector<double> score(const SparseExample& ex, std::optional<std::size_t> prefix = std::nullopt) const;
  SenseId classify(const SparseExample& ex, std::optional<std::size_t> prefix = std::nullopt) const;

  /// Maps an instance onto the model's attribute ids (unknown predicates
  /// become kUnknownAttr).
  SparseExample encode(const RawInstance& inst) const;

 private:
  std::string word_;
  std::string pos_;
  std::vector<std::string> senses_;
  std::vector<std::uint32_t> sense_counts_;
  std::vector<FeatureValue> attributes_;
  std::vector<WeakRule> rules_;
  std::vector<RoundLog> log_;
  std::unordered_map<std::string, AttrId> lookup_;
};

inline bool rule_holds(const SparseExample& ex, AttrId attr) {
  for (AttrId a : ex.attrs) {
    if (a == attr) return true;
  }
  return false;
}

struct TrainTiming {
  double weak_learner_seconds = 0;
  double total_seconds = 0;
  std::size_t rounds = 0;
};

/// Runs boosting over `pool` (every observed attribute when empty). The
/// result depends only on (dataset, config, pool).
CombinedModel train(const Dataset& ds, const TrainConfig& config, std::span<const AttrId> pool = {},
                    TrainTiming* timing = nullptr);

double training_error(const CombinedModel& model, const Dataset& ds);

/// Text format, version 1. Real values carry 17 significant digits so a
/// reload reproduces the model exactly.
void save_model(std::ostream& out, const CombinedModel& model);
/// Reads at most `max_rules` rules when given.
CombinedModel load_model(std::istream& in, std::optional<std::size_t> max_rules = std::nullopt);

}  // namespace lazyboost
