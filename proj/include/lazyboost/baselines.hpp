#pragma once

// Benchmark classifiers: most-frequent-sense, Naive Bayes and exemplar-based
// k-NN over the same sparse attribute space the booster uses.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lazyboost/dataset.hpp"

namespace lazyboost {

class MfsModel {
 public:
  explicit MfsModel(const Dataset& train);
  SenseId majority() const { return majority_; }
  std::span<const std::uint32_t> counts() const { return counts_; }
  SenseId classify(const SparseExample&) const { return majority_; }

 private:
  SenseId majority_ = 0;
  std::vector<std::uint32_t> counts_;
};

inline MfsModel train_mfs(const Dataset& train) { return MfsModel(train); }

struct NbOptions {
  /// Replacement for zero conditional counts. Unset: prior(s) / m.
  std::optional<double> zero_count_constant;
};

class NbModel {
 public:
  NbModel(const Dataset& train, const NbOptions& options = {});

  std::span<const double> priors() const { return priors_; }
  std::span<const std::uint32_t> sense_counts() const { return sense_counts_; }
  std::size_t examples() const { return m_; }
  /// Estimate of P(attr holds | sense), smoothed when the count is zero.
  double cond(AttrId attr, SenseId s) const;
  /// log prior(s) + sum of log cond(a|s) over the example's attributes.
  /// Attributes absent from the training data carry no evidence and are skipped.
  std::vector<double> log_posterior(const SparseExample& ex) const;
  SenseId classify(const SparseExample& ex) const;

 private:
  std::size_t m_ = 0;
  std::size_t k_ = 0;
  std::vector<double> priors_;
  std::vector<std::uint32_t> sense_counts_;
  std::vector<double> fallback_;   // per sense
  std::vector<std::uint32_t> counts_;  // [attr][sense]
  std::vector<double> log_cond_;   // [attr][sense], fallback already applied
  std::vector<bool> observed_;     // attribute occurs in training
};

inline NbModel train_nb(const Dataset& train, const NbOptions& options = {}) { return NbModel(train, options); }

/// Tolerance on log-posteriors below which two senses count as tied.
inline constexpr double kNbTieTolerance = 1e-12;

class KnnModel {
 public:
  /// Keeps a copy of the training set. Throws when k is 0.
  KnnModel(Dataset train, std::size_t k);

  std::size_t k() const { return k_; }
  const Dataset& training() const { return train_; }

  /// Indices of the k nearest training examples, nearest first; equal
  /// distances are admitted by lower index.
  std::vector<std::uint32_t> neighbours(const SparseExample& ex) const;
  /// Closeness-weighted vote: each neighbour adds (7 - distance) to its sense.
  std::vector<double> votes(const SparseExample& ex) const;
  SenseId classify(const SparseExample& ex) const;

 private:
  Dataset train_;
  std::size_t k_;
};

/// Throws std::invalid_argument when k exceeds the training-set size.
KnnModel train_knn(const Dataset& train, std::size_t k = 15);

}  // namespace lazyboost
