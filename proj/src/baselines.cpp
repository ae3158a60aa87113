#include "lazyboost/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "lazyboost/boosting.hpp"

namespace lazyboost {

MfsModel::MfsModel(const Dataset& train)
    : majority_(train.majority_sense()), counts_(train.sense_totals().begin(), train.sense_totals().end()) {
  if (train.size() == 0) throw std::invalid_argument("MFS needs a nonempty training set");
}

// ---------------------------------------------------------------------------

NbModel::NbModel(const Dataset& train, const NbOptions& options)
    : m_(train.size()),
      k_(train.num_senses()),
      sense_counts_(train.sense_totals().begin(), train.sense_totals().end()) {
  if (m_ == 0) throw std::invalid_argument("Naive Bayes needs a nonempty training set");
  const double m = static_cast<double>(m_);
  priors_.resize(k_);
  fallback_.resize(k_);
  for (SenseId s = 0; s < k_; ++s) {
    priors_[s] = sense_counts_[s] / m;
    fallback_[s] = options.zero_count_constant.value_or(priors_[s] / m);
  }

  const auto& index = train.index();
  const AttrId num_attrs = train.num_attributes();
  counts_.resize(static_cast<std::size_t>(num_attrs) * k_);
  observed_.resize(num_attrs);
  for (AttrId a = 0; a < num_attrs; ++a) {
    observed_[a] = index.global_count(a) > 0;
    for (SenseId s = 0; s < k_; ++s) counts_[a * k_ + s] = index.sense_count(a, s);
  }
  log_cond_.resize(counts_.size());
  for (AttrId a = 0; a < num_attrs; ++a) {
    for (SenseId s = 0; s < k_; ++s) log_cond_[a * k_ + s] = std::log(cond(a, s));
  }
}

double NbModel::cond(AttrId attr, SenseId s) const {
  const auto count = attr < observed_.size() ? counts_[attr * k_ + s] : 0u;
  if (count == 0 || sense_counts_[s] == 0) return fallback_[s];
  return static_cast<double>(count) / sense_counts_[s];
}

std::vector<double> NbModel::log_posterior(const SparseExample& ex) const {
  std::vector<double> score(k_);
  for (SenseId s = 0; s < k_; ++s) score[s] = std::log(priors_[s]);
  for (AttrId a : ex.attrs) {
    if (a >= observed_.size() || !observed_[a]) continue;
    for (SenseId s = 0; s < k_; ++s) score[s] += log_cond_[a * k_ + s];
  }
  return score;
}

SenseId NbModel::classify(const SparseExample& ex) const {
  return argmax_sense(log_posterior(ex), sense_counts_, kNbTieTolerance);
}

// ---------------------------------------------------------------------------

KnnModel::KnnModel(Dataset train, std::size_t k) : train_(std::move(train)), k_(k) {
  if (k_ == 0) throw std::invalid_argument("k-NN needs k >= 1");
  if (k_ > train_.size()) throw std::invalid_argument("k-NN k exceeds the training-set size");
}

std::vector<std::uint32_t> KnnModel::neighbours(const SparseExample& ex) const {
  const std::size_t m = train_.size();
  std::vector<std::uint8_t> shared(m, 0);
  for (AttrId a : ex.attrs) {
    if (a >= train_.num_attributes()) continue;
    for (auto i : train_.index().postings(a)) ++shared[i];
  }
  // Bucket by distance; scanning indices in order keeps each bucket sorted.
  std::array<std::vector<std::uint32_t>, kNumFeatures + 1> by_distance;
  for (std::uint32_t i = 0; i < m; ++i) by_distance[kNumFeatures - shared[i]].push_back(i);
  std::vector<std::uint32_t> out;
  out.reserve(k_);
  for (const auto& bucket : by_distance) {
    for (auto i : bucket) {
      if (out.size() == k_) return out;
      out.push_back(i);
    }
  }
  return out;
}

std::vector<double> KnnModel::votes(const SparseExample& ex) const {
  std::vector<double> tally(train_.num_senses(), 0.0);
  for (auto i : neighbours(ex)) {
    const auto& other = train_.example(i);
    tally[other.label] += static_cast<double>(kNumFeatures) - hamming_distance(ex, other);
  }
  return tally;
}

SenseId KnnModel::classify(const SparseExample& ex) const {
  return argmax_sense(votes(ex), train_.sense_totals());
}

KnnModel train_knn(const Dataset& train, std::size_t k) {
  return KnnModel(train, k);
}

}  // namespace lazyboost
