#pragma once

// Reference implementations used to check the library. They share no code
// with it beyond the data types: everything is recomputed by scanning raw
// contexts, in long double or exact rational arithmetic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lazyboost/dataset.hpp"

namespace oracle {

using lazyboost::AttrId;
using lazyboost::SenseId;

/// Sense with the highest score; ties go to the larger training count, then
/// to the lower id. `tied(a, b)` decides whether two scores count as equal.
template <typename Score, typename Tied>
SenseId pick(const std::vector<Score>& scores, std::span<const std::uint32_t> counts, Tied tied) {
  Score top = scores[0];
  for (const auto& x : scores) top = std::max(top, x);
  std::size_t chosen = scores.size();
  for (std::size_t s = 0; s < scores.size(); ++s) {
    if (!tied(scores[s], top)) continue;
    if (chosen == scores.size() || counts[s] > counts[chosen]) chosen = s;
  }
  return static_cast<SenseId>(chosen);
}

inline bool holds(const lazyboost::Dataset& ds, std::size_t i, AttrId a) {
  // Scan the raw context instead of the sorted attribute array.
  const auto features = lazyboost::extract_features(ds.instance(i));
  const auto& target = ds.index().value(a);
  return std::any_of(features.begin(), features.end(), [&](const auto& f) { return f == target; });
}

struct RuleResult {
  AttrId attr = 0;
  long double z = 0;
  std::vector<long double> c0, c1;
};

/// Exhaustive weak learner: W from a full scan of every (example, label)
/// pair, Z = 2 sum sqrt(W+ W-), minimum over candidates with candidates
/// within `tie` of the minimum resolved to the lowest id.
inline RuleResult best_rule(const lazyboost::Dataset& ds, std::span<const double> weights,
                            std::span<const AttrId> candidates, long double eps, long double tie) {
  const std::size_t m = ds.size();
  const std::size_t k = ds.num_senses();
  std::vector<RuleResult> all;
  for (AttrId a : candidates) {
    std::vector<long double> w(4 * k, 0.0L);  // [j][l][b]
    for (std::size_t i = 0; i < m; ++i) {
      const int j = holds(ds, i, a) ? 1 : 0;
      for (std::size_t l = 0; l < k; ++l) {
        const int b = ds.example(i).label == l ? 0 : 1;
        w[(j * k + l) * 2 + b] += weights[i * k + l];
      }
    }
    RuleResult r;
    r.attr = a;
    r.c0.resize(k);
    r.c1.resize(k);
    for (int j = 0; j < 2; ++j) {
      for (std::size_t l = 0; l < k; ++l) {
        const long double plus = w[(j * k + l) * 2];
        const long double minus = w[(j * k + l) * 2 + 1];
        r.z += 2 * std::sqrt(plus * minus);
        (j ? r.c1 : r.c0)[l] = 0.5L * std::log((plus + eps) / (minus + eps));
      }
    }
    all.push_back(std::move(r));
  }
  long double zmin = std::numeric_limits<long double>::infinity();
  for (const auto& r : all) zmin = std::min(zmin, r.z);
  const RuleResult* best = nullptr;
  for (const auto& r : all) {
    if (r.z - zmin <= tie && (!best || r.attr < best->attr)) best = &r;
  }
  return *best;
}

using Rational = boost::multiprecision::cpp_rational;

/// Naive Bayes posterior argmax in exact arithmetic. Conditionals are
/// count(a, s) / count(s); a zero count becomes prior(s) / m. Attributes that
/// never occur in training are ignored. `test` holds raw feature values.
inline SenseId naive_bayes(const lazyboost::Dataset& train, const lazyboost::RawInstance& test) {
  const std::size_t m = train.size();
  const std::size_t k = train.num_senses();
  std::vector<std::array<lazyboost::FeatureValue, lazyboost::kNumFeatures>> feats;
  for (std::size_t i = 0; i < m; ++i) feats.push_back(lazyboost::extract_features(train.instance(i)));
  std::vector<std::int64_t> sense_count(k, 0);
  for (std::size_t i = 0; i < m; ++i) ++sense_count[train.example(i).label];

  std::vector<Rational> score(k);
  for (std::size_t s = 0; s < k; ++s) score[s] = Rational(sense_count[s], static_cast<std::int64_t>(m));
  for (const auto& f : lazyboost::extract_features(test)) {
    std::vector<std::int64_t> joint(k, 0);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (std::find(feats[i].begin(), feats[i].end(), f) != feats[i].end()) {
        ++joint[train.example(i).label];
        ++total;
      }
    }
    if (total == 0) continue;
    for (std::size_t s = 0; s < k; ++s) {
      if (sense_count[s] == 0) continue;
      score[s] *= joint[s] > 0 ? Rational(joint[s], sense_count[s])
                               : Rational(sense_count[s], static_cast<std::int64_t>(m * m));
    }
  }
  std::vector<std::uint32_t> counts(sense_count.begin(), sense_count.end());
  return pick(score, counts, [](const Rational& a, const Rational& b) { return a == b; });
}

/// k-NN by a full scan: distance = positions whose feature values differ,
/// stable (distance, index) order, vote 7 - distance.
inline SenseId knn(const lazyboost::Dataset& train, const lazyboost::RawInstance& test, std::size_t k) {
  const auto tf = lazyboost::extract_features(test);
  std::vector<std::pair<int, std::size_t>> order;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto f = lazyboost::extract_features(train.instance(i));
    int d = 0;
    for (std::size_t p = 0; p < lazyboost::kNumFeatures; ++p) d += f[p] == tf[p] ? 0 : 1;
    order.emplace_back(d, i);
  }
  std::stable_sort(order.begin(), order.end());
  std::vector<long> votes(train.num_senses(), 0);
  for (std::size_t n = 0; n < k && n < order.size(); ++n) {
    votes[train.example(order[n].second).label] += 7 - order[n].first;
  }
  std::vector<std::uint32_t> counts(train.num_senses(), 0);
  for (const auto& ex : train.examples()) ++counts[ex.label];
  return pick(votes, counts, [](long a, long b) { return a == b; });
}

/// Two-sided paired t statistic in long double.
inline long double paired_t(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  std::vector<long double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<long double>(a[i]) - b[i];
  const long double mean = std::accumulate(d.begin(), d.end(), 0.0L) / n;
  long double ss = 0;
  for (auto x : d) ss += (x - mean) * (x - mean);
  return mean / (std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<long double>(n)));
}

}  // namespace oracle
