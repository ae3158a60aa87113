#include "lazyboost/selection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace lazyboost {

namespace {

double plogp(double count, double total) {
  if (count <= 0) return 0.0;
  const double p = count / total;
  return -p * std::log2(p);
}

std::size_t observed_count(const Dataset& ds) {
  std::size_t n = 0;
  for (AttrId a = 0; a < ds.num_attributes(); ++a) n += ds.index().global_count(a) > 0;
  return n;
}

/// For each attribute, its best (smallest) rank across the per-sense
/// frequency orderings; attributes never seen get no rank. lfreq(n) keeps
/// exactly the attributes whose rank is below n.
std::vector<std::size_t> lfreq_ranks(const Dataset& ds) {
  constexpr auto kUnranked = std::numeric_limits<std::size_t>::max();
  const auto& index = ds.index();
  std::vector<std::size_t> best(ds.num_attributes(), kUnranked);
  std::vector<AttrId> order;
  for (SenseId s = 0; s < ds.num_senses(); ++s) {
    order.clear();
    for (AttrId a = 0; a < ds.num_attributes(); ++a) {
      if (index.sense_count(a, s) > 0) order.push_back(a);
    }
    std::sort(order.begin(), order.end(), [&](AttrId x, AttrId y) {
      const auto cx = index.sense_count(x, s), cy = index.sense_count(y, s);
      return cx != cy ? cx > cy : x < y;
    });
    for (std::size_t r = 0; r < order.size(); ++r) best[order[r]] = std::min(best[order[r]], r);
  }
  return best;
}

std::vector<AttrId> rlm_order(const Dataset& ds) {
  std::vector<AttrId> ids;
  std::vector<double> dist(ds.num_attributes());
  for (AttrId a = 0; a < ds.num_attributes(); ++a) {
    if (ds.index().global_count(a) == 0) continue;
    ids.push_back(a);
    dist[a] = rlm_distance(ds, a);
  }
  std::stable_sort(ids.begin(), ids.end(), [&](AttrId x, AttrId y) { return dist[x] < dist[y]; });
  return ids;
}

}  // namespace

std::string_view filter_name(FilterMethod method) {
  switch (method) {
    case FilterMethod::kAll: return "none";
    case FilterMethod::kFreq: return "freq";
    case FilterMethod::kLFreq: return "lfreq";
    case FilterMethod::kRlm: return "rlm";
  }
  return "?";
}

FilterMethod filter_from_name(std::string_view name) {
  if (name == "none" || name == "all") return FilterMethod::kAll;
  if (name == "freq") return FilterMethod::kFreq;
  if (name == "lfreq") return FilterMethod::kLFreq;
  if (name == "rlm") return FilterMethod::kRlm;
  throw std::invalid_argument("unknown filter '" + std::string(name) + "'");
}

AttributeSubset all_attributes(const Dataset& ds) {
  auto out = freq_filter(ds, 1);
  out.method = FilterMethod::kAll;
  out.parameter = 0;
  return out;
}

AttributeSubset freq_filter(const Dataset& ds, std::size_t n) {
  if (n == 0) throw std::invalid_argument("frequency threshold must be at least 1");
  AttributeSubset out{{}, FilterMethod::kFreq, n};
  for (AttrId a = 0; a < ds.num_attributes(); ++a) {
    if (ds.index().global_count(a) >= n) out.kept.push_back(a);
  }
  return out;
}

AttributeSubset lfreq_filter(const Dataset& ds, std::size_t n) {
  if (n == 0) throw std::invalid_argument("per-sense budget must be at least 1");
  AttributeSubset out{{}, FilterMethod::kLFreq, n};
  const auto ranks = lfreq_ranks(ds);
  for (AttrId a = 0; a < ranks.size(); ++a) {
    if (ranks[a] < n) out.kept.push_back(a);
  }
  return out;
}

double rlm_distance(const Dataset& ds, AttrId attr) {
  const auto& index = ds.index();
  const double m = static_cast<double>(ds.size());
  if (m == 0) throw std::invalid_argument("RLM distance on an empty dataset");
  const auto totals = ds.sense_totals();

  double h_joint = 0, h_attr = 0, h_class = 0;
  const double holds = index.global_count(attr);
  h_attr = plogp(holds, m) + plogp(m - holds, m);
  for (SenseId s = 0; s < ds.num_senses(); ++s) {
    const double in_s = totals[s];
    const double both = index.sense_count(attr, s);
    h_class += plogp(in_s, m);
    h_joint += plogp(both, m) + plogp(in_s - both, m);
  }
  if (h_joint <= 0) return 0.0;
  // H(C|A) + H(A|C) = 2 H(A,C) - H(A) - H(C)
  const double d = (2 * h_joint - h_attr - h_class) / h_joint;
  return std::clamp(d, 0.0, 1.0);
}

AttributeSubset rlm_rank(const Dataset& ds, std::size_t budget) {
  if (budget == 0) throw std::invalid_argument("RLM budget must be at least 1");
  auto order = rlm_order(ds);
  if (order.size() > budget) order.resize(budget);
  std::sort(order.begin(), order.end());
  return {std::move(order), FilterMethod::kRlm, budget};
}

double rejection_fraction(const Dataset& ds, const AttributeSubset& subset) {
  const auto total = observed_count(ds);
  if (total == 0) return 0.0;
  return 1.0 - static_cast<double>(subset.kept.size()) / static_cast<double>(total);
}

AttributeSubset apply_filter(const Dataset& ds, FilterMethod method, std::size_t parameter) {
  switch (method) {
    case FilterMethod::kAll: return all_attributes(ds);
    case FilterMethod::kFreq: return freq_filter(ds, parameter);
    case FilterMethod::kLFreq: return lfreq_filter(ds, parameter);
    case FilterMethod::kRlm: return rlm_rank(ds, parameter);
  }
  throw std::invalid_argument("unknown filter method");
}

AttributeSubset filter_for_rejection(const Dataset& ds, FilterMethod method, double level) {
  if (!(level >= 0.0 && level < 1.0)) throw std::invalid_argument("rejection level must lie in [0, 1)");
  const std::size_t total = observed_count(ds);
  // Smallest kept count whose rejection does not exceed the level.
  const auto min_kept = static_cast<std::size_t>(std::ceil((1.0 - level) * static_cast<double>(total) - 1e-9));

  switch (method) {
    case FilterMethod::kAll:
      return all_attributes(ds);
    case FilterMethod::kFreq: {
      // kept(n) shrinks as n grows; take the largest n that keeps enough.
      std::vector<std::uint32_t> counts;
      for (AttrId a = 0; a < ds.num_attributes(); ++a) {
        if (const auto c = ds.index().global_count(a); c > 0) counts.push_back(c);
      }
      std::sort(counts.begin(), counts.end(), std::greater<>());
      if (counts.empty() || min_kept == 0) return freq_filter(ds, counts.empty() ? 1 : counts.front());
      return freq_filter(ds, counts[std::min(min_kept, counts.size()) - 1]);
    }
    case FilterMethod::kLFreq: {
      // kept(n) grows with n; take the smallest n that keeps enough.
      auto ranks = lfreq_ranks(ds);
      std::erase(ranks, std::numeric_limits<std::size_t>::max());
      std::sort(ranks.begin(), ranks.end());
      if (ranks.empty()) return lfreq_filter(ds, 1);
      const std::size_t idx = std::min(std::max<std::size_t>(min_kept, 1), ranks.size()) - 1;
      return lfreq_filter(ds, ranks[idx] + 1);
    }
    case FilterMethod::kRlm:
      return rlm_rank(ds, std::max<std::size_t>(min_kept, 1));
  }
  throw std::invalid_argument("unknown filter method");
}

std::size_t sample_size(std::size_t pool_size, double proportion) {
  if (pool_size == 0) return 0;
  const auto n = static_cast<std::size_t>(std::ceil(proportion * static_cast<double>(pool_size) - 1e-9));
  return std::clamp<std::size_t>(n, 1, pool_size);
}

std::vector<AttrId> sample_candidates(std::span<const AttrId> pool, const SamplerConfig& cfg,
                                      std::uint64_t round) {
  if (pool.empty()) throw std::invalid_argument("cannot sample from an empty pool");
  if (!(cfg.proportion > 0.0 && cfg.proportion <= 1.0)) {
    throw std::invalid_argument("sampling proportion must lie in (0, 1]");
  }
  std::vector<AttrId> out(pool.begin(), pool.end());
  const std::size_t n = sample_size(pool.size(), cfg.proportion);
  if (n < out.size()) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(round), static_cast<std::uint32_t>(round >> 32)};
    std::mt19937_64 rng(seq);
    // Partial Fisher-Yates: the first n slots become the sample.
    for (std::size_t i = 0; i < n; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, out.size() - 1);
      std::swap(out[i], out[pick(rng)]);
    }
    out.resize(n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lazyboost
