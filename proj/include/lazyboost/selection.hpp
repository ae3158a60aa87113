#pragma once

// Attribute-space reduction for the weak learner: global and per-sense
// frequency filters, RLM-distance ranking, and the per-round random candidate
// sampler (LazyBoosting).

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lazyboost/dataset.hpp"

namespace lazyboost {

enum class FilterMethod { kAll, kFreq, kLFreq, kRlm };

std::string_view filter_name(FilterMethod method);
/// Accepts "none"/"all", "freq", "lfreq", "rlm".
FilterMethod filter_from_name(std::string_view name);

struct AttributeSubset {
  std::vector<AttrId> kept;  // sorted ascending
  FilterMethod method = FilterMethod::kAll;
  std::size_t parameter = 0;
};

/// Every attribute that occurs at least once in the dataset.
AttributeSubset all_attributes(const Dataset& ds);

/// Drops attributes occurring fewer than n times.
AttributeSubset freq_filter(const Dataset& ds, std::size_t n);

/// Keeps, for every sense, its n most frequent attributes (frequency counted
/// within the sense; cutoff ties go to the lower id).
AttributeSubset lfreq_filter(const Dataset& ds, std::size_t n);

/// Normalized partition distance between the holds/fails split induced by the
/// attribute and the sense partition, in [0, 1]. Base-2 entropies; defined as
/// 0 when the joint entropy vanishes.
double rlm_distance(const Dataset& ds, AttrId attr);

/// The `budget` observed attributes with the smallest RLM distance.
AttributeSubset rlm_rank(const Dataset& ds, std::size_t budget);

/// Fraction of the dataset's observed attributes the subset discards.
double rejection_fraction(const Dataset& ds, const AttributeSubset& subset);

/// Chooses the method's parameter whose rejection is the closest one not
/// exceeding `level` (a fraction in [0, 1)). kAll ignores the level.
AttributeSubset filter_for_rejection(const Dataset& ds, FilterMethod method, double level);

/// Applies `method` with an explicit parameter; kAll ignores it.
AttributeSubset apply_filter(const Dataset& ds, FilterMethod method, std::size_t parameter);

struct SamplerConfig {
  /// Fraction of the pool examined per round, in (0, 1].
  double proportion = 1.0;
  std::uint64_t seed = 0;
};

/// Number of candidates drawn from a pool of the given size.
std::size_t sample_size(std::size_t pool_size, double proportion);

/// Uniform sample without replacement, returned in ascending id order. The
/// draw depends only on (seed, round); proportion 1 returns the pool.
std::vector<AttrId> sample_candidates(std::span<const AttrId> pool, const SamplerConfig& cfg,
                                      std::uint64_t round);

}  // namespace lazyboost
