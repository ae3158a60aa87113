#pragma once

// Seeded generator of sense-tagged corpora shaped like narrow-window WSD data:
// Zipfian token distributions, a shared background vocabulary of function
// words, sense-specific cue words and fixed multiword phrases.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lazyboost/dataset.hpp"

namespace lazyboost {

struct SyntheticSpec {
  std::string word = "synth";
  std::string pos = "n";
  std::size_t senses = 3;
  std::size_t examples = 100;
  /// Cue tokens per position and sense.
  std::size_t vocab = 20;
  /// Background tokens per position, shared by every sense.
  std::size_t shared_vocab = 100;
  /// Probability mass of sense 0. Zero leaves the sense prior to `sense_zipf`.
  double skew = 0.0;
  /// Exponent of the Zipfian sense prior used when skew is 0 (0 = uniform).
  double sense_zipf = 0.0;
  /// Probability that a cue token (or phrase) is taken from another sense's
  /// vocabulary instead of the example's own (contextual noise).
  double noise = 0.0;
  /// Fraction of examples whose label is replaced by a different sense after
  /// the context has been generated (annotation noise).
  double label_noise = 0.0;
  /// Probability that a context token is drawn from the background vocabulary
  /// instead of the sense's cue vocabulary.
  double background = 0.0;
  /// Probability that a left or right context is replaced by a fixed
  /// two-word phrase. Phrases are shared between senses, each sense
  /// preferring its own.
  double phrase_rate = 0.0;
  /// Phrases per side.
  std::size_t phrases = 0;
  /// Probability that the outer slot of a side falls outside the sentence.
  double boundary = 0.0;
  /// Build phrases from background words instead of cue words, so the words
  /// of a phrase are individually ambiguous and only their pairing is not.
  bool collocations = false;
  /// Exponent of the within-vocabulary token distribution.
  double token_zipf = 1.0;
};

/// Deterministic for a fixed (spec, seed). Every sense occurs at least once.
/// With noise, label_noise, background, phrase_rate and boundary all zero each cue token
/// belongs to exactly one sense, so any single position identifies the label.
std::vector<RawInstance> generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// Parses "key=value,key=value" into a spec (keys are the field names).
/// Throws std::invalid_argument on unknown keys or bad values.
SyntheticSpec parse_synthetic_spec(const std::string& text, SyntheticSpec base = {});

/// A multi-word corpus: each word draws its sense count, size and noise rate
/// from the ranges (inclusive) and shares the rest of `shape`. The last
/// `verbs` words are tagged "v", the others carry shape.pos.
struct SuiteSpec {
  std::size_t words = 1;
  std::size_t verbs = 0;
  std::pair<std::size_t, std::size_t> senses{3, 3};
  std::pair<std::size_t, std::size_t> examples{100, 100};
  std::pair<double, double> noise{0.0, 0.0};
  SyntheticSpec shape;
};

/// Fifteen words (ten nouns, five verbs) of about a thousand examples with
/// 4-30 senses and 10-30% contextual noise: a few concentrated cue words per
/// sense against a large Zipfian background vocabulary, Zipfian sense priors.
SuiteSpec benchmark_suite();

/// Words are named shape.word when there is one, shape.word + two-digit index
/// otherwise. Each word's draws and corpus depend only on (spec, seed, index).
std::vector<RawInstance> generate_suite(const SuiteSpec& spec, std::uint64_t seed);

/// Parses a comma-separated list. Items are "benchmark" (start from
/// benchmark_suite()), "words=N", "verbs=N", any SyntheticSpec key, and for
/// senses, examples and noise either a value or a "lo:hi" range.
SuiteSpec parse_suite_spec(const std::string& text);

}  // namespace lazyboost
