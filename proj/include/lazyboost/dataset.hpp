#pragma once

// Sense-tagged corpora, the seven-feature context window and its binarization
// into a sparse attribute space.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lazyboost {

using AttrId = std::uint32_t;
using SenseId = std::uint32_t;

inline constexpr AttrId kUnknownAttr = std::numeric_limits<AttrId>::max();
inline constexpr std::size_t kNumFeatures = 7;

/// Token standing in for a context slot outside the sentence.
inline constexpr std::string_view kSentinel = "_NIL_";

/// Joins the two tokens of a collocation feature. Tokens are space-delimited in
/// the corpus format, so a space can never occur inside one.
inline constexpr char kPairSeparator = ' ';

class Dataset;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RawInstance {
  std::string target_word;
  std::string pos_tag;
  std::string sense_label;
  /// w-2, w-1, w+1, w+2
  std::array<std::string, 4> context;

  bool operator==(const RawInstance&) const = default;
};

enum class FeaturePosition : std::uint8_t {
  kPrev2 = 0,      // w-2
  kPrev1,          // w-1
  kNext1,          // w+1
  kNext2,          // w+2
  kPairPrev,       // (w-2, w-1)
  kPairAround,     // (w-1, w+1)
  kPairNext,       // (w+1, w+2)
};

std::string_view position_name(FeaturePosition pos);
FeaturePosition position_from_name(std::string_view name);

struct FeatureValue {
  FeaturePosition position;
  std::string value;

  bool operator==(const FeatureValue&) const = default;
};

std::array<FeatureValue, kNumFeatures> extract_features(const RawInstance& inst);

/// Reads the tab-separated corpus format. Blank lines and lines starting with
/// '#' are skipped.
std::vector<RawInstance> parse_corpus(std::istream& in);
std::vector<RawInstance> read_corpus_file(const std::string& path);
void write_corpus(std::ostream& out, std::span<const RawInstance> instances);

/// Splits a multi-word corpus into per-word groups, in order of each word's
/// first appearance.
std::vector<std::vector<RawInstance>> group_by_word(std::span<const RawInstance> instances);

struct SparseExample {
  /// Sorted. One id per feature position, so never duplicated.
  std::array<AttrId, kNumFeatures> attrs{};
  SenseId label = 0;
};

/// Maps binarized predicates "position = value" to dense ids and keeps the
/// occurrence statistics the learners and filters need.
class AttributeIndex {
 public:
  AttrId size() const { return static_cast<AttrId>(value_of_.size()); }

  /// kUnknownAttr when the predicate was never seen.
  AttrId find(const FeatureValue& fv) const;
  const FeatureValue& value(AttrId a) const { return value_of_[a]; }
  std::span<const FeatureValue> values() const { return value_of_; }

  std::uint32_t global_count(AttrId a) const { return static_cast<std::uint32_t>(postings_[a].size()); }
  std::uint32_t sense_count(AttrId a, SenseId s) const { return sense_count_[a * num_senses_ + s]; }
  /// Example indices where the predicate holds, strictly increasing.
  std::span<const std::uint32_t> postings(AttrId a) const { return postings_[a]; }

 private:
  friend class Dataset;
  friend Dataset build_dataset(std::span<const RawInstance> instances);

  AttrId intern(const FeatureValue& fv);
  void rebuild_counts(std::span<const SparseExample> examples, std::size_t num_senses);

  static std::string key(const FeatureValue& fv);

  std::unordered_map<std::string, AttrId> attr_of_;
  std::vector<FeatureValue> value_of_;
  std::vector<std::vector<std::uint32_t>> postings_;
  std::vector<std::uint32_t> sense_count_;  // row-major [attr][sense]
  std::size_t num_senses_ = 0;
};

/// One classification problem: every occurrence of a single ambiguous word.
class Dataset {
 public:
  const std::string& word() const { return word_; }
  const std::string& pos() const { return pos_; }
  std::span<const std::string> senses() const { return senses_; }
  std::size_t num_senses() const { return senses_.size(); }
  std::span<const SparseExample> examples() const { return examples_; }
  std::size_t size() const { return examples_.size(); }
  const SparseExample& example(std::size_t i) const { return examples_[i]; }
  const AttributeIndex& index() const { return index_; }
  AttrId num_attributes() const { return index_.size(); }

  /// Number of examples labelled with each sense.
  std::span<const std::uint32_t> sense_totals() const { return sense_totals_; }
  /// Highest sense_totals entry, lowest id on ties.
  SenseId majority_sense() const;

  /// Restriction to the given example indices. Attribute and sense ids are
  /// those of this dataset, so examples of the complement can be scored
  /// against models trained on the result. Counts and postings describe only
  /// the selected examples; senses absent from the subset keep a zero total.
  Dataset subset(std::span<const std::uint32_t> indices) const;

  /// Reconstructs the corpus record of example i.
  RawInstance instance(std::size_t i) const;

  /// Maps an instance onto this dataset's attribute ids; unseen predicates
  /// become kUnknownAttr. The label is left at 0 when the sense is unknown.
  SparseExample encode(const RawInstance& inst) const;

 private:
  friend Dataset build_dataset(std::span<const RawInstance> instances);

  std::string word_;
  std::string pos_;
  std::vector<std::string> senses_;
  std::vector<SparseExample> examples_;
  std::vector<std::uint32_t> sense_totals_;
  AttributeIndex index_;
};

/// Ids are assigned in first-occurrence order, for senses and attributes alike.
Dataset build_dataset(std::span<const RawInstance> instances);

/// Number of the seven feature positions on which two examples differ.
/// Relies on each attribute id belonging to exactly one position.
inline int hamming_distance(const SparseExample& a, const SparseExample& b) {
  int common = 0;
  std::size_t i = 0, j = 0;
  while (i < kNumFeatures && j < kNumFeatures) {
    if (a.attrs[i] == b.attrs[j]) {
      if (a.attrs[i] != kUnknownAttr) ++common;
      ++i;
      ++j;
    } else if (a.attrs[i] < b.attrs[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return static_cast<int>(kNumFeatures) - common;
}

}  // namespace lazyboost
