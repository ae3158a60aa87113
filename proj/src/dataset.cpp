#include "lazyboost/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lazyboost {

namespace {

constexpr std::array<std::string_view, kNumFeatures> kPositionNames = {
    "w-2", "w-1", "w+1", "w+2", "w-2,w-1", "w-1,w+1", "w+1,w+2"};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string join_pair(std::string_view a, std::string_view b) {
  std::string out;
  out.reserve(a.size() + b.size() + 1);
  out.append(a);
  out.push_back(kPairSeparator);
  out.append(b);
  return out;
}

}  // namespace

std::string_view position_name(FeaturePosition pos) {
  return kPositionNames[static_cast<std::size_t>(pos)];
}

FeaturePosition position_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kPositionNames.size(); ++i) {
    if (kPositionNames[i] == name) return static_cast<FeaturePosition>(i);
  }
  throw DatasetError("unknown feature position '" + std::string(name) + "'");
}

std::array<FeatureValue, kNumFeatures> extract_features(const RawInstance& inst) {
  const auto& c = inst.context;
  return {{
      {FeaturePosition::kPrev2, c[0]},
      {FeaturePosition::kPrev1, c[1]},
      {FeaturePosition::kNext1, c[2]},
      {FeaturePosition::kNext2, c[3]},
      {FeaturePosition::kPairPrev, join_pair(c[0], c[1])},
      {FeaturePosition::kPairAround, join_pair(c[1], c[2])},
      {FeaturePosition::kPairNext, join_pair(c[2], c[3])},
  }};
}

std::vector<RawInstance> parse_corpus(std::istream& in) {
  std::vector<RawInstance> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    const auto fields = split(line, '\t');
    if (fields.size() != 4) {
      throw ParseError(lineno, "expected 4 tab-separated fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(lineno, "empty target word");
    if (fields[2].empty()) throw ParseError(lineno, "empty sense label");

    const auto tokens = split(fields[3], ' ');
    if (tokens.size() != 4) {
      throw ParseError(lineno, "expected 4 context tokens, found " + std::to_string(tokens.size()));
    }
    RawInstance inst;
    inst.target_word = fields[0];
    inst.pos_tag = fields[1];
    inst.sense_label = fields[2];
    for (std::size_t i = 0; i < 4; ++i) {
      if (tokens[i].empty()) throw ParseError(lineno, "empty context token");
      inst.context[i] = tokens[i];
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<RawInstance> read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open corpus file '" + path + "'");
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, std::span<const RawInstance> instances) {
  for (const auto& inst : instances) {
    out << inst.target_word << '\t' << inst.pos_tag << '\t' << inst.sense_label << '\t'
        << inst.context[0] << ' ' << inst.context[1] << ' ' << inst.context[2] << ' '
        << inst.context[3] << '\n';
  }
}

std::vector<std::vector<RawInstance>> group_by_word(std::span<const RawInstance> instances) {
  std::vector<std::vector<RawInstance>> groups;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& inst : instances) {
    auto [it, inserted] = slot.try_emplace(inst.target_word, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(inst);
  }
  return groups;
}

// ---------------------------------------------------------------------------

std::string AttributeIndex::key(const FeatureValue& fv) {
  std::string k;
  k.reserve(fv.value.size() + 1);
  k.push_back(static_cast<char>('0' + static_cast<int>(fv.position)));
  k.append(fv.value);
  return k;
}

AttrId AttributeIndex::find(const FeatureValue& fv) const {
  const auto it = attr_of_.find(key(fv));
  return it == attr_of_.end() ? kUnknownAttr : it->second;
}

AttrId AttributeIndex::intern(const FeatureValue& fv) {
  auto [it, inserted] = attr_of_.try_emplace(key(fv), size());
  if (inserted) value_of_.push_back(fv);
  return it->second;
}

void AttributeIndex::rebuild_counts(std::span<const SparseExample> examples, std::size_t num_senses) {
  num_senses_ = num_senses;
  postings_.assign(value_of_.size(), {});
  sense_count_.assign(value_of_.size() * num_senses, 0);
  for (std::uint32_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    for (AttrId a : ex.attrs) {
      postings_[a].push_back(i);
      ++sense_count_[a * num_senses + ex.label];
    }
  }
}

// ---------------------------------------------------------------------------

Dataset build_dataset(std::span<const RawInstance> instances) {
  if (instances.empty()) throw DatasetError("cannot build a dataset from no instances");

  Dataset ds;
  ds.word_ = instances.front().target_word;
  ds.pos_ = instances.front().pos_tag;
  std::unordered_map<std::string, SenseId> sense_of;
  ds.examples_.reserve(instances.size());

  for (const auto& inst : instances) {
    if (inst.target_word != ds.word_) {
      throw DatasetError("mixed target words: '" + ds.word_ + "' and '" + inst.target_word + "'");
    }
    if (inst.sense_label.empty()) throw DatasetError("empty sense label");
    auto [it, inserted] = sense_of.try_emplace(inst.sense_label, static_cast<SenseId>(ds.senses_.size()));
    if (inserted) ds.senses_.push_back(inst.sense_label);

    SparseExample ex;
    ex.label = it->second;
    const auto features = extract_features(inst);
    for (std::size_t f = 0; f < kNumFeatures; ++f) ex.attrs[f] = ds.index_.intern(features[f]);
    std::sort(ex.attrs.begin(), ex.attrs.end());
    ds.examples_.push_back(ex);
  }

  ds.sense_totals_.assign(ds.senses_.size(), 0);
  for (const auto& ex : ds.examples_) ++ds.sense_totals_[ex.label];
  ds.index_.rebuild_counts(ds.examples_, ds.senses_.size());
  return ds;
}

SenseId Dataset::majority_sense() const {
  const auto it = std::max_element(sense_totals_.begin(), sense_totals_.end());
  return static_cast<SenseId>(it - sense_totals_.begin());
}

Dataset Dataset::subset(std::span<const std::uint32_t> indices) const {
  Dataset out;
  out.word_ = word_;
  out.pos_ = pos_;
  out.senses_ = senses_;
  out.examples_.reserve(indices.size());
  for (auto i : indices) {
    if (i >= examples_.size()) throw DatasetError("subset index out of range");
    out.examples_.push_back(examples_[i]);
  }
  out.sense_totals_.assign(senses_.size(), 0);
  for (const auto& ex : out.examples_) ++out.sense_totals_[ex.label];
  out.index_.attr_of_ = index_.attr_of_;
  out.index_.value_of_ = index_.value_of_;
  out.index_.rebuild_counts(out.examples_, senses_.size());
  return out;
}

RawInstance Dataset::instance(std::size_t i) const {
  const auto& ex = examples_.at(i);
  RawInstance inst;
  inst.target_word = word_;
  inst.pos_tag = pos_;
  inst.sense_label = senses_[ex.label];
  for (AttrId a : ex.attrs) {
    const auto& fv = index_.value(a);
    const auto p = static_cast<std::size_t>(fv.position);
    if (p < 4) inst.context[p] = fv.value;
  }
  return inst;
}

SparseExample Dataset::encode(const RawInstance& inst) const {
  SparseExample ex;
  const auto features = extract_features(inst);
  for (std::size_t f = 0; f < kNumFeatures; ++f) ex.attrs[f] = index_.find(features[f]);
  std::sort(ex.attrs.begin(), ex.attrs.end());
  const auto it = std::find(senses_.begin(), senses_.end(), inst.sense_label);
  ex.label = it == senses_.end() ? 0 : static_cast<SenseId>(it - senses_.begin());
  return ex;
}

}  // namespace lazyboost
