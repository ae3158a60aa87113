#include "lazyboost/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lazyboost {

namespace {

std::discrete_distribution<std::size_t> zipf(std::size_t n, double exponent) {
  std::vector<double> w(n);
  for (std::size_t r = 0; r < n; ++r) w[r] = 1.0 / std::pow(static_cast<double>(r + 1), exponent);
  return {w.begin(), w.end()};
}

std::string cue_token(std::size_t slot, std::size_t sense, std::size_t rank) {
  return "c" + std::to_string(slot) + "s" + std::to_string(sense) + "_" + std::to_string(rank);
}

std::string background_token(std::size_t slot, std::size_t rank) {
  return "b" + std::to_string(slot) + "_" + std::to_string(rank);
}

}  // namespace

std::vector<RawInstance> generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  const std::size_t k = spec.senses;
  if (k < 2) throw std::invalid_argument("synthetic corpus needs at least 2 senses");
  if (spec.examples < k) throw std::invalid_argument("synthetic corpus needs at least one example per sense");
  if (spec.vocab == 0) throw std::invalid_argument("synthetic vocab must be positive");
  if (spec.shared_vocab == 0 && spec.background > 0) throw std::invalid_argument("background tokens need a background vocabulary");
  if (spec.phrase_rate > 0 && spec.phrases == 0) {
    throw std::invalid_argument("phrases need a phrase inventory");
  }
  for (double p : {spec.skew, spec.noise, spec.label_noise, spec.background, spec.phrase_rate, spec.boundary}) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("synthetic rates must lie in [0, 1]");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> prior(k);
  if (spec.skew > 0) {
    prior[0] = spec.skew;
    for (std::size_t s = 1; s < k; ++s) prior[s] = (1.0 - spec.skew) / static_cast<double>(k - 1);
  } else {
    for (std::size_t s = 0; s < k; ++s) prior[s] = 1.0 / std::pow(static_cast<double>(s + 1), spec.sense_zipf);
  }
  std::discrete_distribution<std::size_t> draw_sense(prior.begin(), prior.end());

  std::vector<std::size_t> labels(spec.examples);
  for (std::size_t i = 0; i < spec.examples; ++i) labels[i] = i < k ? i : draw_sense(rng);
  std::shuffle(labels.begin(), labels.end(), rng);

  auto draw_cue = zipf(spec.vocab, spec.token_zipf);
  auto draw_background = zipf(std::max<std::size_t>(spec.shared_vocab, 1), spec.token_zipf);
  auto draw_phrase = zipf(std::max<std::size_t>(spec.phrases, 1), spec.token_zipf);
  std::uniform_int_distribution<std::size_t> other_sense(0, k - 2);

  // Phrase j of each side belongs to sense j mod k and is built from that
  // sense's cue words, so a phrase fires both single-word features and their
  // collocation together.
  std::array<std::vector<std::array<std::string, 2>>, 2> phrase_book;
  for (std::size_t side = 0; side < 2; ++side) {
    for (std::size_t j = 0; j < spec.phrases; ++j) {
      const std::size_t inner = side == 0 ? 1 : 2;
      const std::size_t outer = side == 0 ? 0 : 3;
      if (spec.collocations) {
        phrase_book[side].push_back({background_token(outer, draw_background(rng)), background_token(inner, draw_background(rng))});
      } else {
        phrase_book[side].push_back({cue_token(outer, j % k, draw_cue(rng)), cue_token(inner, j % k, draw_cue(rng))});
      }
    }
  }
  std::vector<std::vector<std::size_t>> phrases_of(k);
  for (std::size_t j = 0; j < spec.phrases; ++j) phrases_of[j % k].push_back(j);

  std::vector<std::size_t> remaining(k, 0);
  for (auto s : labels) ++remaining[s];

  std::vector<RawInstance> out;
  out.reserve(spec.examples);
  for (std::size_t i = 0; i < spec.examples; ++i) {
    const std::size_t sense = labels[i];
    RawInstance inst;
    inst.target_word = spec.word;
    inst.pos_tag = spec.pos;
    inst.sense_label = spec.word + "%" + std::to_string(sense);

    for (std::size_t slot = 0; slot < 4; ++slot) {
      if (spec.background > 0 && unit(rng) < spec.background) {
        inst.context[slot] = background_token(slot, draw_background(rng));
        continue;
      }
      std::size_t owner = sense;
      if (spec.noise > 0 && unit(rng) < spec.noise) {
        owner = other_sense(rng);
        if (owner >= sense) ++owner;
      }
      inst.context[slot] = cue_token(slot, owner, draw_cue(rng));
    }

    for (std::size_t side = 0; side < 2; ++side) {
      if (spec.phrase_rate > 0 && unit(rng) < spec.phrase_rate) {
        std::size_t j = draw_phrase(rng);
        const auto& own = phrases_of[sense];
        if (!own.empty() && !(spec.noise > 0 && unit(rng) < spec.noise)) {
          j = own[j % own.size()];
        }
        const auto& phrase = phrase_book[side][j];
        if (side == 0) {
          inst.context[0] = phrase[0];
          inst.context[1] = phrase[1];
        } else {
          inst.context[3] = phrase[0];
          inst.context[2] = phrase[1];
        }
      }
      if (spec.boundary > 0 && unit(rng) < spec.boundary) {
        inst.context[side == 0 ? 0 : 3] = std::string(kSentinel);
      }
    }
    // A sense's last example is never relabelled, so every sense survives.
    if (spec.label_noise > 0 && unit(rng) < spec.label_noise && remaining[sense] > 1) {
      std::size_t flipped = other_sense(rng);
      if (flipped >= sense) ++flipped;
      --remaining[sense];
      ++remaining[flipped];
      inst.sense_label = spec.word + "%" + std::to_string(flipped);
    }
    out.push_back(std::move(inst));
  }
  return out;
}

namespace {

std::string apply_synthetic_key(SyntheticSpec& spec, const std::string& key, const std::string& value);

}  // namespace

SyntheticSpec parse_synthetic_spec(const std::string& text, SyntheticSpec spec) {
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    if (!apply_synthetic_key(spec, key, item.substr(eq + 1)).empty()) {
      throw std::invalid_argument("unknown synthetic spec key '" + key + "'");
    }
  }
  return spec;
}

SuiteSpec benchmark_suite() {
  SuiteSpec suite;
  suite.words = 15;
  suite.verbs = 5;
  suite.senses = {4, 30};
  suite.examples = {900, 1099};
  suite.noise = {0.1, 0.3};
  suite.shape.word = "word";
  suite.shape.pos = "n";
  suite.shape.vocab = 4;
  suite.shape.shared_vocab = 500;
  suite.shape.background = 0.6;
  suite.shape.sense_zipf = 1.0;
  suite.shape.token_zipf = 1.2;
  return suite;
}

std::vector<RawInstance> generate_suite(const SuiteSpec& spec, std::uint64_t seed) {
  if (spec.words == 0) throw std::invalid_argument("a suite needs at least one word");
  if (spec.verbs > spec.words) throw std::invalid_argument("more verbs than words");
  if (spec.senses.first > spec.senses.second || spec.examples.first > spec.examples.second ||
      !(spec.noise.first <= spec.noise.second)) {
    throw std::invalid_argument("empty range in suite spec");
  }
  std::vector<RawInstance> out;
  for (std::size_t w = 0; w < spec.words; ++w) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(w)};
    std::mt19937_64 rng(seq);
    SyntheticSpec word = spec.shape;
    word.senses = std::uniform_int_distribution<std::size_t>(spec.senses.first, spec.senses.second)(rng);
    word.examples = std::uniform_int_distribution<std::size_t>(spec.examples.first, spec.examples.second)(rng);
    word.noise = spec.noise.first == spec.noise.second
                     ? spec.noise.first
                     : std::uniform_real_distribution<double>(spec.noise.first, spec.noise.second)(rng);
    if (spec.words > 1) {
      char suffix[8];
      std::snprintf(suffix, sizeof suffix, "%02zu", w);
      word.word += suffix;
    }
    if (w >= spec.words - spec.verbs) word.pos = "v";
    auto instances = generate_synthetic(word, rng());
    out.insert(out.end(), std::make_move_iterator(instances.begin()), std::make_move_iterator(instances.end()));
  }
  return out;
}

SuiteSpec parse_suite_spec(const std::string& text) {
  SuiteSpec suite;
  std::istringstream in(text);
  std::string item;
  auto size_range = [](const std::string& key, const std::string& value) {
    const auto colon = value.find(':');
    auto one = [&](const std::string& v) {
      std::size_t used = 0;
      const auto n = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument("bad integer for " + key + ": " + value);
      return static_cast<std::size_t>(n);
    };
    if (colon == std::string::npos) return std::pair{one(value), one(value)};
    return std::pair{one(value.substr(0, colon)), one(value.substr(colon + 1))};
  };
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item == "benchmark") {
      suite = benchmark_suite();
      continue;
    }
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "words") {
        suite.words = size_range(key, value).first;
      } else if (key == "verbs") {
        suite.verbs = size_range(key, value).first;
      } else if (key == "senses") {
        suite.senses = size_range(key, value);
      } else if (key == "examples") {
        suite.examples = size_range(key, value);
      } else if (key == "noise") {
        const auto colon = value.find(':');
        auto one = [&](const std::string& v) {
          std::size_t used = 0;
          const double x = std::stod(v, &used);
          if (used != v.size()) throw std::invalid_argument("bad number for noise: " + value);
          return x;
        };
        suite.noise = colon == std::string::npos ? std::pair{one(value), one(value)}
                                                 : std::pair{one(value.substr(0, colon)), one(value.substr(colon + 1))};
      } else if (!apply_synthetic_key(suite.shape, key, value).empty()) {
        throw std::invalid_argument("unknown synthetic spec key '" + key + "'");
      }
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("value out of range for " + key + ": " + value);
    } catch (const std::invalid_argument& e) {
      const std::string what = e.what();
      if (what.rfind("bad ", 0) == 0 || what.rfind("unknown ", 0) == 0) throw;
      throw std::invalid_argument("bad value for " + key + ": " + value);
    }
  }
  return suite;
}

namespace {

/// Sets one field; returns the key back when it is not a SyntheticSpec field.
std::string apply_synthetic_key(SyntheticSpec& spec, const std::string& key, const std::string& value) {
  auto as_size = [&] {
    std::size_t used = 0;
    const auto v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("bad integer for " + key + ": " + value);
    return static_cast<std::size_t>(v);
  };
  auto as_real = [&] {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("bad number for " + key + ": " + value);
    return v;
  };
  try {
    if (key == "word") spec.word = value;
    else if (key == "pos") spec.pos = value;
    else if (key == "senses") spec.senses = as_size();
    else if (key == "examples") spec.examples = as_size();
    else if (key == "vocab") spec.vocab = as_size();
    else if (key == "shared_vocab") spec.shared_vocab = as_size();
    else if (key == "skew") spec.skew = as_real();
    else if (key == "sense_zipf") spec.sense_zipf = as_real();
    else if (key == "noise") spec.noise = as_real();
    else if (key == "label_noise") spec.label_noise = as_real();
    else if (key == "background") spec.background = as_real();
    else if (key == "phrase_rate") spec.phrase_rate = as_real();
    else if (key == "phrases") spec.phrases = as_size();
    else if (key == "boundary") spec.boundary = as_real();
    else if (key == "collocations") spec.collocations = as_size() != 0;
    else if (key == "token_zipf") spec.token_zipf = as_real();
    else return key;
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("value out of range for " + key + ": " + value);
  } catch (const std::invalid_argument& e) {
    if (std::string(e.what()).rfind("bad ", 0) == 0) throw;
    throw std::invalid_argument("bad value for " + key + ": " + value);
  }
  return {};
}

}  // namespace

}  // namespace lazyboost
