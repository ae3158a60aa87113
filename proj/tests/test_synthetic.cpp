#include <map>
#include <set>

#include "doctest.h"
#include "lazyboost/synthetic.hpp"

using namespace lazyboost;

TEST_CASE("generate_synthetic is deterministic per seed") {
  SyntheticSpec spec;
  spec.senses = 4;
  spec.examples = 80;
  spec.noise = 0.2;
  spec.background = 0.3;
  spec.phrase_rate = 0.2;
  spec.phrases = 8;
  CHECK(generate_synthetic(spec, 9) == generate_synthetic(spec, 9));
  CHECK(generate_synthetic(spec, 9) != generate_synthetic(spec, 10));
}

TEST_CASE("every sense occurs, even under heavy label noise") {
  SyntheticSpec spec;
  spec.senses = 12;
  spec.examples = 12;
  spec.label_noise = 1.0;
  const auto records = generate_synthetic(spec, 1);
  std::set<std::string> senses;
  for (const auto& r : records) senses.insert(r.sense_label);
  CHECK(senses.size() == 12);
}

TEST_CASE("noise-free disjoint vocabularies: w-1 identifies the sense") {
  SyntheticSpec spec;
  spec.senses = 3;
  spec.examples = 30;
  const auto records = generate_synthetic(spec, 4);
  std::map<std::string, std::string> owner;
  for (const auto& r : records) {
    auto [it, inserted] = owner.emplace(r.context[1], r.sense_label);
    CHECK(it->second == r.sense_label);
  }
}

TEST_CASE("skewed prior: the majority share matches the skew") {
  SyntheticSpec spec;
  spec.senses = 2;
  spec.examples = 2000;
  spec.skew = 0.9;
  const auto records = generate_synthetic(spec, 3);
  std::map<std::string, int> counts;
  for (const auto& r : records) ++counts[r.sense_label];
  const double share = static_cast<double>(counts[spec.word + "%0"]) / records.size();
  CHECK(share == doctest::Approx(0.9).epsilon(0.03));
}

TEST_CASE("infeasible specs are rejected") {
  SyntheticSpec spec;
  spec.senses = 5;
  spec.examples = 4;
  CHECK_THROWS_AS(generate_synthetic(spec, 1), std::invalid_argument);
  spec.examples = 10;
  spec.senses = 1;
  CHECK_THROWS_AS(generate_synthetic(spec, 1), std::invalid_argument);
  spec.senses = 2;
  spec.noise = 1.5;
  CHECK_THROWS_AS(generate_synthetic(spec, 1), std::invalid_argument);
}

TEST_CASE("parse_synthetic_spec") {
  const auto spec = parse_synthetic_spec("senses=7,examples=70,noise=0.25,word=bank,pos=v");
  CHECK(spec.senses == 7);
  CHECK(spec.examples == 70);
  CHECK(spec.noise == 0.25);
  CHECK(spec.word == "bank");
  CHECK(spec.pos == "v");
  CHECK_THROWS_AS(parse_synthetic_spec("colour=red"), std::invalid_argument);
  CHECK_THROWS_AS(parse_synthetic_spec("senses=x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_synthetic_spec("senses"), std::invalid_argument);
}

TEST_CASE("suites: ranges, naming and part-of-speech mix") {
  const auto suite = parse_suite_spec("benchmark,words=4,verbs=1,examples=50:60,senses=3:5");
  CHECK(suite.words == 4);
  CHECK(suite.shape.vocab == benchmark_suite().shape.vocab);
  const auto records = generate_suite(suite, 2);
  CHECK(records == generate_suite(suite, 2));
  std::map<std::string, std::pair<std::string, int>> words;
  for (const auto& r : records) {
    auto& w = words[r.target_word];
    w.first = r.pos_tag;
    ++w.second;
  }
  REQUIRE(words.size() == 4);
  CHECK(words["word00"].first == "n");
  CHECK(words["word03"].first == "v");
  for (const auto& [name, w] : words) {
    CHECK(w.second >= 50);
    CHECK(w.second <= 60);
  }

  const auto single = parse_suite_spec("senses=3,examples=30,word=bank");
  const auto one = generate_suite(single, 1);
  CHECK(one.size() == 30);
  CHECK(one[0].target_word == "bank");
  CHECK_THROWS_AS(generate_suite(parse_suite_spec("noise=0.3:0.1"), 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_suite_spec("words=two"), std::invalid_argument);
}
