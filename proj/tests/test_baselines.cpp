#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "lazyboost/baselines.hpp"
#include "oracles.hpp"

using namespace lazyboost;
using testing::inst;

TEST_CASE("MFS picks the majority, lowest id on ties") {
  std::vector<RawInstance> records;
  for (int i = 0; i < 10; ++i) records.push_back(inst("a", {"x", "x", "x", "x"}));
  for (int i = 0; i < 5; ++i) records.push_back(inst("b", {"x", "x", "x", "x"}));
  CHECK(train_mfs(build_dataset(records)).majority() == 0);
  records.resize(5);
  for (int i = 0; i < 5; ++i) records.push_back(inst("b", {"x", "x", "x", "x"}));
  CHECK(train_mfs(build_dataset(records)).majority() == 0);
  records.erase(records.begin());
  CHECK(train_mfs(build_dataset(records)).majority() == 1);
}

TEST_CASE("Naive Bayes estimates") {
  const auto single = build_dataset(std::vector<RawInstance>{inst("a", {"p", "q", "r", "s"})});
  const auto nb1 = train_nb(single);
  CHECK(nb1.priors()[0] == 1.0);
  CHECK(nb1.classify(single.encode(inst("a", {"z", "z", "z", "z"}))) == 0);

  std::mt19937_64 rng(6);
  const auto ds = build_dataset(testing::random_corpus(rng, 40, 3, 5));
  const auto nb = train_nb(ds);
  CHECK(std::accumulate(nb.priors().begin(), nb.priors().end(), 0.0) == doctest::Approx(1.0));
  for (AttrId a = 0; a < ds.num_attributes(); ++a) {
    for (SenseId s = 0; s < ds.num_senses(); ++s) {
      CHECK(nb.cond(a, s) > 0.0);
      CHECK(nb.cond(a, s) <= 1.0);
    }
  }
}

TEST_CASE("Naive Bayes: attribute present in every example of a sense has conditional 1") {
  const auto ds = build_dataset(std::vector<RawInstance>{inst("a", {"k", "b", "c", "d"}),
                                                         inst("a", {"k", "f", "g", "h"}),
                                                         inst("b", {"m", "n", "o", "p"})});
  const auto nb = train_nb(ds);
  CHECK(nb.cond(ds.index().find({FeaturePosition::kPrev2, "k"}), 0) == 1.0);
}

TEST_CASE("Naive Bayes zero-count fallback is prior / m") {
  // m = 100, two balanced senses, an attribute that never occurs with sense 1.
  std::vector<RawInstance> records;
  for (int i = 0; i < 50; ++i) records.push_back(inst("a", {"k", "x" + std::to_string(i), "c", "d"}));
  for (int i = 0; i < 50; ++i) records.push_back(inst("b", {"m", "y" + std::to_string(i), "c", "d"}));
  const auto ds = build_dataset(records);
  const auto nb = train_nb(ds);
  const AttrId k = ds.index().find({FeaturePosition::kPrev2, "k"});
  CHECK(nb.cond(k, 1) == doctest::Approx(0.005));

  const auto fixed = train_nb(ds, NbOptions{0.125});
  CHECK(fixed.cond(k, 1) == 0.125);
}

TEST_CASE("Naive Bayes: no discriminating evidence falls back to the majority") {
  const auto ds = build_dataset(std::vector<RawInstance>{inst("a", {"p", "q", "r", "s"}),
                                                         inst("b", {"p", "q", "r", "s"}),
                                                         inst("b", {"p", "q", "r", "s"}),
                                                         inst("a", {"p", "q", "r", "s"})});
  const auto nb = train_nb(ds);
  CHECK(nb.classify(ds.example(0)) == 0);
  CHECK(nb.classify(ds.encode(inst("a", {"new", "new", "new", "new"}))) == 0);
}

TEST_CASE("Naive Bayes agrees with the exact rational posterior") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 8 + rng() % 23;
    const std::size_t k = 2 + rng() % 3;
    auto records = testing::random_corpus(rng, m, k, 2);
    const auto ds = build_dataset(records);
    REQUIRE(ds.num_attributes() <= 20);
    const auto nb = train_nb(ds);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      CHECK(nb.classify(ds.example(i)) == oracle::naive_bayes(ds, records[i]));
    }
  }
}

TEST_CASE("k-NN basics") {
  const auto ds = build_dataset(std::vector<RawInstance>{inst("a", {"p", "q", "r", "s"}),
                                                         inst("b", {"t", "u", "v", "w"}),
                                                         inst("b", {"p", "u", "v", "w"})});
  const auto one = train_knn(ds, 1);
  for (std::size_t i = 0; i < ds.size(); ++i) CHECK(one.classify(ds.example(i)) == ds.example(i).label);
  CHECK(one.neighbours(ds.example(0)) == std::vector<std::uint32_t>{0});
  const auto votes = train_knn(ds, 3).votes(ds.example(0));
  CHECK(votes[0] == 7.0);
  CHECK(votes[1] == 0.0 + 1.0);  // example 1 shares nothing, example 2 shares w-2
  CHECK_THROWS_AS(train_knn(ds, 4), std::invalid_argument);
  CHECK_THROWS_AS(train_knn(ds, 0), std::invalid_argument);
}

TEST_CASE("k-NN agrees with a brute-force scan") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 20 + rng() % 181;
    const std::size_t k = 2 + rng() % 4;
    const auto records = testing::random_corpus(rng, m, k, 3 + rng() % 4);
    const auto ds = build_dataset(std::span(records).first(m - 5));
    const std::size_t kk = 1 + rng() % 15;
    const auto model = train_knn(ds, kk);
    for (const auto& r : records) CHECK(model.classify(ds.encode(r)) == oracle::knn(ds, r, kk));
  }
}
