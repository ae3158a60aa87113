#include <set>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "lazyboost/dataset.hpp"

using namespace lazyboost;
using testing::inst;

TEST_CASE("parse_corpus reads one record per line") {
  std::istringstream in("line\tn\tline%1:04:01\tin the _NIL_ _NIL_\n");
  const auto records = parse_corpus(in);
  REQUIRE(records.size() == 1);
  CHECK(records[0].target_word == "line");
  CHECK(records[0].pos_tag == "n");
  CHECK(records[0].sense_label == "line%1:04:01");
  CHECK(records[0].context == std::array<std::string, 4>{"in", "the", "_NIL_", "_NIL_"});
}

TEST_CASE("parse_corpus: empty input, comments, blank lines and CRLF") {
  std::istringstream empty("");
  CHECK(parse_corpus(empty).empty());

  std::istringstream in("# header\n\nage\tn\tage%1\ta b c d\r\n");
  const auto records = parse_corpus(in);
  REQUIRE(records.size() == 1);
  CHECK(records[0].context[3] == "d");
}

TEST_CASE("parse_corpus reports the offending line") {
  std::istringstream three("line\tn\tline%1:04:01\tin the _NIL_ _NIL_\nline\tn\tline%2\n");
  try {
    parse_corpus(three);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream short_context("line\tn\tline%1\tin the _NIL_\n");
  CHECK_THROWS_AS(parse_corpus(short_context), ParseError);
  std::istringstream empty_sense("line\tn\t\ta b c d\n");
  CHECK_THROWS_AS(parse_corpus(empty_sense), ParseError);
}

TEST_CASE("write_corpus round-trips through parse_corpus") {
  const std::vector<RawInstance> records{inst("line%1", {"a", "b", "c", "d"}),
                                         inst("line%2", {"_NIL_", "x", "y", "_NIL_"})};
  std::ostringstream out;
  write_corpus(out, records);
  std::istringstream in(out.str());
  CHECK(parse_corpus(in) == records);
}

TEST_CASE("extract_features produces the seven positional features") {
  const auto f = extract_features(inst("s", {"a", "b", "c", "d"}));
  CHECK(f[0] == FeatureValue{FeaturePosition::kPrev2, "a"});
  CHECK(f[1] == FeatureValue{FeaturePosition::kPrev1, "b"});
  CHECK(f[2] == FeatureValue{FeaturePosition::kNext1, "c"});
  CHECK(f[3] == FeatureValue{FeaturePosition::kNext2, "d"});
  CHECK(f[4] == FeatureValue{FeaturePosition::kPairPrev, std::string("a") + kPairSeparator + "b"});
  CHECK(f[5] == FeatureValue{FeaturePosition::kPairAround, std::string("b") + kPairSeparator + "c"});
  CHECK(f[6] == FeatureValue{FeaturePosition::kPairNext, std::string("c") + kPairSeparator + "d"});

  const std::string nil(kSentinel);
  for (const auto& fv : extract_features(inst("s", {nil, nil, nil, nil}))) {
    CHECK(fv.value.find(nil) != std::string::npos);
  }
  CHECK(extract_features(inst("s", {"a", "b", "c", "d"})) == extract_features(inst("t", {"a", "b", "c", "d"})));
}

TEST_CASE("position names round-trip") {
  for (int p = 0; p < 7; ++p) {
    const auto pos = static_cast<FeaturePosition>(p);
    CHECK(position_from_name(position_name(pos)) == pos);
  }
  CHECK_THROWS(position_from_name("w+3"));
}

TEST_CASE("build_dataset: disjoint contexts give fourteen singleton attributes") {
  const std::vector<RawInstance> records{inst("s1", {"a", "b", "c", "d"}), inst("s2", {"e", "f", "g", "h"})};
  const auto ds = build_dataset(records);
  CHECK(ds.num_attributes() == 14);
  for (AttrId a = 0; a < 14; ++a) CHECK(ds.index().global_count(a) == 1);
  CHECK(ds.num_senses() == 2);
}

TEST_CASE("build_dataset: identical contexts share every attribute") {
  const std::vector<RawInstance> records{inst("s1", {"a", "b", "c", "d"}), inst("s1", {"a", "b", "c", "d"})};
  const auto ds = build_dataset(records);
  CHECK(ds.num_attributes() == 7);
  for (AttrId a = 0; a < 7; ++a) CHECK(ds.index().global_count(a) == 2);
}

TEST_CASE("build_dataset: ids follow first occurrence and counts are consistent") {
  std::mt19937_64 rng(11);
  const auto records = testing::random_corpus(rng, 60, 4, 5);
  const auto ds = build_dataset(records);

  CHECK(ds.senses()[0] == records[0].sense_label);
  CHECK(ds.index().value(0) == extract_features(records[0])[0]);

  std::size_t total = 0;
  for (AttrId a = 0; a < ds.num_attributes(); ++a) {
    CHECK(ds.index().find(ds.index().value(a)) == a);
    std::uint32_t by_sense = 0;
    for (SenseId s = 0; s < ds.num_senses(); ++s) by_sense += ds.index().sense_count(a, s);
    CHECK(by_sense == ds.index().global_count(a));
    CHECK(ds.index().postings(a).size() == ds.index().global_count(a));
    total += ds.index().global_count(a);
  }
  CHECK(total == 7 * ds.size());

  std::set<SenseId> seen;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& ex = ds.example(i);
    CHECK(std::is_sorted(ex.attrs.begin(), ex.attrs.end()));
    for (AttrId a : ex.attrs) CHECK(a < ds.num_attributes());
    CHECK(ex.label < ds.num_senses());
    seen.insert(ex.label);
    CHECK(ds.instance(i) == records[i]);
  }
  CHECK(seen.size() == ds.num_senses());
}

TEST_CASE("build_dataset rejects empty and mixed input") {
  CHECK_THROWS_AS(build_dataset(std::vector<RawInstance>{}), DatasetError);
  const std::vector<RawInstance> mixed{inst("s", {"a", "b", "c", "d"}, "line"),
                                       inst("s", {"a", "b", "c", "d"}, "age")};
  CHECK_THROWS_AS(build_dataset(mixed), DatasetError);
}

TEST_CASE("group_by_word keeps first-appearance order") {
  const std::vector<RawInstance> records{inst("s", {"a", "b", "c", "d"}, "line"),
                                         inst("s", {"a", "b", "c", "d"}, "age"),
                                         inst("t", {"a", "b", "c", "d"}, "line")};
  const auto groups = group_by_word(records);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].size() == 2);
  CHECK(groups[0][0].target_word == "line");
  CHECK(groups[1][0].target_word == "age");
}

TEST_CASE("subset keeps ids and recounts") {
  std::mt19937_64 rng(5);
  const auto ds = build_dataset(testing::random_corpus(rng, 40, 3, 4));
  const std::vector<std::uint32_t> pick{0, 3, 7, 8, 20};
  const auto sub = ds.subset(pick);
  CHECK(sub.size() == pick.size());
  CHECK(sub.num_attributes() == ds.num_attributes());
  CHECK(sub.num_senses() == ds.num_senses());
  std::size_t total = 0;
  for (AttrId a = 0; a < sub.num_attributes(); ++a) total += sub.index().global_count(a);
  CHECK(total == 7 * pick.size());
  for (std::size_t i = 0; i < pick.size(); ++i) {
    CHECK(sub.example(i).attrs == ds.example(pick[i]).attrs);
    CHECK(sub.example(i).label == ds.example(pick[i]).label);
  }
}

TEST_CASE("encode maps unseen predicates to the unknown id") {
  const std::vector<RawInstance> records{inst("s1", {"a", "b", "c", "d"}), inst("s2", {"e", "f", "g", "h"})};
  const auto ds = build_dataset(records);
  const auto ex = ds.encode(inst("s2", {"a", "b", "x", "y"}));
  CHECK(ex.label == 1);
  std::size_t unknown = 0;
  for (AttrId a : ex.attrs) unknown += a == kUnknownAttr;
  CHECK(unknown == 4);  // x, y, (b,x), (x,y)
  CHECK(hamming_distance(ex, ds.example(0)) == 4);
  CHECK(hamming_distance(ex, ds.example(1)) == 7);
  CHECK(hamming_distance(ds.example(0), ds.example(0)) == 0);
}
