#pragma once

#include <random>
#include <string>
#include <vector>

#include "lazyboost/dataset.hpp"

namespace testing {

inline lazyboost::RawInstance inst(const std::string& sense, std::array<std::string, 4> context,
                                   const std::string& word = "line", const std::string& pos = "n") {
  return {word, pos, sense, std::move(context)};
}

/// Small random corpus over a tiny vocabulary, so attributes recur and the
/// total attribute count stays low.
inline std::vector<lazyboost::RawInstance> random_corpus(std::mt19937_64& rng, std::size_t m, std::size_t senses,
                                                         std::size_t vocab) {
  std::uniform_int_distribution<std::size_t> tok(0, vocab - 1);
  std::uniform_int_distribution<std::size_t> lab(0, senses - 1);
  std::vector<lazyboost::RawInstance> out;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t s = i < senses ? i : lab(rng);
    lazyboost::RawInstance r{"w", "n", "s" + std::to_string(s), {}};
    for (std::size_t p = 0; p < 4; ++p) {
      // Tokens lean toward the sense so learners have something to find.
      const std::size_t t = (tok(rng) + (rng() % 2 ? s : 0)) % vocab;
      r.context[p] = "t" + std::to_string(t);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace testing
