#pragma once

// Shared fixtures and oracles for the unit tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "interact/corpus.hpp"
#include "interact/rng.hpp"
#include "interact/sampler_core.hpp"

namespace testing {

using namespace interact;

struct Post {
  std::string author;
  std::string text;
  std::vector<std::string> mentions = {};
};

inline std::vector<InteractionRecord> records_of(const std::vector<Post>& posts) {
  std::vector<InteractionRecord> records;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    records.push_back({std::to_string(i), posts[i].author, posts[i].text, posts[i].mentions, std::nullopt});
  }
  return records;
}

inline Corpus corpus_of(const std::vector<Post>& posts) {
  return build_corpus(records_of(posts), StopwordSet{});
}

/// Random corpus built directly from indices. Every user authors at least one
/// post when docs >= users; mentions never point at the author.
inline Corpus random_corpus(std::uint64_t seed, int docs, int users, int words, int max_len, int max_mentions = 0) {
  Rng rng(seed);
  Corpus c;
  for (int w = 0; w < words; ++w) c.vocabulary.intern("w" + std::to_string(w));
  for (int u = 0; u < users; ++u) c.users.intern("u" + std::to_string(u));
  for (int m = 0; m < docs; ++m) {
    TokenizedDoc d;
    d.record_id = "d" + std::to_string(m);
    d.author = m < users ? m : static_cast<std::int32_t>(rng.below(users));
    const int len = 1 + static_cast<int>(rng.below(max_len));
    for (int i = 0; i < len; ++i) d.tokens.push_back(static_cast<std::int32_t>(rng.below(words)));
    if (users > 1 && max_mentions > 0) {
      const int nm = static_cast<int>(rng.below(max_mentions + 1));
      for (int j = 0; j < nm; ++j) {
        auto x = static_cast<std::int32_t>(rng.below(users - 1));
        if (x >= d.author) ++x;
        d.mentions.push_back(x);
      }
    }
    c.num_tokens += d.tokens.size();
    c.docs.push_back(std::move(d));
  }
  return c;
}

inline double total_variation(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

/// Greedy matching: repeatedly take the (truth, estimate) pair with the
/// smallest TV among unmatched rows. Returns match[truth_row] = estimate_row.
template <typename RowFn1, typename RowFn2>
std::vector<int> greedy_match(int n, RowFn1 truth_row, RowFn2 est_row) {
  std::vector<std::tuple<double, int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) pairs.emplace_back(total_variation(truth_row(i), est_row(j)), i, j);
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> match(n, -1);
  std::vector<bool> used(n, false);
  for (const auto& [d, i, j] : pairs) {
    if (match[i] < 0 && !used[j]) {
      match[i] = j;
      used[j] = true;
    }
  }
  return match;
}

}  // namespace testing
