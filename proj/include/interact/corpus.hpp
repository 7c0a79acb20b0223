#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace interact {

/// One post: who wrote it, what it says, whom it mentions.
struct InteractionRecord {
  std::string record_id;
  std::string author_id;
  std::string text;
  std::vector<std::string> mentions;  // self-mentions removed; duplicates kept
  std::optional<std::string> timestamp;

  bool operator==(const InteractionRecord&) const = default;
};

struct ParseFailure {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct ParseResult {
  std::vector<InteractionRecord> records;
  std::vector<ParseFailure> failures;
  std::size_t blank_lines = 0;
};

/// Parses JSON-lines records. Malformed lines are collected in `failures`.
/// Throws EmptyInputError when no line yields a record.
ParseResult parse_records(std::string_view jsonl);
/// Throws IoError if the stream cannot be read.
ParseResult parse_records(std::istream& in);

/// Serializes one record as a single JSON line (no trailing newline).
std::string to_json_line(const InteractionRecord& record);

/// Dense bijection between strings and indices 0..size-1, in insertion order.
class Interner {
 public:
  std::int32_t intern(std::string_view key);
  std::optional<std::int32_t> find(std::string_view key) const;
  const std::string& at(std::int32_t index) const { return keys_.at(static_cast<std::size_t>(index)); }
  std::span<const std::string> keys() const { return keys_; }
  std::size_t size() const { return keys_.size(); }

  bool operator==(const Interner& other) const { return keys_ == other.keys_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, std::int32_t, Hash, std::equal_to<>> index_;
  std::vector<std::string> keys_;
};

using Vocabulary = Interner;
using UserTable = Interner;

struct TokenizedDoc {
  std::string record_id;
  std::int32_t author = 0;
  std::vector<std::int32_t> tokens;
  std::vector<std::int32_t> mentions;

  bool operator==(const TokenizedDoc&) const = default;
};

struct Corpus {
  Vocabulary vocabulary;
  UserTable users;
  std::vector<TokenizedDoc> docs;
  std::size_t num_tokens = 0;

  std::size_t num_words() const { return vocabulary.size(); }
  std::size_t num_users() const { return users.size(); }
  std::size_t num_docs() const { return docs.size(); }

  /// Throws InternalFault if an index is out of range or num_tokens is stale.
  void check_invariants() const;

  bool operator==(const Corpus&) const = default;
};

using StopwordSet = std::unordered_set<std::string>;

/// English stopword list used when the caller supplies none.
const StopwordSet& default_stopwords();

/// Lowercases, drops URLs, @mentions, the "rt" marker, standalone numerals
/// and stopwords. Apostrophes are deleted ("here's" -> "heres"); every other
/// punctuation character and every non-ASCII byte separates tokens.
std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords);

struct BuildStats {
  std::size_t records = 0;
  std::size_t docs_dropped = 0;
};

/// Keeps words occurring at least `min_word_count` times overall; docs left
/// without tokens are dropped. Users of every record (authors and mentions)
/// enter the user table in first-seen order. Throws EmptyInputError when
/// every doc is dropped.
Corpus build_corpus(std::span<const InteractionRecord> records, const StopwordSet& stopwords,
                    int min_word_count = 1, BuildStats* stats = nullptr);

struct WordFrequency {
  std::string word;
  std::int64_t count = 0;
  double cumulative_fraction = 0.0;
};

/// Most frequent words, count descending then word ascending.
std::vector<WordFrequency> top_word_frequencies(const Corpus& corpus, std::size_t n);

}  // namespace interact
