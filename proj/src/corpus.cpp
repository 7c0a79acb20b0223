#include "interact/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <iterator>

#include "json.hpp"

#include "interact/common.hpp"

namespace interact {

using nlohmann::json;

namespace {

// Ids may arrive as JSON strings or as integers (raw platform exports).
std::optional<std::string> id_string(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_unsigned()) return std::to_string(value.get<std::uint64_t>());
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  return std::nullopt;
}

std::optional<InteractionRecord> parse_line(std::string_view line, std::string& reason) {
  json object = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (object.is_discarded()) {
    reason = "malformed JSON";
    return std::nullopt;
  }
  if (!object.is_object()) {
    reason = "line is not a JSON object";
    return std::nullopt;
  }
  for (const char* key : {"record_id", "author_id", "text", "mentions"}) {
    if (!object.contains(key)) {
      reason = std::string("missing key '") + key + "'";
      return std::nullopt;
    }
  }
  InteractionRecord record;
  auto record_id = id_string(object["record_id"]);
  auto author_id = id_string(object["author_id"]);
  if (!record_id || record_id->empty()) {
    reason = "record_id must be a non-empty string or integer";
    return std::nullopt;
  }
  if (!author_id || author_id->empty()) {
    reason = "author_id must be a non-empty string or integer";
    return std::nullopt;
  }
  if (!object["text"].is_string()) {
    reason = "text must be a string";
    return std::nullopt;
  }
  if (!object["mentions"].is_array()) {
    reason = "mentions must be an array";
    return std::nullopt;
  }
  record.record_id = std::move(*record_id);
  record.author_id = std::move(*author_id);
  record.text = object["text"].get<std::string>();
  for (const json& mention : object["mentions"]) {
    auto id = id_string(mention);
    if (!id || id->empty()) {
      reason = "mentions must hold non-empty user ids";
      return std::nullopt;
    }
    if (*id != record.author_id) record.mentions.push_back(std::move(*id));
  }
  if (object.contains("timestamp") && !object["timestamp"].is_null()) {
    if (!object["timestamp"].is_string()) {
      reason = "timestamp must be a string";
      return std::nullopt;
    }
    record.timestamp = object["timestamp"].get<std::string>();
  }
  return record;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char ch) { return ch == ' ' || ch == '\t' || ch == '\r'; });
}

}  // namespace

ParseResult parse_records(std::string_view jsonl) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    lines.push_back(jsonl.substr(start, end - start));
    start = end + 1;
  }

  std::vector<std::optional<InteractionRecord>> parsed(lines.size());
  std::vector<std::string> reasons(lines.size());
  std::vector<char> blank(lines.size(), 0);
  const auto count = static_cast<std::int64_t>(lines.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    if (is_blank(lines[i])) {
      blank[i] = 1;
      continue;
    }
    parsed[i] = parse_line(lines[i], reasons[i]);
  }

  ParseResult result;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank[i]) {
      ++result.blank_lines;
    } else if (parsed[i]) {
      result.records.push_back(std::move(*parsed[i]));
    } else {
      result.failures.push_back({i + 1, std::move(reasons[i])});
    }
  }
  if (result.records.empty()) {
    throw EmptyInputError("no valid records in input (" + std::to_string(result.failures.size()) +
                          " malformed lines)");
  }
  return result;
}

ParseResult parse_records(std::istream& in) {
  if (!in) throw IoError("input stream is not readable");
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error while reading input stream");
  return parse_records(std::string_view(content));
}

std::string to_json_line(const InteractionRecord& record) {
  json object = {{"record_id", record.record_id},
                 {"author_id", record.author_id},
                 {"text", record.text},
                 {"mentions", record.mentions}};
  if (record.timestamp) object["timestamp"] = *record.timestamp;
  return object.dump();
}

std::int32_t Interner::intern(std::string_view key) {
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  const auto index = static_cast<std::int32_t>(keys_.size());
  keys_.emplace_back(key);
  index_.emplace(keys_.back(), index);
  return index;
}

std::optional<std::int32_t> Interner::find(std::string_view key) const {
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  return std::nullopt;
}

void Corpus::check_invariants() const {
  const auto words = static_cast<std::int32_t>(num_words());
  const auto user_count = static_cast<std::int32_t>(num_users());
  std::size_t total = 0;
  for (const TokenizedDoc& doc : docs) {
    if (doc.author < 0 || doc.author >= user_count) throw InternalFault("doc author out of range");
    for (std::int32_t w : doc.tokens) {
      if (w < 0 || w >= words) throw InternalFault("token index out of range");
    }
    for (std::int32_t x : doc.mentions) {
      if (x < 0 || x >= user_count) throw InternalFault("mention index out of range");
    }
    total += doc.tokens.size();
  }
  if (total != num_tokens) throw InternalFault("num_tokens does not match the docs");
}

const StopwordSet& default_stopwords() {
  static const StopwordSet words = {
      "a",       "about",   "above",  "after",   "again",   "against", "all",     "am",
      "an",      "and",     "any",    "are",     "as",      "at",      "be",      "because",
      "been",    "before",  "being",  "below",   "between", "both",    "but",     "by",
      "can",     "cant",    "could",  "did",     "didnt",   "do",      "does",    "doesnt",
      "doing",   "dont",    "down",   "during",  "each",    "few",     "for",     "from",
      "further", "had",     "has",    "have",    "having",  "he",      "her",     "here",
      "hers",    "herself", "him",    "himself", "his",     "how",     "i",       "if",
      "im",      "in",      "into",   "is",      "isnt",    "it",      "its",     "itself",
      "just",    "me",      "more",   "most",    "my",      "myself",  "no",      "nor",
      "not",     "now",     "of",     "off",     "on",      "once",    "only",    "or",
      "other",   "our",     "ours",   "out",     "over",    "own",     "same",    "she",
      "should",  "so",      "some",   "such",    "than",    "that",    "thats",   "the",
      "their",   "theirs",  "them",   "then",    "there",   "these",   "they",    "this",
      "those",   "through", "to",     "too",     "under",   "until",   "up",      "very",
      "via",     "was",     "wasnt",  "we",      "were",    "what",    "when",    "where",
      "which",   "while",   "who",    "whom",    "why",     "will",    "with",    "wont",
      "would",   "you",     "your",   "youre",   "yours",   "yourself", "amp",
  };
  return words;
}

namespace {

bool is_word_byte(unsigned char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
         ch == '_';
}

bool is_url(std::string_view chunk) {
  auto starts = [&](std::string_view prefix) {
    if (chunk.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(chunk[i])) != prefix[i]) return false;
    }
    return true;
  };
  return starts("http://") || starts("https://") || starts("www.") ||
         chunk.find("://") != std::string_view::npos;
}

bool all_digits(std::string_view word) {
  return std::all_of(word.begin(), word.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && current != "rt" && !all_digits(current) && !stopwords.contains(current)) {
      tokens.push_back(current);
    }
    current.clear();
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    // Whitespace-delimited chunk first: URLs and @handles are removed whole.
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    const std::string_view chunk = text.substr(pos, end - pos);
    pos = end;
    if (chunk.empty() || chunk.front() == '@' || is_url(chunk)) continue;

    for (std::size_t i = 0; i < chunk.size(); ++i) {
      const auto ch = static_cast<unsigned char>(chunk[i]);
      if (ch == '\'') continue;
      // U+2019 RIGHT SINGLE QUOTATION MARK is an apostrophe too.
      if (ch == 0xE2 && i + 2 < chunk.size() && static_cast<unsigned char>(chunk[i + 1]) == 0x80 &&
          static_cast<unsigned char>(chunk[i + 2]) == 0x99) {
        i += 2;
        continue;
      }
      if (is_word_byte(ch)) {
        current.push_back(static_cast<char>(std::tolower(ch)));
      } else {
        flush();
      }
    }
    flush();
  }
  return tokens;
}

Corpus build_corpus(std::span<const InteractionRecord> records, const StopwordSet& stopwords,
                    int min_word_count, BuildStats* stats) {
  if (min_word_count < 1) throw ValidationError("min_word_count must be >= 1");

  std::vector<std::vector<std::string>> tokenized(records.size());
  const auto count = static_cast<std::int64_t>(records.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) tokenized[i] = tokenize(records[i].text, stopwords);

  // First-occurrence order for surviving words keeps the vocabulary stable.
  std::unordered_map<std::string_view, std::int64_t> frequency;
  for (const auto& tokens : tokenized) {
    for (const std::string& token : tokens) ++frequency[token];
  }

  Corpus corpus;
  for (const InteractionRecord& record : records) {
    corpus.users.intern(record.author_id);
    for (const std::string& mention : record.mentions) corpus.users.intern(mention);
  }

  std::size_t dropped = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    TokenizedDoc doc;
    for (const std::string& token : tokenized[i]) {
      if (frequency[token] >= min_word_count) doc.tokens.push_back(corpus.vocabulary.intern(token));
    }
    if (doc.tokens.empty()) {
      ++dropped;
      continue;
    }
    const InteractionRecord& record = records[i];
    doc.record_id = record.record_id;
    doc.author = *corpus.users.find(record.author_id);
    for (const std::string& mention : record.mentions) {
      if (mention != record.author_id) doc.mentions.push_back(*corpus.users.find(mention));
    }
    corpus.num_tokens += doc.tokens.size();
    corpus.docs.push_back(std::move(doc));
  }

  if (stats) {
    stats->records = records.size();
    stats->docs_dropped = dropped;
  }
  if (corpus.docs.empty()) throw EmptyInputError("every record was dropped: no in-vocabulary words remain");
  return corpus;
}

std::vector<WordFrequency> top_word_frequencies(const Corpus& corpus, std::size_t n) {
  if (n < 1) throw ValidationError("n must be >= 1");
  std::vector<std::int64_t> counts(corpus.num_words(), 0);
  for (const TokenizedDoc& doc : corpus.docs) {
    for (std::int32_t w : doc.tokens) ++counts[static_cast<std::size_t>(w)];
  }
  std::vector<std::int32_t> order(counts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return corpus.vocabulary.at(a) < corpus.vocabulary.at(b);
  });
  order.resize(std::min(n, order.size()));

  std::vector<WordFrequency> result;
  std::int64_t running = 0;
  const double total = static_cast<double>(corpus.num_tokens);
  for (std::int32_t w : order) {
    running += counts[w];
    result.push_back({corpus.vocabulary.at(w), counts[w], static_cast<double>(running) / total});
  }
  return result;
}

}  // namespace interact
