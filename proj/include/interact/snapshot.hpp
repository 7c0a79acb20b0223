#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "interact/corpus.hpp"
#include "interact/training.hpp"
#include "json.hpp"

namespace interact {

using Json = nlohmann::json;

inline constexpr std::string_view kCorpusFormat = "interact-corpus/1";
inline constexpr std::string_view kModelFormat = "interact-model/1";

/// Keys are emitted sorted, so equal corpora serialize to equal bytes.
Json corpus_to_json(const Corpus& corpus);
/// Throws ValidationError on a wrong format tag or inconsistent content.
Corpus corpus_from_json(const Json& doc);

struct ModelSnapshot {
  TrainedModel model;
  std::vector<std::string> low_evidence_users;  // CIPM: users without posts
};

/// Counts, labels, metadata and the train trace; CIPM adds the per-post
/// communities. Token topics are written only with `include_topics`.
/// Estimates are recomputed from the counts on load.
Json model_to_json(const ModelSnapshot& snapshot, bool include_topics = false);
ModelSnapshot model_from_json(const Json& doc);

/// Throws IoError naming the path on failure.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Parses a JSON file; throws ValidationError on malformed content.
Json read_json_file(const std::filesystem::path& path);
/// Writes `doc.dump(1)` plus a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& doc);

}  // namespace interact
