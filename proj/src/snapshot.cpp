#include "interact/snapshot.hpp"

#include <fstream>
#include <sstream>

#include "interact/common.hpp"
#include "interact/model.hpp"

namespace interact {

namespace {

template <typename T>
Json matrix_to_json(const Matrix<T>& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(Json(std::vector<T>(row.begin(), row.end())));
  }
  return rows;
}

template <typename T>
Matrix<T> matrix_from_json(const Json& rows, std::size_t expected_cols) {
  Matrix<T> m(rows.size(), expected_cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto values = rows[r].get<std::vector<T>>();
    if (values.size() != expected_cols) throw ValidationError("matrix row has the wrong width");
    std::copy(values.begin(), values.end(), m.row(r).begin());
  }
  return m;
}

void expect_format(const Json& doc, std::string_view format) {
  if (!doc.is_object() || !doc.contains("format") || doc["format"] != format) {
    throw ValidationError("expected a document with format " + std::string(format));
  }
}

std::vector<std::string> keys_of(const Interner& interner) {
  return {interner.keys().begin(), interner.keys().end()};
}

void intern_all(Interner& interner, const std::vector<std::string>& keys, const char* what) {
  for (const auto& key : keys) {
    if (static_cast<std::size_t>(interner.intern(key)) + 1 != interner.size()) {
      throw ValidationError(std::string("duplicate entry in ") + what + ": " + key);
    }
  }
}

Json hyperparams_json(const Hyperparams& hp) {
  return {{"alpha", hp.alpha},          {"beta", hp.beta},          {"gamma", hp.gamma},
          {"delta", hp.delta},          {"num_topics", hp.num_topics}, {"num_communities", hp.num_communities}};
}

Hyperparams hyperparams_from(const Json& j) {
  Hyperparams hp;
  hp.alpha = j.at("alpha").get<double>();
  hp.beta = j.at("beta").get<double>();
  hp.gamma = j.at("gamma").get<double>();
  hp.delta = j.at("delta").get<double>();
  hp.num_topics = j.at("num_topics").get<int>();
  hp.num_communities = j.at("num_communities").get<int>();
  hp.validate();
  return hp;
}

}  // namespace

Json corpus_to_json(const Corpus& corpus) {
  Json docs = Json::array();
  for (const auto& doc : corpus.docs) {
    docs.push_back({{"id", doc.record_id}, {"author", doc.author}, {"tokens", doc.tokens}, {"mentions", doc.mentions}});
  }
  return {{"format", kCorpusFormat},
          {"vocabulary", keys_of(corpus.vocabulary)},
          {"users", keys_of(corpus.users)},
          {"num_tokens", corpus.num_tokens},
          {"docs", std::move(docs)}};
}

Corpus corpus_from_json(const Json& doc) {
  expect_format(doc, kCorpusFormat);
  try {
    Corpus corpus;
    intern_all(corpus.vocabulary, doc.at("vocabulary").get<std::vector<std::string>>(), "vocabulary");
    intern_all(corpus.users, doc.at("users").get<std::vector<std::string>>(), "users");
    for (const auto& d : doc.at("docs")) {
      TokenizedDoc td;
      td.record_id = d.at("id").get<std::string>();
      td.author = d.at("author").get<std::int32_t>();
      td.tokens = d.at("tokens").get<std::vector<std::int32_t>>();
      td.mentions = d.at("mentions").get<std::vector<std::int32_t>>();
      corpus.docs.push_back(std::move(td));
    }
    corpus.num_tokens = doc.at("num_tokens").get<std::size_t>();
    corpus.check_invariants();
    return corpus;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed corpus snapshot: ") + e.what());
  } catch (const InternalFault& e) {
    throw ValidationError(std::string("inconsistent corpus snapshot: ") + e.what());
  }
}

Json model_to_json(const ModelSnapshot& snapshot, bool include_topics) {
  const TrainedModel& m = snapshot.model;
  const EstimateMetadata& meta = m.estimate.meta;
  Json counts = {{"topic_word", matrix_to_json(m.counts.topic_word_matrix())},
                 {"actor_topic", matrix_to_json(m.counts.actor_topic_matrix())}};
  if (m.counts.has_communities()) {
    counts["user_community"] = matrix_to_json(m.counts.user_community_matrix());
    counts["community_user"] = matrix_to_json(m.counts.community_user_matrix());
  }
  Json trace = Json::array();
  for (const auto& p : m.trace) trace.push_back({{"sweep", p.sweep}, {"perplexity", p.perplexity}});
  Json doc = {{"format", kModelFormat},
              {"model", to_string(meta.kind)},
              {"hyperparams", hyperparams_json(meta.hyperparams)},
              {"seed", meta.seed},
              {"sweeps", meta.sweeps},
              {"rng_algorithm", meta.rng_algorithm},
              {"words", m.estimate.words},
              {"actors", m.estimate.actors},
              {"users", m.estimate.users},
              {"counts", std::move(counts)},
              {"trace", std::move(trace)}};
  if (include_topics) doc["topics"] = m.topics;
  if (meta.kind == ModelKind::cipm) {
    doc["communities"] = m.communities;
    doc["low_evidence_users"] = snapshot.low_evidence_users;
  }
  return doc;
}

ModelSnapshot model_from_json(const Json& doc) {
  expect_format(doc, kModelFormat);
  try {
    ModelSnapshot snapshot;
    TrainedModel& m = snapshot.model;
    EstimateMetadata meta;
    meta.kind = parse_model_kind(doc.at("model").get<std::string>());
    meta.hyperparams = hyperparams_from(doc.at("hyperparams"));
    meta.seed = doc.at("seed").get<std::uint64_t>();
    meta.sweeps = doc.at("sweeps").get<std::int64_t>();
    meta.rng_algorithm = doc.at("rng_algorithm").get<std::string>();
    auto words = doc.at("words").get<std::vector<std::string>>();
    auto actors = doc.at("actors").get<std::vector<std::string>>();
    auto users = doc.at("users").get<std::vector<std::string>>();
    const auto K = static_cast<std::size_t>(meta.hyperparams.num_topics);
    const Json& counts = doc.at("counts");
    const auto topic_word = matrix_from_json<std::int32_t>(counts.at("topic_word"), words.size());
    const auto actor_topic = matrix_from_json<std::int32_t>(counts.at("actor_topic"), K);
    if (topic_word.rows() != K || actor_topic.rows() != actors.size()) {
      throw ValidationError("count tables do not match the model dimensions");
    }
    m.counts = CountMatrices::from_tables(topic_word, actor_topic);
    if (meta.kind == ModelKind::cipm) {
      const auto C = static_cast<std::size_t>(meta.hyperparams.num_communities);
      const auto uc = matrix_from_json<std::int32_t>(counts.at("user_community"), C);
      const auto cu = matrix_from_json<std::int32_t>(counts.at("community_user"), users.size());
      if (uc.rows() != users.size() || cu.rows() != C) throw ValidationError("community tables do not match");
      m.counts.set_community_tables(uc, cu);
      m.communities = doc.at("communities").get<std::vector<std::int32_t>>();
      snapshot.low_evidence_users = doc.at("low_evidence_users").get<std::vector<std::string>>();
    }
    m.counts.check_invariants();
    if (doc.contains("topics")) m.topics = doc["topics"].get<std::vector<std::int32_t>>();
    for (const auto& p : doc.at("trace")) {
      m.trace.push_back({p.at("sweep").get<std::int64_t>(), p.at("perplexity").get<double>()});
    }
    m.estimate = make_estimate(m.counts, meta, std::move(words), std::move(actors), std::move(users));
    return snapshot;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed model snapshot: ") + e.what());
  } catch (const InternalFault& e) {
    throw ValidationError(std::string("inconsistent model snapshot: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  write_file(path, doc.dump(1) + "\n");
}

}  // namespace interact
