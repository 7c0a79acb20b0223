#include <filesystem>

#include "doctest.h"
#include "interact/cipm.hpp"
#include "interact/reports.hpp"
#include "interact/snapshot.hpp"
#include "support.hpp"

using namespace interact;

namespace {

TrainedModel trained(ModelKind kind, int C = 1) {
  static const Corpus corpus = testing::random_corpus(5, 40, 10, 25, 8, 2);
  TrainOptions o;
  o.kind = kind;
  o.hyperparams = Hyperparams::defaults(4, C);
  o.sweeps = 5;
  o.trace_every = 2;
  o.seed = 3;
  return train_model(corpus, o);
}

}  // namespace

TEST_CASE("corpus snapshot round trip") {
  const Corpus c = testing::random_corpus(1, 20, 5, 15, 6, 2);
  const Json j = corpus_to_json(c);
  const Corpus back = corpus_from_json(j);
  CHECK(back.docs == c.docs);
  CHECK(back.num_tokens == c.num_tokens);
  CHECK(corpus_to_json(back).dump() == j.dump());

  Json bad = j;
  bad["format"] = "something-else";
  CHECK_THROWS_AS(corpus_from_json(bad), ValidationError);
  bad = j;
  bad["num_tokens"] = 1;
  CHECK_THROWS_AS(corpus_from_json(bad), ValidationError);
  bad = j;
  bad.erase("docs");
  CHECK_THROWS_AS(corpus_from_json(bad), ValidationError);
  bad = j;
  bad["vocabulary"].push_back(bad["vocabulary"][0]);
  CHECK_THROWS_AS(corpus_from_json(bad), ValidationError);
}

TEST_CASE("model snapshot round trip") {
  for (auto [kind, C] : {std::pair{ModelKind::ipm, 1}, std::pair{ModelKind::uipm, 1}, std::pair{ModelKind::cipm, 3}}) {
    CAPTURE(to_string(kind));
    ModelSnapshot s{trained(kind, C), {"u9"}};
    const Json j = model_to_json(s);
    CHECK_FALSE(j.contains("topics"));
    const ModelSnapshot back = model_from_json(j);
    CHECK(back.model.counts == s.model.counts);
    CHECK(back.model.estimate.phi == s.model.estimate.phi);
    CHECK(back.model.estimate.theta == s.model.estimate.theta);
    CHECK(back.model.estimate.meta.seed == 3);
    CHECK(back.model.estimate.meta.sweeps == 5);
    CHECK(back.model.trace.size() == 3);
    CHECK(topics_csv(back.model.estimate, 5) == topics_csv(s.model.estimate, 5));
    CHECK(model_to_json(back).dump() == j.dump());
    if (kind == ModelKind::cipm) {
      CHECK(*back.model.estimate.mu == *s.model.estimate.mu);
      CHECK(back.model.communities == s.model.communities);
      CHECK(back.low_evidence_users == std::vector<std::string>{"u9"});
    }
    const Json with_topics = model_to_json(s, true);
    CHECK(model_from_json(with_topics).model.topics == s.model.topics);
  }
}

TEST_CASE("model snapshot errors") {
  const Json j = model_to_json({trained(ModelKind::uipm), {}});
  Json bad = j;
  bad["format"] = kCorpusFormat;
  CHECK_THROWS_AS(model_from_json(bad), ValidationError);
  bad = j;
  bad["model"] = "lda";
  CHECK_THROWS_AS(model_from_json(bad), ValidationError);
  bad = j;
  bad["counts"]["topic_word"][0].push_back(1);
  CHECK_THROWS_AS(model_from_json(bad), ValidationError);
  bad = j;
  bad["hyperparams"]["beta"] = -1.0;
  CHECK_THROWS_AS(model_from_json(bad), ValidationError);
  bad = j;
  bad["counts"]["actor_topic"][0][0] = -4;
  CHECK_THROWS_AS(model_from_json(bad), ValidationError);
  CHECK_THROWS_AS(model_from_json(Json::array()), ValidationError);
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "interact_snapshot_test";
  std::filesystem::create_directories(dir);
  write_json_file(dir / "a.json", Json{{"k", 1}});
  CHECK(read_json_file(dir / "a.json")["k"] == 1);
  CHECK(read_file(dir / "a.json").back() == '\n');
  write_file(dir / "b.json", "{oops");
  CHECK_THROWS_AS(read_json_file(dir / "b.json"), ValidationError);
  CHECK_THROWS_AS(read_file(dir / "missing.json"), IoError);
  CHECK_THROWS_AS(write_file(dir / "no" / "such" / "dir.txt", "x"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv helpers") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"x\"") == "\"say \"\"x\"\"\"");
  CHECK(format_real(0.25) == "0.25");
  CHECK(format_real(1.0) == "1");
}
