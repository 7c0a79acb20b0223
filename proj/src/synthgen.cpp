#include "interact/synthgen.hpp"

#include <algorithm>
#include <numeric>

#include "interact/rng.hpp"

namespace interact {

namespace {

constexpr std::uint64_t kCommunityStream = 0x636f6d6d756e6974ULL;

std::size_t draw_index(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.uniform() * total;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last = i;
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return last;
}

RealMatrix draw_rows(std::size_t rows, std::size_t cols, double concentration, Rng& rng) {
  RealMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) rng.dirichlet(concentration, m.row(r));
  return m;
}

struct Builder {
  SyntheticCorpus out;

  Builder(int num_words, int num_users) {
    for (int w = 0; w < num_words; ++w) out.corpus.vocabulary.intern("w" + std::to_string(w));
    for (int u = 0; u < num_users; ++u) out.corpus.users.intern("u" + std::to_string(u));
  }

  int length(const SynthSpec& spec, Rng& rng) const {
    if (!spec.poisson_lengths) return spec.tokens_per_doc;
    return std::max<int>(1, static_cast<int>(rng.poisson(spec.tokens_per_doc)));
  }

  void add_doc(std::int32_t author, std::span<const double> theta, const RealMatrix& phi, int n, Rng& rng) {
    TokenizedDoc doc;
    doc.record_id = "d" + std::to_string(out.corpus.docs.size());
    doc.author = author;
    doc.tokens.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const std::size_t z = draw_index(theta, rng);
      doc.tokens.push_back(static_cast<std::int32_t>(draw_index(phi.row(z), rng)));
    }
    out.corpus.num_tokens += doc.tokens.size();
    out.corpus.docs.push_back(std::move(doc));
  }

  void finish() {
    for (const auto& doc : out.corpus.docs) {
      InteractionRecord record;
      record.record_id = doc.record_id;
      record.author_id = out.corpus.users.at(doc.author);
      for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        if (i > 0) record.text += ' ';
        record.text += out.corpus.vocabulary.at(doc.tokens[i]);
      }
      for (std::int32_t m : doc.mentions) record.mentions.push_back(out.corpus.users.at(m));
      out.records.push_back(std::move(record));
    }
    out.corpus.check_invariants();
  }
};

void require(bool ok, const char* message) {
  if (!ok) throw ValidationError(message);
}

SyntheticCorpus generate_by_user(const SynthSpec& spec) {
  spec.validate_topics();
  require(spec.num_users >= 1, "num_users must be >= 1");
  require(spec.docs_per_user >= 1, "docs_per_user must be >= 1");
  Rng rng(spec.seed);
  Builder b(spec.num_words, spec.num_users);
  b.out.truth.phi = draw_rows(spec.num_topics, spec.num_words, spec.beta, rng);
  b.out.truth.theta = RealMatrix(spec.num_users, spec.num_topics);
  for (int u = 0; u < spec.num_users; ++u) {
    auto theta = b.out.truth.theta.row(u);
    rng.dirichlet(spec.alpha, theta);
    for (int d = 0; d < spec.docs_per_user; ++d) b.add_doc(u, theta, b.out.truth.phi, b.length(spec, rng), rng);
  }
  return std::move(b.out);
}

}  // namespace

void SynthSpec::validate_topics() const {
  require(num_topics >= 1, "num_topics must be >= 1");
  require(num_words >= 1, "num_words must be >= 1");
  require(tokens_per_doc >= 1, "tokens_per_doc must be >= 1");
  require(alpha > 0.0 && beta > 0.0, "alpha and beta must be > 0");
}

SyntheticCorpus generate_ipm(const SynthSpec& spec) {
  spec.validate_topics();
  require(spec.num_docs >= 1, "num_docs must be >= 1");
  Rng rng(spec.seed);
  Builder b(spec.num_words, spec.num_docs);
  b.out.truth.phi = draw_rows(spec.num_topics, spec.num_words, spec.beta, rng);
  b.out.truth.theta = RealMatrix(spec.num_docs, spec.num_topics);
  for (int m = 0; m < spec.num_docs; ++m) {
    auto theta = b.out.truth.theta.row(m);
    rng.dirichlet(spec.alpha, theta);
    b.add_doc(m, theta, b.out.truth.phi, b.length(spec, rng), rng);
  }
  b.finish();
  return std::move(b.out);
}

SyntheticCorpus generate_uipm(const SynthSpec& spec) {
  SyntheticCorpus out = generate_by_user(spec);
  Builder b(0, 0);
  b.out = std::move(out);
  b.finish();
  return std::move(b.out);
}

SyntheticCorpus generate_cipm(const SynthSpec& spec) {
  const int U = spec.num_users;
  const int C = spec.num_communities;
  require(C >= 1, "num_communities must be >= 1");
  require(C <= U, "num_communities must not exceed num_users");
  require(spec.mentions_per_doc >= 0, "mentions_per_doc must be >= 0");
  require(spec.gamma > 0.0 && spec.delta > 0.0, "gamma and delta must be > 0");
  if (spec.epsilon) require(*spec.epsilon >= 0.0 && *spec.epsilon <= 1.0, "epsilon must be in [0, 1]");

  Builder b(0, 0);
  b.out = generate_by_user(spec);
  GroundTruth& truth = b.out.truth;
  Rng rng(mix_seed(spec.seed ^ kCommunityStream));

  truth.block.resize(static_cast<std::size_t>(U));
  std::vector<std::vector<std::int32_t>> members(static_cast<std::size_t>(C));
  for (int u = 0; u < U; ++u) {
    const auto c = static_cast<std::int32_t>(static_cast<std::int64_t>(u) * C / U);
    truth.block[u] = c;
    members[c].push_back(u);
  }
  for (const auto& m : members) {
    if (static_cast<int>(m.size()) < spec.mentions_per_doc + 1) {
      throw ValidationError("mentions_per_doc must be smaller than every block size (" + std::to_string(m.size()) +
                            ")");
    }
  }

  RealMatrix mu(U, C);
  for (int u = 0; u < U; ++u) {
    if (!spec.epsilon) {
      rng.dirichlet(spec.gamma, mu.row(u));
    } else if (C == 1) {
      mu(u, 0) = 1.0;
    } else {
      const double eps = *spec.epsilon;
      for (int c = 0; c < C; ++c) mu(u, c) = c == truth.block[u] ? 1.0 - eps : eps / (C - 1);
    }
  }
  RealMatrix mention(C, U, 0.0);
  for (int c = 0; c < C; ++c) {
    std::vector<double> w(members[c].size());
    rng.dirichlet(spec.delta, w);
    for (std::size_t i = 0; i < w.size(); ++i) mention(c, members[c][i]) = w[i];
  }

  std::vector<double> weights;
  for (auto& doc : b.out.corpus.docs) {
    const auto c = static_cast<std::int32_t>(draw_index(mu.row(doc.author), rng));
    truth.doc_community.push_back(c);
    weights.clear();
    for (std::int32_t v : members[c]) weights.push_back(v == doc.author ? 0.0 : mention(c, v));
    for (int j = 0; j < spec.mentions_per_doc; ++j) {
      double total = 0.0;
      for (double w : weights) total += w;
      if (total <= 0.0) {
        // mass underflowed on the remaining users; fall back to uniform
        for (std::size_t i = 0; i < weights.size(); ++i) {
          const bool taken = members[c][i] == doc.author ||
                             std::find(doc.mentions.begin(), doc.mentions.end(), members[c][i]) != doc.mentions.end();
          weights[i] = taken ? 0.0 : 1.0;
        }
      }
      const std::size_t pick = draw_index(weights, rng);
      doc.mentions.push_back(members[c][pick]);
      weights[pick] = 0.0;
    }
  }
  truth.mu = std::move(mu);
  truth.mention = std::move(mention);
  b.finish();
  return std::move(b.out);
}

nlohmann::json ground_truth_to_json(const GroundTruth& truth) {
  using nlohmann::json;
  const auto rows = [](const RealMatrix& m) {
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto row = m.row(r);
      out.push_back(json(std::vector<double>(row.begin(), row.end())));
    }
    return out;
  };
  json doc;
  doc["format"] = "interact-ground-truth/1";
  doc["phi"] = rows(truth.phi);
  doc["theta"] = rows(truth.theta);
  if (truth.mu) doc["mu"] = rows(*truth.mu);
  if (truth.mention) doc["mention"] = rows(*truth.mention);
  if (!truth.block.empty()) doc["block"] = truth.block;
  if (!truth.doc_community.empty()) doc["doc_community"] = truth.doc_community;
  return doc;
}

}  // namespace interact
