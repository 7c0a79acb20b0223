#include "interact/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <unordered_map>

#include "interact/rng.hpp"

namespace interact {

SplitUnit default_split_unit(ModelKind kind) {
  return kind == ModelKind::ipm ? SplitUnit::by_doc : SplitUnit::by_user;
}

CorpusSplit split_corpus(const Corpus& corpus, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw ValidationError("train fraction must be in (0, 1)");
  }
  // Unit ids: doc index, or author index for authors with at least one post.
  std::vector<std::int32_t> units;
  if (spec.unit == SplitUnit::by_doc) {
    for (std::size_t m = 0; m < corpus.docs.size(); ++m) units.push_back(static_cast<std::int32_t>(m));
  } else {
    std::vector<bool> authored(corpus.num_users(), false);
    for (const TokenizedDoc& doc : corpus.docs) authored[doc.author] = true;
    for (std::size_t u = 0; u < authored.size(); ++u) {
      if (authored[u]) units.push_back(static_cast<std::int32_t>(u));
    }
  }
  if (units.size() < 2) throw ValidationError("need at least 2 units to split");

  Rng rng(spec.seed);
  for (std::size_t i = units.size() - 1; i > 0; --i) {
    std::swap(units[i], units[rng.below(i + 1)]);
  }
  auto n_train = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(units.size()) + 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, units.size() - 1);

  const std::size_t table_size = spec.unit == SplitUnit::by_doc ? corpus.docs.size() : corpus.num_users();
  std::vector<bool> in_train(table_size, false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[units[i]] = true;

  CorpusSplit split;
  for (Corpus* side : {&split.train, &split.test}) {
    side->vocabulary = corpus.vocabulary;
    side->users = corpus.users;
  }
  for (std::size_t m = 0; m < corpus.docs.size(); ++m) {
    const TokenizedDoc& doc = corpus.docs[m];
    const bool train = spec.unit == SplitUnit::by_doc ? in_train[m] : in_train[doc.author];
    Corpus& side = train ? split.train : split.test;
    side.docs.push_back(doc);
    side.num_tokens += doc.tokens.size();
  }
  if (split.train.docs.empty() || split.test.docs.empty()) throw ValidationError("a split side is empty");
  return split;
}

namespace {

// Held-out tokens sharing one theta: a post (IPM) or an author (UIPM/CIPM).
struct FoldInGroup {
  std::vector<std::int32_t> words;  // model vocabulary indices
};

struct PreparedTest {
  std::vector<FoldInGroup> groups;
  std::size_t skipped = 0;
};

PreparedTest prepare(const ModelEstimate& estimate, const Corpus& test) {
  std::unordered_map<std::string_view, std::int32_t> model_index;
  model_index.reserve(estimate.words.size());
  for (std::size_t w = 0; w < estimate.words.size(); ++w) model_index.emplace(estimate.words[w], static_cast<std::int32_t>(w));
  std::vector<std::int32_t> mapped(test.num_words(), -1);
  for (std::size_t w = 0; w < test.num_words(); ++w) {
    if (auto it = model_index.find(test.vocabulary.at(static_cast<std::int32_t>(w))); it != model_index.end()) {
      mapped[w] = it->second;
    }
  }

  PreparedTest prepared;
  const bool per_author = estimate.meta.kind != ModelKind::ipm;
  std::unordered_map<std::int32_t, std::size_t> group_of_author;
  for (const TokenizedDoc& doc : test.docs) {
    std::size_t g = prepared.groups.size();
    if (per_author) {
      auto [it, inserted] = group_of_author.emplace(doc.author, g);
      if (inserted) prepared.groups.emplace_back();
      g = it->second;
    } else {
      prepared.groups.emplace_back();
    }
    for (std::int32_t w : doc.tokens) {
      if (mapped[w] < 0) {
        ++prepared.skipped;
      } else {
        prepared.groups[g].words.push_back(mapped[w]);
      }
    }
  }
  return prepared;
}

// Sum of log p(w_i) over one group's tokens after fold-in.
double group_log_likelihood(const RealMatrix& phi, double alpha, const FoldInGroup& group,
                            const PerplexityOptions& options, std::uint64_t group_seed) {
  const int K = static_cast<int>(phi.rows());
  std::vector<double> theta(K, 1.0 / K);
  if (options.fold_in_sweeps > 0 && !group.words.empty()) {
    Rng rng(group_seed);
    std::vector<std::int32_t> z(group.words.size());
    std::vector<std::int32_t> n_k(K, 0);
    for (auto& k : z) {
      k = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(K)));
      ++n_k[k];
    }
    std::vector<double> weights(K);
    std::vector<double> theta_sum(K, 0.0);
    const int window = std::max(1, std::min(options.readout_window, options.fold_in_sweeps));
    const double denom = static_cast<double>(group.words.size()) + K * alpha;
    for (int s = 1; s <= options.fold_in_sweeps; ++s) {
      for (std::size_t i = 0; i < z.size(); ++i) {
        --n_k[z[i]];
        const std::int32_t w = group.words[i];
        for (int k = 0; k < K; ++k) weights[k] = phi(k, w) * (n_k[k] + alpha);
        z[i] = static_cast<std::int32_t>(sample_categorical(weights, rng));
        ++n_k[z[i]];
      }
      if (s > options.fold_in_sweeps - window) {
        for (int k = 0; k < K; ++k) theta_sum[k] += (n_k[k] + alpha) / denom;
      }
    }
    for (int k = 0; k < K; ++k) theta[k] = theta_sum[k] / window;
  }

  double log_likelihood = 0.0;
  for (std::int32_t w : group.words) {
    double p = 0.0;
    for (int k = 0; k < K; ++k) p += theta[k] * phi(k, w);
    log_likelihood += std::log(p);
  }
  return log_likelihood;
}

PerplexityResult finish(std::span<const double> group_ll, const PreparedTest& prepared) {
  PerplexityResult result;
  result.tokens_skipped = prepared.skipped;
  double total = 0.0;
  for (std::size_t g = 0; g < group_ll.size(); ++g) {
    total += group_ll[g];
    result.tokens_scored += prepared.groups[g].words.size();
  }
  if (result.tokens_scored == 0) throw ValidationError("every test token is outside the model vocabulary");
  result.perplexity = std::exp(-total / static_cast<double>(result.tokens_scored));
  return result;
}

void check_options(const PerplexityOptions& options) {
  if (options.fold_in_sweeps < 0) throw ValidationError("fold-in sweeps must be >= 0");
  if (options.readout_window < 1) throw ValidationError("readout window must be >= 1");
}

}  // namespace

PerplexityResult perplexity_serial(const ModelEstimate& estimate, const Corpus& test,
                                   const PerplexityOptions& options) {
  check_options(options);
  const PreparedTest prepared = prepare(estimate, test);
  std::vector<double> group_ll(prepared.groups.size());
  for (std::size_t g = 0; g < prepared.groups.size(); ++g) {
    group_ll[g] = group_log_likelihood(estimate.phi, estimate.meta.hyperparams.alpha, prepared.groups[g],
                                       options, mix_seed(options.seed ^ g));
  }
  return finish(group_ll, prepared);
}

PerplexityResult perplexity(const ModelEstimate& estimate, const Corpus& test, const PerplexityOptions& options) {
  check_options(options);
  const PreparedTest prepared = prepare(estimate, test);
  std::vector<double> group_ll(prepared.groups.size());
  const auto groups = static_cast<std::int64_t>(prepared.groups.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t g = 0; g < groups; ++g) {
    group_ll[g] = group_log_likelihood(estimate.phi, estimate.meta.hyperparams.alpha, prepared.groups[g],
                                       options, mix_seed(options.seed ^ static_cast<std::uint64_t>(g)));
  }
  return finish(group_ll, prepared);
}

PerplexityResult perplexity_with_theta(const RealMatrix& phi, std::span<const std::string> words,
                                       const RealMatrix& doc_theta, const Corpus& test) {
  if (doc_theta.rows() != test.docs.size() || doc_theta.cols() != phi.rows()) {
    throw ValidationError("theta must have one row per test post and one column per topic");
  }
  std::unordered_map<std::string_view, std::int32_t> model_index;
  for (std::size_t w = 0; w < words.size(); ++w) model_index.emplace(words[w], static_cast<std::int32_t>(w));
  PerplexityResult result;
  double total = 0.0;
  for (std::size_t m = 0; m < test.docs.size(); ++m) {
    const auto theta = doc_theta.row(m);
    for (std::int32_t token : test.docs[m].tokens) {
      auto it = model_index.find(test.vocabulary.at(token));
      if (it == model_index.end()) {
        ++result.tokens_skipped;
        continue;
      }
      double p = 0.0;
      for (std::size_t k = 0; k < theta.size(); ++k) p += theta[k] * phi(k, it->second);
      total += std::log(p);
      ++result.tokens_scored;
    }
  }
  if (result.tokens_scored == 0) throw ValidationError("every test token is outside the model vocabulary");
  result.perplexity = std::exp(-total / static_cast<double>(result.tokens_scored));
  return result;
}

namespace {

Hyperparams job_hyperparams(const SweepConfig& config, int topics, int communities) {
  Hyperparams hp = config.hyperparams;
  hp.num_topics = topics;
  hp.num_communities = communities;
  if (config.alpha_from_k) hp.alpha = 50.0 / topics;
  return hp;
}

// Runs `job(i)` for every index in parallel and rethrows the first failure.
template <typename Job>
void parallel_jobs(std::size_t count, Job job) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      job(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

}  // namespace

std::vector<SweepRow> k_sweep(const Corpus& corpus, std::span<const int> values, const SweepConfig& config) {
  if (values.empty()) throw ValidationError("K sweep needs at least one value");
  for (int k : values) {
    if (k < 1) throw ValidationError("every K must be >= 1");
  }
  const CorpusSplit split = split_corpus(corpus, config.split);
  std::vector<SweepRow> rows(values.size());
  parallel_jobs(values.size(), [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    TrainOptions options;
    options.kind = config.kind;
    options.hyperparams = job_hyperparams(config, values[i], config.hyperparams.num_communities);
    options.seed = config.seed ^ static_cast<std::uint64_t>(values[i]);
    options.sweeps = config.sweeps;
    options.trace_every = 0;
    const TrainedModel trained = train_model(split.train, options);
    PerplexityOptions eval = config.perplexity;
    eval.seed = options.seed;
    const PerplexityResult result = perplexity_serial(trained.estimate, split.test, eval);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    rows[i] = {values[i], result.perplexity, config.sweeps, elapsed.count()};
  });
  return rows;
}

std::vector<CommunitySweepRow> community_sweep(const Corpus& corpus, std::span<const int> values,
                                               const SweepConfig& config) {
  if (values.empty()) throw ValidationError("community sweep needs at least one value");
  for (int c : values) {
    if (c < 1) throw ValidationError("every C must be >= 1");
  }
  std::vector<CommunitySweepRow> rows(values.size());
  parallel_jobs(values.size(), [&](std::size_t i) {
    TrainOptions options;
    options.kind = ModelKind::cipm;
    options.hyperparams = job_hyperparams(config, config.hyperparams.num_topics, values[i]);
    options.seed = config.seed ^ static_cast<std::uint64_t>(values[i]);
    options.sweeps = config.sweeps;
    options.trace_every = 0;
    const TrainedModel trained = train_model(corpus, options);
    const CommunityAssignment assignment = assign_communities(trained.estimate, AssignmentMode::threshold);
    std::size_t assigned = 0;
    for (const auto& memberships : assignment.memberships) assigned += memberships.empty() ? 0 : 1;
    rows[i] = {values[i], assigned};
  });
  return rows;
}

}  // namespace interact
