#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "interact/cipm.hpp"
#include "interact/corpus.hpp"
#include "interact/model.hpp"
#include "interact/training.hpp"

namespace interact {

enum class SplitUnit { by_user, by_doc };

/// IPM holds out posts; UIPM and CIPM hold out users.
SplitUnit default_split_unit(ModelKind kind);

struct SplitSpec {
  double train_fraction = 0.9;
  SplitUnit unit = SplitUnit::by_user;
  std::uint64_t seed = 0;
};

struct CorpusSplit {
  Corpus train;
  Corpus test;
};

/// Random partition of the units (authors that wrote at least one post, or
/// posts). floor(fraction * n) units train, clamped so each side gets at least
/// one. Vocabulary and user table are copied whole, so indices agree.
CorpusSplit split_corpus(const Corpus& corpus, const SplitSpec& spec);

struct PerplexityOptions {
  int fold_in_sweeps = 50;
  /// theta is the mean of the readouts after the last `readout_window` sweeps.
  int readout_window = 10;
  std::uint64_t seed = 0;
};

struct PerplexityResult {
  double perplexity = 0.0;
  std::size_t tokens_scored = 0;
  std::size_t tokens_skipped = 0;  // test words missing from the model vocabulary
};

/// Held-out perplexity exp(-sum_m log p(w_m) / sum_m N_m) with
/// p(w_m) = prod_i sum_k theta_k phi_k^{w_i}.
///
/// theta comes from fold-in: Gibbs sweeps over the held-out tokens with phi
/// frozen. IPM folds in each post on its own; UIPM and CIPM fold in each
/// held-out author over all of that author's posts. With 0 sweeps theta is
/// uniform. Fold-in groups run in parallel; each group has its own seeded
/// stream and the log-likelihoods are summed in group order, so the result
/// does not depend on the thread count.
PerplexityResult perplexity(const ModelEstimate& estimate, const Corpus& test,
                            const PerplexityOptions& options = {});

/// Single-threaded reference for perplexity(); bit-identical results.
PerplexityResult perplexity_serial(const ModelEstimate& estimate, const Corpus& test,
                                   const PerplexityOptions& options = {});

/// Closed-form evaluation with a given theta row per test post (M_test x K).
PerplexityResult perplexity_with_theta(const RealMatrix& phi, std::span<const std::string> words,
                                       const RealMatrix& doc_theta, const Corpus& test);

struct SweepConfig {
  ModelKind kind = ModelKind::ipm;
  Hyperparams hyperparams;
  /// Use alpha = 50/K for every K instead of hyperparams.alpha.
  bool alpha_from_k = true;
  std::uint64_t seed = 0;
  std::int64_t sweeps = 1000;
  SplitSpec split;
  PerplexityOptions perplexity;
};

struct SweepRow {
  int value = 0;
  double perplexity = 0.0;
  std::int64_t sweeps = 0;
  double seconds = 0.0;
};

/// One train/evaluate cycle per K on a shared split. Job seeds are
/// seed XOR K. Jobs run in parallel; rows come back in input order.
std::vector<SweepRow> k_sweep(const Corpus& corpus, std::span<const int> values, const SweepConfig& config);

struct CommunitySweepRow {
  int communities = 0;
  std::size_t users_assigned = 0;
};

/// One CIPM run per C on the full corpus (seed XOR C); counts users with at
/// least one threshold-mode membership.
std::vector<CommunitySweepRow> community_sweep(const Corpus& corpus, std::span<const int> values,
                                               const SweepConfig& config);

}  // namespace interact
