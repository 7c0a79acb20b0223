#include "interact/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <tuple>

#include <omp.h>

#include "CLI11.hpp"
#include "interact/cipm.hpp"
#include "interact/corpus.hpp"
#include "interact/evaluation.hpp"
#include "interact/graph.hpp"
#include "interact/reports.hpp"
#include "interact/snapshot.hpp"
#include "interact/synthgen.hpp"
#include "interact/training.hpp"

namespace interact {

namespace fs = std::filesystem;

namespace {

// Options of one subcommand that take part in config-file resolution and are
// echoed into the outputs.
class Registry {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& names, const std::string& key, T& var,
                   const std::string& description) {
    CLI::Option* opt = app->add_option(names, var, description);
    entries_.push_back({key, opt, [&var] { return Json(var); }});
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& names, const std::string& key, bool& var,
                    const std::string& description) {
    CLI::Option* opt = app->add_flag(names, var, description);
    entries_.push_back({key, opt, [&var] { return Json(var); }});
    return opt;
  }

  /// Fills options absent from the command line. `config` may hold the keys
  /// at top level and, taking precedence, under the subcommand's name.
  void apply(const Json& config, const std::string& command) const {
    if (!config.is_object()) throw ValidationError("config file must hold a JSON object");
    for (const auto& entry : entries_) {
      if (entry.option->count() > 0) continue;
      const Json* value = nullptr;
      if (config.contains(command) && config[command].is_object() && config[command].contains(entry.key)) {
        value = &config[command][entry.key];
      } else if (config.contains(entry.key)) {
        value = &config[entry.key];
      }
      if (value == nullptr) continue;
      if (value->is_array()) {
        for (const auto& item : *value) entry.option->add_result(scalar_text(item));
      } else {
        entry.option->add_result(scalar_text(*value));
      }
      try {
        entry.option->run_callback();
      } catch (const CLI::Error& e) {
        throw ValidationError("config value for '" + entry.key + "': " + e.what());
      }
    }
  }

  Json resolved(const std::string& command) const {
    Json config = {{"command", command}};
    // the output directory is left out so reruns elsewhere compare byte for byte
    for (const auto& entry : entries_) {
      if (entry.key != "out") config[entry.key] = entry.value();
    }
    return config;
  }

 private:
  static std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  struct Entry {
    std::string key;
    CLI::Option* option;
    std::function<Json()> value;
  };
  std::vector<Entry> entries_;
};

struct Options {
  std::string config_path;
  int threads = 0;

  std::string input;
  std::string corpus;
  std::string model_file;
  std::string out;
  std::uint64_t seed = 0;

  // ingest
  int min_count = 1;
  std::string stopwords;

  // train / perplexity
  std::string model = "ipm";
  int topics = 100;
  int communities = 1;
  double alpha = 0.0;
  double beta = 0.01;
  double gamma = 0.1;
  double delta = 0.1;
  std::int64_t sweeps = 1000;
  std::int64_t trace_every = 10;
  int top = 20;
  std::string assignment = "threshold";
  bool include_topics = false;

  std::vector<int> values;
  std::vector<int> community_values;
  double train_fraction = 0.9;
  int fold_in_sweeps = 50;
  int readout_window = 10;
  bool no_timing = false;

  int report_community = -1;

  // graph
  std::string direction = "mentioner_to_mentioned";
  bool lcc = false;
  bool metrics = false;
  bool fit_powerlaw = false;
  std::string degree_mode = "total";
  std::int64_t xmin = 0;
  std::string powerlaw_method = "exact";

  // generate
  std::string process = "ipm";
  int gen_topics = 10;
  int words = 1000;
  int docs = 1000;
  int users = 100;
  int docs_per_user = 10;
  int tokens_per_doc = 20;
  int mentions_per_doc = 3;
  int gen_communities = 4;
  double gen_alpha = 0.1;
  double epsilon = 0.1;
  bool poisson_lengths = false;
};

struct Context {
  Options& o;
  Json config;
  std::ostream& out;
  std::ostream& err;
  bool option_given(const std::string& key) const { return given.contains(key); }
  std::set<std::string> given;
};

void require_option(bool present, const std::string& name) {
  if (!present) throw ValidationError("missing required option --" + name);
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

Json with_config(Json doc, const Json& config) {
  doc["config"] = config;
  return doc;
}

void write_manifest(const fs::path& dir, const Json& config, const std::vector<std::string>& outputs,
                    Json extra = Json::object()) {
  extra["config"] = config;
  extra["outputs"] = outputs;
  write_json_file(dir / "run.json", extra);
}

Corpus load_corpus(const std::string& path) { return corpus_from_json(read_json_file(path)); }

ModelSnapshot load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

std::vector<InteractionRecord> load_records(const std::string& path, std::ostream& err) {
  ParseResult parsed = parse_records(read_file(path));
  if (!parsed.failures.empty()) err << path << ": skipped " << parsed.failures.size() << " malformed line(s)\n";
  return std::move(parsed.records);
}

Hyperparams model_hyperparams(const Context& ctx, ModelKind kind) {
  const Options& o = ctx.o;
  if (kind == ModelKind::cipm) {
    if (!ctx.option_given("communities")) throw ValidationError("cipm requires --communities");
  } else if (ctx.option_given("communities")) {
    throw ValidationError("--communities only applies to cipm");
  }
  Hyperparams hp = Hyperparams::defaults(o.topics, kind == ModelKind::cipm ? o.communities : 1);
  if (ctx.option_given("alpha")) hp.alpha = o.alpha;
  hp.beta = o.beta;
  hp.gamma = o.gamma;
  hp.delta = o.delta;
  hp.validate();
  return hp;
}

void emit(const Context& ctx, const std::string& file, const std::string& content, std::vector<std::string>& outputs) {
  write_file(fs::path(ctx.o.out) / file, content);
  outputs.push_back(file);
}

// ---- subcommands ----

void cmd_ingest(Context& ctx) {
  const Options& o = ctx.o;
  require_option(!o.input.empty(), "input");
  require_option(!o.out.empty(), "out");
  if (o.min_count < 1) throw ValidationError("--min-count must be >= 1");
  const std::string text = read_file(o.input);
  StopwordSet stopwords;
  if (o.stopwords.empty()) {
    stopwords = default_stopwords();
  } else {
    std::istringstream lines(read_file(o.stopwords));
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) stopwords.insert(line);
    }
  }
  const ParseResult parsed = parse_records(text);
  BuildStats stats;
  const Corpus corpus = build_corpus(parsed.records, stopwords, o.min_count, &stats);

  const fs::path dir = ensure_dir(o.out);
  write_json_file(dir / "corpus.json", with_config(corpus_to_json(corpus), ctx.config));
  Json failures = Json::array();
  for (const auto& f : parsed.failures) failures.push_back({{"line", f.line}, {"reason", f.reason}});
  const Json report = {{"records_read", parsed.records.size() + parsed.failures.size()},
                       {"records_valid", parsed.records.size()},
                       {"parse_failures", std::move(failures)},
                       {"blank_lines", parsed.blank_lines},
                       {"docs_dropped", stats.docs_dropped},
                       {"W", corpus.num_words()},
                       {"U", corpus.num_users()},
                       {"M", corpus.num_docs()},
                       {"N", corpus.num_tokens},
                       {"config", ctx.config}};
  write_json_file(dir / "ingest_report.json", report);
  ctx.err << "ingest: " << corpus.num_docs() << " posts, " << corpus.num_tokens << " tokens, " << corpus.num_words()
          << " words, " << corpus.num_users() << " users (" << parsed.failures.size() << " malformed, "
          << stats.docs_dropped << " dropped)\n";
}

void cmd_train(Context& ctx) {
  const Options& o = ctx.o;
  require_option(!o.corpus.empty(), "corpus");
  require_option(!o.out.empty(), "out");
  if (o.top < 1) throw ValidationError("--top must be >= 1");
  const ModelKind kind = parse_model_kind(o.model);
  const AssignmentMode mode = parse_assignment_mode(o.assignment);
  TrainOptions options;
  options.kind = kind;
  options.hyperparams = model_hyperparams(ctx, kind);
  options.seed = o.seed;
  options.sweeps = o.sweeps;
  options.trace_every = o.trace_every;
  if (options.trace_every < 0) throw ValidationError("--trace-every must be >= 0");
  const Corpus corpus = load_corpus(o.corpus);
  options.on_trace = [&ctx](const TracePoint& p) {
    ctx.err << "sweep " << p.sweep << " train perplexity " << format_real(p.perplexity) << '\n';
  };

  ModelSnapshot snapshot;
  snapshot.model = train_model(corpus, options);
  if (kind == ModelKind::cipm) {
    const auto low = low_evidence_users(corpus);
    for (std::size_t u = 0; u < low.size(); ++u) {
      if (low[u]) snapshot.low_evidence_users.push_back(corpus.users.at(static_cast<std::int32_t>(u)));
    }
  }

  const fs::path dir = ensure_dir(o.out);
  std::vector<std::string> outputs;
  write_json_file(dir / "model.json", with_config(model_to_json(snapshot, o.include_topics), ctx.config));
  outputs.push_back("model.json");
  const auto top = static_cast<std::size_t>(o.top);
  emit(ctx, "topics.csv", topics_csv(snapshot.model.estimate, top), outputs);
  if (kind != ModelKind::ipm) {
    emit(ctx, "users.csv", users_csv(snapshot.model.counts, snapshot.model.estimate.users, top), outputs);
  }
  Json extra = Json::object();
  if (kind == ModelKind::cipm) {
    emit(ctx, "communities.csv",
         communities_csv(snapshot.model.estimate, assign_communities(snapshot.model.estimate, mode)), outputs);
    extra["low_evidence_users"] = snapshot.low_evidence_users;
  }
  write_manifest(dir, ctx.config, outputs, std::move(extra));
}

// topics / users / communities: CSV to --out DIR, or to standard output.
void deliver(Context& ctx, const std::string& file, const std::string& csv) {
  if (ctx.o.out.empty()) {
    ctx.out << csv;
    return;
  }
  const fs::path dir = ensure_dir(ctx.o.out);
  std::vector<std::string> outputs;
  emit(ctx, file, csv, outputs);
  write_manifest(dir, ctx.config, outputs);
}

void cmd_topics(Context& ctx) {
  require_option(!ctx.o.model_file.empty(), "model-file");
  if (ctx.o.top < 1) throw ValidationError("--top must be >= 1");
  const ModelSnapshot snapshot = load_model(ctx.o.model_file);
  deliver(ctx, "topics.csv", topics_csv(snapshot.model.estimate, static_cast<std::size_t>(ctx.o.top)));
}

void cmd_users(Context& ctx) {
  require_option(!ctx.o.model_file.empty(), "model-file");
  if (ctx.o.top < 1) throw ValidationError("--top must be >= 1");
  const ModelSnapshot snapshot = load_model(ctx.o.model_file);
  if (snapshot.model.estimate.meta.kind == ModelKind::ipm) {
    throw ValidationError("user rankings need a uipm or cipm model");
  }
  deliver(ctx, "users.csv",
          users_csv(snapshot.model.counts, snapshot.model.estimate.users, static_cast<std::size_t>(ctx.o.top)));
}

void cmd_communities(Context& ctx) {
  require_option(!ctx.o.model_file.empty(), "model-file");
  const ModelSnapshot snapshot = load_model(ctx.o.model_file);
  const ModelEstimate& estimate = snapshot.model.estimate;
  if (estimate.meta.kind != ModelKind::cipm) throw ValidationError("communities need a cipm model");
  if (ctx.option_given("report-community")) {
    const int c = ctx.o.report_community;
    if (c < 0 || c >= estimate.meta.hyperparams.num_communities) {
      throw ValidationError("--report-community out of range");
    }
    const auto rows = mention_similarity_report(estimate, c);
    deliver(ctx, "interest.csv", interest_csv(rows));
    return;
  }
  const auto assignment = assign_communities(estimate, parse_assignment_mode(ctx.o.assignment));
  deliver(ctx, "communities.csv", communities_csv(estimate, assignment));
}

void cmd_perplexity(Context& ctx) {
  const Options& o = ctx.o;
  require_option(!o.corpus.empty(), "corpus");
  const bool k_mode = !o.values.empty();
  const bool c_mode = !o.community_values.empty();
  if (k_mode == c_mode) throw ValidationError("give exactly one of --values (K sweep) or --community-values");
  const ModelKind kind = parse_model_kind(o.model);
  SweepConfig config;
  config.kind = kind;
  config.seed = o.seed;
  config.sweeps = o.sweeps;
  if (config.sweeps < 0) throw ValidationError("--sweeps must be >= 0");
  config.split.train_fraction = o.train_fraction;
  config.split.unit = default_split_unit(kind);
  config.split.seed = o.seed;
  config.perplexity.fold_in_sweeps = o.fold_in_sweeps;
  config.perplexity.readout_window = o.readout_window;
  const Corpus corpus = load_corpus(o.corpus);
  std::string csv;
  std::string file;
  if (k_mode) {
    config.hyperparams = model_hyperparams(ctx, kind);
    config.alpha_from_k = !ctx.option_given("alpha");
    ctx.err << "perplexity: " << o.values.size() << " value(s) of K, " << config.sweeps << " sweeps each\n";
    auto rows = k_sweep(corpus, o.values, config);
    if (o.no_timing) {
      for (auto& row : rows) row.seconds = 0.0;
    }
    csv = sweep_csv(rows);
    file = "perplexity.csv";
  } else {
    if (kind != ModelKind::cipm) throw ValidationError("--community-values needs --model cipm");
    if (ctx.option_given("communities")) throw ValidationError("--communities conflicts with --community-values");
    config.hyperparams = Hyperparams::defaults(o.topics, 1);
    if (ctx.option_given("alpha")) config.hyperparams.alpha = o.alpha;
    config.hyperparams.beta = o.beta;
    config.hyperparams.gamma = o.gamma;
    config.hyperparams.delta = o.delta;
    config.hyperparams.validate();
    config.alpha_from_k = false;
    ctx.err << "community sweep: " << o.community_values.size() << " value(s) of C\n";
    csv = community_sweep_csv(community_sweep(corpus, o.community_values, config));
    file = "community_sweep.csv";
  }
  deliver(ctx, file, csv);
}

DegreeMode parse_degree_mode(const std::string& name) {
  if (name == "in") return DegreeMode::in;
  if (name == "out") return DegreeMode::out;
  if (name == "total") return DegreeMode::total;
  throw ValidationError("unknown degree mode: " + name);
}

PowerLawMethod parse_powerlaw_method(const std::string& name) {
  if (name == "exact") return PowerLawMethod::exact;
  if (name == "approximate") return PowerLawMethod::approximate;
  throw ValidationError("unknown power-law method: " + name);
}

void cmd_graph(Context& ctx) {
  const Options& o = ctx.o;
  if (o.input.empty() == o.corpus.empty()) throw ValidationError("give exactly one of --input or --corpus");
  require_option(!o.out.empty(), "out");
  const EdgeDirection direction = parse_edge_direction(o.direction);
  const DegreeMode degree_mode = parse_degree_mode(o.degree_mode);
  const PowerLawMethod method = parse_powerlaw_method(o.powerlaw_method);
  if (ctx.option_given("xmin") && o.xmin < 1) throw ValidationError("--xmin must be >= 1");

  InteractionGraph graph;
  if (!o.input.empty()) {
    const auto records = load_records(o.input, ctx.err);
    graph = build_graph(records, direction);
  } else {
    graph = build_graph(load_corpus(o.corpus), direction);
  }
  if (o.lcc) graph = largest_connected_component(graph);
  ctx.err << "graph: " << graph.num_nodes() << " nodes, " << graph.num_directed_edges() << " directed edges\n";

  const fs::path dir = ensure_dir(o.out);
  std::vector<std::string> outputs;
  emit(ctx, "edges.csv", edge_list_csv(graph), outputs);
  emit(ctx, "graph.graphml", graphml(graph), outputs);
  const DegreeDistribution dist = degree_distribution(graph, degree_mode);
  emit(ctx, "degree_distribution.csv", degree_distribution_csv(dist), outputs);

  Json summary = {{"nodes", graph.num_nodes()},
                  {"directed_edges", graph.num_directed_edges()},
                  {"undirected_edges", graph.num_undirected_edges()}};
  if (o.metrics) {
    emit(ctx, "node_metrics.csv", node_metrics_csv(node_metrics(graph)), outputs);
    const GraphMetrics gm = graph_metrics(graph);
    summary["metrics"] = {{"density", gm.density},   {"radius", gm.radius},
                          {"diameter", gm.diameter}, {"transitivity", gm.transitivity}};
  }
  if (o.fit_powerlaw) {
    PowerLawOptions options;
    options.method = method;
    if (ctx.option_given("xmin")) options.xmin = o.xmin;
    const auto degrees = node_degrees(graph, degree_mode);
    const PowerLawFit fit = fit_power_law(degrees, options);
    summary["power_law"] = {{"alpha", fit.alpha},
                            {"xmin", fit.xmin},
                            {"n_tail", fit.n_tail},
                            {"ks_distance", fit.ks_distance},
                            {"method", o.powerlaw_method}};
    ctx.err << "power law: alpha " << format_real(fit.alpha) << " (xmin " << fit.xmin << ", " << fit.n_tail
            << " nodes in tail)\n";
  }
  write_json_file(dir / "graph_summary.json", with_config(summary, ctx.config));
  outputs.push_back("graph_summary.json");
  write_manifest(dir, ctx.config, outputs);
}

void cmd_generate(Context& ctx) {
  const Options& o = ctx.o;
  require_option(!o.out.empty(), "out");
  SynthSpec spec;
  spec.num_topics = o.gen_topics;
  spec.num_words = o.words;
  spec.num_docs = o.docs;
  spec.num_users = o.users;
  spec.docs_per_user = o.docs_per_user;
  spec.tokens_per_doc = o.tokens_per_doc;
  spec.poisson_lengths = o.poisson_lengths;
  spec.alpha = o.gen_alpha;
  spec.beta = o.beta;
  spec.gamma = o.gamma;
  spec.delta = o.delta;
  spec.num_communities = o.gen_communities;
  spec.mentions_per_doc = o.mentions_per_doc;
  spec.epsilon = o.epsilon;
  spec.seed = o.seed;
  const ModelKind kind = parse_model_kind(o.process);
  const SyntheticCorpus synth = kind == ModelKind::ipm    ? generate_ipm(spec)
                                : kind == ModelKind::uipm ? generate_uipm(spec)
                                                          : generate_cipm(spec);
  const fs::path dir = ensure_dir(o.out);
  std::string lines;
  for (const auto& record : synth.records) {
    lines += to_json_line(record);
    lines += '\n';
  }
  std::vector<std::string> outputs;
  emit(ctx, "records.jsonl", lines, outputs);
  write_json_file(dir / "ground_truth.json", with_config(ground_truth_to_json(synth.truth), ctx.config));
  outputs.push_back("ground_truth.json");
  write_manifest(dir, ctx.config, outputs);
  ctx.err << "generate: " << synth.records.size() << " posts, " << synth.corpus.num_tokens << " tokens\n";
}

struct Command {
  CLI::App* app;
  Registry registry;
  std::function<void(Context&)> run;
  CLI::Option* seed = nullptr;
};

std::uint64_t parse_seed_env(const char* text) {
  std::uint64_t value = 0;
  const std::string s(text);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    throw ValidationError("MT_SEED must be a non-negative integer, got '" + s + "'");
  }
  return value;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app("Topic and community models for user interaction corpora", "interact");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config_path, "JSON file of option values (command-line flags take precedence)");
  app.add_option("--threads", o.threads, "Cap on worker threads (0: runtime default)");

  std::map<std::string, std::unique_ptr<Command>> commands;
  const auto make = [&](const std::string& name, const std::string& description, void (*run)(Context&)) {
    auto cmd = std::make_unique<Command>();
    cmd->app = app.add_subcommand(name, description);
    cmd->run = run;
    Command& ref = *cmd;
    commands[name] = std::move(cmd);
    return &ref;
  };
  const auto seed_option = [&](Command* c) {
    c->seed = c->registry.add(c->app, "--seed", "seed", o.seed, "Random seed (default: MT_SEED, else 0)");
  };
  const auto prior_options = [&](Command* c) {
    Registry& r = c->registry;
    r.add(c->app, "--beta", "beta", o.beta, "Topic-word prior")->capture_default_str();
    r.add(c->app, "--gamma", "gamma", o.gamma, "User-community prior")->capture_default_str();
    r.add(c->app, "--delta", "delta", o.delta, "Community-mention prior")->capture_default_str();
  };
  const auto model_options = [&](Command* c) {
    Registry& r = c->registry;
    r.add(c->app, "--corpus", "corpus", o.corpus, "Corpus snapshot from `ingest`");
    r.add(c->app, "--model", "model", o.model, "ipm, uipm or cipm")->capture_default_str();
    r.add(c->app, "-K,--topics", "topics", o.topics, "Number of topics")->capture_default_str();
    r.add(c->app, "-C,--communities", "communities", o.communities, "Number of communities (cipm only)");
    r.add(c->app, "--alpha", "alpha", o.alpha, "Topic prior (default 50/K)");
    prior_options(c);
    r.add(c->app, "--sweeps", "sweeps", o.sweeps, "Gibbs sweeps")->capture_default_str();
    seed_option(c);
  };

  {
    Command* c = make("ingest", "Parse JSON-lines records into a corpus snapshot", cmd_ingest);
    Registry& r = c->registry;
    r.add(c->app, "-i,--input", "input", o.input, "JSON-lines records");
    r.add(c->app, "-o,--out", "out", o.out, "Output directory");
    r.add(c->app, "--min-count", "min_count", o.min_count, "Drop words rarer than this")->capture_default_str();
    r.add(c->app, "--stopwords", "stopwords", o.stopwords, "Stopword file, one per line (default: built-in list)");
  }
  {
    Command* c = make("train", "Fit a model and write its snapshot and reports", cmd_train);
    model_options(c);
    Registry& r = c->registry;
    r.add(c->app, "-o,--out", "out", o.out, "Output directory");
    r.add(c->app, "--trace-every", "trace_every", o.trace_every, "Train perplexity every N sweeps (0: off)")
        ->capture_default_str();
    r.add(c->app, "--top", "top", o.top, "Rows per topic in the reports")->capture_default_str();
    r.add(c->app, "--assignment", "assignment", o.assignment, "threshold or argmax")->capture_default_str();
    r.flag(c->app, "--include-topics", "include_topics", o.include_topics, "Store token topics in the snapshot");
  }
  for (const auto& [name, description, run] :
       {std::tuple{"topics", "Top words per topic", cmd_topics}, std::tuple{"users", "Top users per topic", cmd_users}}) {
    Command* c = make(name, description, run);
    Registry& r = c->registry;
    r.add(c->app, "-m,--model-file", "model_file", o.model_file, "Model snapshot from `train`");
    r.add(c->app, "--top", "top", o.top, "Rows per topic")->capture_default_str();
    r.add(c->app, "-o,--out", "out", o.out, "Output directory (default: standard output)");
  }
  {
    Command* c = make("communities", "Community memberships of a cipm model", cmd_communities);
    Registry& r = c->registry;
    r.add(c->app, "-m,--model-file", "model_file", o.model_file, "Model snapshot from `train`");
    r.add(c->app, "--assignment", "assignment", o.assignment, "threshold or argmax")->capture_default_str();
    r.add(c->app, "--report-community", "report_community", o.report_community,
          "Instead list this community's users with their top topic");
    r.add(c->app, "-o,--out", "out", o.out, "Output directory (default: standard output)");
  }
  {
    Command* c = make("perplexity", "Held-out perplexity over a range of K (or community counts over C)",
                      cmd_perplexity);
    model_options(c);
    Registry& r = c->registry;
    r.add(c->app, "--values", "values", o.values, "K values, e.g. 10,20,50")->delimiter(',');
    r.add(c->app, "--community-values", "community_values", o.community_values, "C values for a community sweep")
        ->delimiter(',');
    r.add(c->app, "--train-fraction", "train_fraction", o.train_fraction, "Share of units used for training")
        ->capture_default_str();
    r.add(c->app, "--fold-in-sweeps", "fold_in_sweeps", o.fold_in_sweeps, "Fold-in sweeps on held-out data")
        ->capture_default_str();
    r.add(c->app, "--readout-window", "readout_window", o.readout_window, "Fold-in sweeps averaged into theta")
        ->capture_default_str();
    r.flag(c->app, "--no-timing", "no_timing", o.no_timing, "Write 0 in the seconds column");
    r.add(c->app, "-o,--out", "out", o.out, "Output directory (default: standard output)");
  }
  {
    Command* c = make("graph", "Build the mention graph and its statistics", cmd_graph);
    Registry& r = c->registry;
    r.add(c->app, "-i,--input", "input", o.input, "JSON-lines records");
    r.add(c->app, "--corpus", "corpus", o.corpus, "Corpus snapshot (alternative to --input)");
    r.add(c->app, "-o,--out", "out", o.out, "Output directory");
    r.add(c->app, "--direction", "direction", o.direction, "mentioner_to_mentioned or mentioned_to_mentioner")
        ->capture_default_str();
    r.flag(c->app, "--lcc", "lcc", o.lcc, "Keep only the largest connected component");
    r.flag(c->app, "--metrics", "metrics", o.metrics, "Write node and graph metrics (graph must be connected)");
    r.flag(c->app, "--fit-powerlaw", "fit_powerlaw", o.fit_powerlaw, "Fit a discrete power law to the degrees");
    r.add(c->app, "--degree-mode", "degree_mode", o.degree_mode, "in, out or total")->capture_default_str();
    r.add(c->app, "--xmin", "xmin", o.xmin, "Fixed xmin for the power-law fit (default: KS selection)");
    r.add(c->app, "--powerlaw-method", "powerlaw_method", o.powerlaw_method, "exact or approximate")
        ->capture_default_str();
  }
  {
    Command* c = make("generate", "Sample a synthetic corpus with known parameters", cmd_generate);
    Registry& r = c->registry;
    r.add(c->app, "--process", "process", o.process, "ipm, uipm or cipm")->capture_default_str();
    r.add(c->app, "-o,--out", "out", o.out, "Output directory");
    r.add(c->app, "-K,--topics", "topics", o.gen_topics, "Number of topics")->capture_default_str();
    r.add(c->app, "--words", "words", o.words, "Vocabulary size")->capture_default_str();
    r.add(c->app, "--docs", "docs", o.docs, "Posts (ipm)")->capture_default_str();
    r.add(c->app, "--users", "users", o.users, "Users (uipm, cipm)")->capture_default_str();
    r.add(c->app, "--docs-per-user", "docs_per_user", o.docs_per_user, "Posts per user")->capture_default_str();
    r.add(c->app, "--tokens-per-doc", "tokens_per_doc", o.tokens_per_doc, "Tokens per post")->capture_default_str();
    r.flag(c->app, "--poisson-lengths", "poisson_lengths", o.poisson_lengths, "Poisson post lengths");
    r.add(c->app, "--alpha", "alpha", o.gen_alpha, "Topic prior")->capture_default_str();
    prior_options(c);
    r.add(c->app, "-C,--communities", "communities", o.gen_communities, "Planted blocks (cipm)")
        ->capture_default_str();
    r.add(c->app, "--mentions-per-doc", "mentions_per_doc", o.mentions_per_doc, "Mentions per post (cipm)")
        ->capture_default_str();
    r.add(c->app, "--epsilon", "epsilon", o.epsilon, "Community mass off the planted block (cipm)")
        ->capture_default_str();
    seed_option(c);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  Command* active = nullptr;
  for (auto& [name, cmd] : commands) {
    if (cmd->app->parsed()) active = cmd.get();
  }
  if (active == nullptr) throw ValidationError("no subcommand given");
  const std::string name = active->app->get_name();

  Context ctx{o, Json::object(), out, err, {}};
  // options set on the command line or by the config file
  const auto record_given = [&] {
    for (const CLI::Option* opt : active->app->get_options()) {
      if (opt->count() > 0) ctx.given.insert(opt->get_single_name());
    }
  };
  if (!o.config_path.empty()) active->registry.apply(read_json_file(o.config_path), name);
  record_given();
  if (active->seed != nullptr && active->seed->count() == 0) {
    if (const char* env = std::getenv("MT_SEED")) o.seed = parse_seed_env(env);
  }
  if (o.threads < 0) throw ValidationError("--threads must be >= 0");
  if (o.threads > 0) omp_set_num_threads(o.threads);
  ctx.config = active->registry.resolved(name);
  if ((name == "train" || name == "perplexity") && !ctx.option_given("alpha")) ctx.config["alpha"] = "50/K";
  active->run(ctx);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InternalFault& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace interact
