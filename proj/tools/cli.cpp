#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "bisam/adaptive.hpp"
#include "bisam/dataset.hpp"
#include "bisam/errors.hpp"
#include "bisam/exact.hpp"
#include "bisam/iobisam.hpp"
#include "bisam/report.hpp"
#include "bisam/sampler.hpp"
#include "bisam/stats.hpp"

namespace bisam::cli {

namespace {

namespace fs = std::filesystem;
using report::Format;

struct Options {
  std::string input;
  std::string measure = "cosine";
  double delta = 0.0;
  Count mu = kDefaultMu;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  std::string format = "table";
  std::string output;
  double report_threshold = 0.0;
  CLI::Option* report_threshold_opt = nullptr;

  // compare / exact
  std::string mode = "observed";
  Count pair_budget = kDefaultPairBudget;

  // errors
  std::vector<Count> mus{3, 5, 10, 15, 20, 30};
  std::vector<double> ratios;

  // gen
  bool independent = false;
  Count n = 100;
  Count m = 1000;
  double p = 0.1;
  double p_min = 0.0;
  double p_max = 0.0;
  CLI::Option* p_range_opt = nullptr;

  // adaptive
  Count top_k = 0;
  double min_delta = 0.0;
  CLI::Option* top_k_opt = nullptr;
  CLI::Option* min_delta_opt = nullptr;

  // iomine
  Count memory_budget = 1u << 20;
  Count page_size = 1024;
  std::string scratch_dir;
  std::string report_file;
};

// Database with ids mapped onto [0, n) when the input ids are sparse. The
// remapping preserves id order, so results map back unchanged.
struct Loaded {
  TransactionDatabase db;
  std::vector<ItemId> original_ids;

  [[nodiscard]] ItemId original(ItemId id) const {
    return original_ids.empty() ? id : original_ids[id];
  }
  [[nodiscard]] PairKey original(PairKey p) const { return {original(p.first), original(p.second)}; }
};

Loaded load(const std::string& path) {
  Loaded out;
  out.db = read_transactions(path);
  if (out.db.empty()) {
    throw ConfigError(fmt::format("'{}' contains no transactions", path));
  }
  if (out.db.universe() > out.db.distinct_items()) {
    auto dense = densify(out.db);
    out.db = std::move(dense.db);
    out.original_ids = std::move(dense.original_ids);
  }
  return out;
}

SamplingConfig sampling_config(const Options& o) {
  SamplingConfig c;
  c.measure = parse_measure(o.measure);
  c.delta = o.delta;
  c.mu = o.mu;
  c.seed = o.seed;
  if (o.report_threshold_opt != nullptr && o.report_threshold_opt->count() > 0) {
    c.report_threshold = o.report_threshold;
  }
  return c;
}

report::RunInfo run_info(const SamplingConfig& c) {
  return {c.measure.name(), c.delta, c.mu, c.seed};
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output);
  if (!file) {
    throw IoError(fmt::format("cannot create '{}'", o.output));
  }
  file << text;
  if (!file) {
    throw IoError(fmt::format("write to '{}' failed", o.output));
  }
}

Format format_of(const Options& o) { return report::parse_format(o.format); }

void command_stats(const Options& o, std::ostream& out) {
  const auto db = read_transactions(o.input);
  if (db.empty()) {
    throw ConfigError(fmt::format("'{}' contains no transactions", o.input));
  }
  emit(o, report::render(dataset_stats(db), format_of(o)), out);
}

void command_errors(const Options& o, std::ostream& out) {
  std::vector<ErrorProfile> rows;
  for (const Count mu : o.mus) {
    rows.push_back(error_profile(mu, o.ratios));
  }
  emit(o, report::render(rows, format_of(o)), out);
}

void command_mine(const Options& o, std::ostream& out) {
  const Format format = format_of(o);
  const SamplingConfig config = sampling_config(o);
  config.validate();
  const Loaded data = load(o.input);
  const BiSamResult result = run_bisam(data.db, config, o.threads);
  report::MiningReport r;
  r.run = run_info(config);
  r.cost = result.cost;
  for (auto p : result.report) {
    p.pair = data.original(p.pair);
    r.pairs.push_back(p);
  }
  emit(o, report::render(r, format), out);
}

void command_exact(const Options& o, std::ostream& out) {
  const Format format = format_of(o);
  const MeasureSpec measure = parse_measure(o.measure);
  if (!(o.delta > 0.0)) {
    throw ConfigError("threshold must be positive");
  }
  const Loaded data = load(o.input);
  const ExactResult exact = count_all_pairs(data.db, o.pair_budget, o.threads);
  report::ExactPairsReport r;
  r.measure = measure.name();
  r.delta = o.delta;
  r.exact_time = exact.exact_time;
  r.exact_space = exact.exact_space;
  for (const auto& s : similar_pairs(exact, measure, o.delta)) {
    r.pairs.push_back({data.original(s.pair), s.cooccurrences, s.similarity});
  }
  emit(o, report::render(r, format), out);
}

void command_compare(const Options& o, std::ostream& out, std::ostream& err) {
  const Format format = format_of(o);
  const SamplingConfig config = sampling_config(o);
  config.validate();
  if (o.mode != "observed" && o.mode != "expectation") {
    throw ConfigError(fmt::format("unknown mode '{}'", o.mode));
  }
  const Loaded data = load(o.input);
  const PreparedDatabase prepared(data.db, o.threads);

  std::optional<ExactResult> exact;
  try {
    exact = count_all_pairs(prepared, o.pair_budget, o.threads);
  } catch (const ResourceError& e) {
    err << fmt::format("note: {}; exact columns unavailable, BiSam measured directly\n",
                       e.what());
  }

  report::CompareReport r;
  r.dataset = fs::path(o.input).filename().string();
  r.run = run_info(config);
  const Count n = data.db.distinct_items();
  r.lsh_comparisons = n * (n == 0 ? 0 : n - 1) / 2;
  if (exact && o.mode == "expectation") {
    r.cost = expected_cost_report(*exact, config);
  } else {
    r.cost = run_bisam(prepared, config, o.threads).cost;
    if (exact) {
      r.cost.exact_time = exact->exact_time;
      r.cost.exact_space = exact->exact_space;
    }
  }
  emit(o, report::render(r, format), out);
}

void command_gen(const Options& o, std::ostream& out) {
  if (!o.independent) {
    throw ConfigError("gen needs a model; only --independent is available");
  }
  IndependentModel model;
  model.n = o.n;
  model.m = o.m;
  model.seed = o.seed;
  if (o.p_range_opt != nullptr && o.p_range_opt->count() > 0) {
    model.probabilities = uniform_probabilities(o.n, o.p_min, o.p_max, o.seed);
  } else {
    model.probabilities.assign(o.n, o.p);
  }
  const auto db = generate_independent(model, o.threads);
  if (o.output.empty()) {
    write_transactions(out, db);
  } else {
    write_transactions(fs::path(o.output), db);
  }
}

void command_adaptive(const Options& o, std::ostream& out) {
  const Format format = format_of(o);
  const bool by_count = o.top_k_opt->count() > 0;
  const bool by_delta = o.min_delta_opt->count() > 0;
  if (by_count == by_delta) {
    throw ConfigError("give exactly one of --top-k and --min-delta");
  }
  if (o.mu == 0) {
    throw ConfigError("mu must be at least 1");
  }
  const MeasureSpec measure = parse_measure(o.measure);
  const Loaded data = load(o.input);
  const PreparedDatabase prepared(data.db, o.threads);
  const StopCriterion stop =
      by_count ? StopCriterion::top_k(o.top_k) : StopCriterion::at_delta(o.min_delta);
  const AdaptiveResult result = stream_pairs_adaptive(prepared, measure, o.mu, o.seed, stop);
  report::AdaptiveReport r;
  r.run = {measure.name(), by_delta ? o.min_delta : 0.0, o.mu, o.seed};
  r.stop = by_count ? fmt::format("top-k {}", o.top_k)
                    : fmt::format("min-delta {}", report::number(o.min_delta));
  r.stop_delta = result.stop_delta;
  r.peak_queue_size = result.peak_queue_size;
  for (auto e : result.stream) {
    e.pair = data.original(e.pair);
    r.emissions.push_back(e);
  }
  for (auto rp : result.report) {
    rp.pair = data.original(rp.pair);
    r.reported.push_back(rp);
  }
  emit(o, report::render(r, format), out);
}

void command_iomine(const Options& o, std::ostream& out) {
  const Format format = format_of(o);
  IOConfig io;
  io.memory_budget = o.memory_budget;
  io.page_size = o.page_size;
  io.scratch_dir = o.scratch_dir;
  io.sampling = sampling_config(o);
  io.validate();
  std::optional<fs::path> report_file;
  if (!o.report_file.empty()) report_file = o.report_file;
  const IOBiSamResult result = run_io_bisam(o.input, io, report_file);
  report::IOMiningReport r;
  r.run = run_info(io.sampling);
  r.memory_budget = io.memory_budget;
  r.page_size = io.page_size;
  r.pairs = result.report;
  r.cost = result.cost;
  r.page_bound = io_bound(result.cost.item_records, result.cost.sampled_pairs, io.budget());
  emit(o, report::render(r, format), out);
}

void add_format(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  cmd->add_option("-o,--output", o.output, "Write the report to this file");
}

void add_sampling(CLI::App* cmd, Options& o, bool delta_required) {
  cmd->add_option("--measure", o.measure,
                  "lift, cosine, jaccard, all_confidence, dice, overlap_coef, or a "
                  "composite such as min(2*cosine@0.7,lift@2)")
      ->capture_default_str();
  auto* delta = cmd->add_option("--delta", o.delta, "Similarity threshold");
  if (delta_required) delta->required();
  cmd->add_option("--mu", o.mu, "Expected samples of a pair at the threshold")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  o.report_threshold_opt = cmd->add_option("--report-threshold", o.report_threshold,
                                           "Report pairs with more samples than this (mu/2)");
}

void add_threads(CLI::App* cmd, Options& o) {
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores, 1 = serial)")
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Biased pair sampling for similar-pair mining", "bisam"};
  app.require_subcommand(1);
  Options o;

  auto* stats = app.add_subcommand("stats", "Dataset key figures");
  stats->add_option("input", o.input, "FIMI file (.gz accepted)")->required();
  add_format(stats, o);

  auto* errors = app.add_subcommand("errors", "False-negative and false-positive probabilities");
  errors->add_option("--mu", o.mus, "Values of mu")->delimiter(',')->capture_default_str();
  errors->add_option("--ratios", o.ratios, "Similarity ratios s/delta for false positives")
      ->delimiter(',');
  add_format(errors, o);

  auto* mine = app.add_subcommand("mine", "Report similar pairs by biased sampling");
  mine->add_option("input", o.input, "FIMI file (.gz accepted)")->required();
  add_sampling(mine, o, true);
  add_threads(mine, o);
  add_format(mine, o);

  auto* exact = app.add_subcommand("exact", "Similar pairs by counting every pair");
  exact->add_option("input", o.input, "FIMI file (.gz accepted)")->required();
  exact->add_option("--measure", o.measure, "Similarity measure")->capture_default_str();
  exact->add_option("--delta", o.delta, "Similarity threshold")->required();
  exact->add_option("--pair-budget", o.pair_budget, "Largest pair table allowed")
      ->capture_default_str();
  add_threads(exact, o);
  add_format(exact, o);

  auto* compare = app.add_subcommand("compare", "Time and space of sampling against counting");
  compare->add_option("input", o.input, "FIMI file (.gz accepted)")->required();
  add_sampling(compare, o, true);
  compare->add_option("--mode", o.mode, "observed or expectation")
      ->check(CLI::IsMember({"observed", "expectation"}))
      ->capture_default_str();
  compare->add_option("--pair-budget", o.pair_budget, "Largest pair table allowed")
      ->capture_default_str();
  add_threads(compare, o);
  add_format(compare, o);

  auto* gen = app.add_subcommand("gen", "Generate a synthetic FIMI database");
  gen->add_flag("--independent", o.independent, "Independent-items model");
  gen->add_option("--n", o.n, "Items")->capture_default_str();
  gen->add_option("--m", o.m, "Transactions")->capture_default_str();
  auto* p = gen->add_option("--p", o.p, "Probability of every item")->capture_default_str();
  o.p_range_opt =
      gen->add_option_function<std::vector<double>>(
             "--p-range",
             [&o](const std::vector<double>& v) {
               o.p_min = v.at(0);
               o.p_max = v.at(1);
             },
             "Draw each item's probability uniformly from LO,HI")
          ->expected(2)
          ->delimiter(',');
  p->excludes(o.p_range_opt);
  gen->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  gen->add_option("-o,--output", o.output, "Write to this file instead of stdout");
  add_threads(gen, o);

  auto* adaptive = app.add_subcommand("adaptive", "Stream sampled pairs by decreasing threshold");
  adaptive->add_option("input", o.input, "FIMI file (.gz accepted)")->required();
  adaptive->add_option("--measure", o.measure, "Similarity measure")->capture_default_str();
  adaptive->add_option("--mu", o.mu, "Expected samples of a pair at the threshold")
      ->capture_default_str();
  adaptive->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  o.top_k_opt = adaptive->add_option("--top-k", o.top_k, "Stop after this many samples");
  o.min_delta_opt =
      adaptive->add_option("--min-delta", o.min_delta, "Stop when the threshold falls below this");
  o.top_k_opt->excludes(o.min_delta_opt);
  add_threads(adaptive, o);
  add_format(adaptive, o);

  auto* iomine = app.add_subcommand("iomine", "External-memory mining under a memory budget");
  iomine->add_option("input", o.input, "FIMI file (.gz accepted)")->required();
  add_sampling(iomine, o, true);
  iomine->add_option("--memory-budget", o.memory_budget, "Records held in memory (M)")
      ->capture_default_str();
  iomine->add_option("--page-size", o.page_size, "Records per page (B)")->capture_default_str();
  iomine->add_option("--scratch-dir", o.scratch_dir, "Parent directory for scratch files");
  iomine->add_option("--report-file", o.report_file, "Also write the binary pair report here");
  add_format(iomine, o);

  std::vector<const char*> argv{"bisam"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (stats->parsed()) command_stats(o, out);
    if (errors->parsed()) command_errors(o, out);
    if (mine->parsed()) command_mine(o, out);
    if (exact->parsed()) command_exact(o, out);
    if (compare->parsed()) command_compare(o, out, err);
    if (gen->parsed()) command_gen(o, out);
    if (adaptive->parsed()) command_adaptive(o, out);
    if (iomine->parsed()) command_iomine(o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

}  // namespace bisam::cli
