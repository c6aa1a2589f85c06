// hgrec: reviewer recommendation from pull-request history.
//
//   hgrec ingest   export.jsonl -o corpus.json
//   hgrec stats    corpus.json
//   hgrec recommend corpus.json --files src/net/x.c --contributor alice
//   hgrec evaluate corpus.json --recommenders hgrec,ac --output-dir out
//
// Exit codes: 0 success, 1 internal error, 2 user or data error.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hgrec/hgrec.hpp"

namespace {

using namespace hgrec;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitData = 2;

// Flags override the config file, which overrides the defaults. Each bound
// flag records how to copy its parsed value onto the effective config.
struct Overrides {
  RunConfig cli;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> apply;

  template <class Field>
  CLI::Option* add(CLI::App& app, const std::string& name, Field RunConfig::*field, const std::string& help) {
    auto* opt = app.add_option(name, cli.*field, help)->capture_default_str();
    apply.emplace_back(opt, [this, field](RunConfig& c) { c.*field = cli.*field; });
    return opt;
  }

  template <class Field>
  CLI::Option* add_param(CLI::App& app, const std::string& name, Field HyperParams::*field, const std::string& help) {
    auto* opt = app.add_option(name, cli.params.*field, help)->capture_default_str();
    apply.emplace_back(opt, [this, field](RunConfig& c) { c.params.*field = cli.params.*field; });
    return opt;
  }
};

struct Command {
  CLI::App* app = nullptr;
  Overrides ov;
  std::string config_path;
  std::string write_config;
  std::size_t jobs = default_jobs();
  std::string solver = "auto";
  std::string similarity_unit = "components";
  CLI::Option* solver_opt = nullptr;
  CLI::Option* unit_opt = nullptr;
  RunConfig defaults;

  RunConfig effective() {
    RunConfig c = defaults;
    if (!config_path.empty()) {
      auto j = nlohmann::json::parse(read_file(config_path), nullptr, false);
      if (j.is_discarded()) throw DataError(config_path + ": malformed JSON");
      try {
        c = config_from_json(j, defaults);
      } catch (const DataError& e) {
        throw DataError(config_path + ": " + e.what());
      }
    }
    for (auto& [opt, fn] : ov.apply) {
      if (opt->count() > 0) fn(c);
    }
    if (solver_opt && solver_opt->count() > 0) {
      const auto s = parse_solver_kind(solver);
      if (!s) throw DataError("unknown solver '" + solver + "'");
      c.params.solver = *s;
    }
    if (unit_opt && unit_opt->count() > 0) {
      const auto u = parse_similarity_unit(similarity_unit);
      if (!u) throw DataError("unknown similarity unit '" + similarity_unit + "'");
      c.params.similarity_unit = *u;
    }
    c.validate();
    if (jobs < 1) throw DataError("--jobs must be at least 1");
    if (!write_config.empty()) write_file(write_config, to_json(c).dump(2) + "\n");
    return c;
  }
};

void add_input_options(Command& cmd, bool positional_input) {
  auto& app = *cmd.app;
  if (positional_input) {
    cmd.ov.add(app, "input,--input", &RunConfig::input, "Raw JSONL export or corpus artifact (default: none)");
  }
  cmd.ov.add(app, "--bots", &RunConfig::bots, "File of bot account regexes, one per line (default: '\\[bot\\]$')");
  cmd.ov.add(app, "--exclude", &RunConfig::exclude, "File of account ids to drop, one per line (default: none)");
  cmd.ov.add(app, "--min-reviews", &RunConfig::min_reviews, "Reviewers need comments on this many distinct PRs");
  app.add_option("--config", cmd.config_path, "JSON run config; flags override its values (default: none)");
  app.add_option("--write-config", cmd.write_config, "Write the effective run config to this file (default: none)");
}

void add_param_options(Command& cmd) {
  auto& app = *cmd.app;
  cmd.ov.add_param(app, "--alpha", &HyperParams::alpha, "Ranking smoothness trade-off, in (0,1)");
  cmd.ov.add_param(app, "--m", &HyperParams::m, "PR-PR neighbours kept per PR, in [1,100]");
  cmd.ov.add_param(app, "--lambda", &HyperParams::lambda, "Per-comment decay of the PR-Reviewer weight, in (0,1]");
  cmd.ov.add_param(app, "--tol", &HyperParams::tol, "Iterative solver tolerance (max-norm)");
  cmd.ov.add_param(app, "--max-iter", &HyperParams::max_iter, "Iterative solver iteration cap");
  cmd.solver_opt = app.add_option("--solver", cmd.solver, "direct, iterative or auto")
                       ->check(CLI::IsMember({"direct", "iterative", "auto"}))
                       ->capture_default_str();
  cmd.unit_opt = app.add_option("--similarity-unit", cmd.similarity_unit, "Path similarity unit: components or chars")
                     ->check(CLI::IsMember({"components", "chars"}))
                     ->capture_default_str();
  app.add_option("--jobs", cmd.jobs, "Worker threads")->capture_default_str();
}

CleanOptions clean_options(const RunConfig& c) {
  CleanOptions o;
  if (!c.bots.empty()) o.bot_patterns = read_list_file(c.bots);
  if (!c.exclude.empty()) o.excluded_accounts = read_list_file(c.exclude);
  o.min_reviews = c.min_reviews;
  return o;
}

ReviewCorpus load(const RunConfig& c) {
  if (c.input.empty()) throw DataError("no input given");
  return load_corpus(c.input, clean_options(c));
}

nlohmann::json stats_block(const ReviewCorpus& corpus) {
  auto j = stats_json(corpus.stats());
  j["t_s"] = format_rfc3339(corpus.t_s());
  j["t_e"] = format_rfc3339(corpus.t_e());
  j["months"] = span_months(corpus);
  return j;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

TargetPR read_target_file(const std::string& path) {
  auto j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DataError(path + ": target must be a JSON object");
  TargetPR t;
  t.id = j.value("id", std::string("target"));
  t.contributor = j.value("contributor", std::string{});
  if (!j.contains("created_at")) throw DataError(path + ": missing \"created_at\"");
  t.created_at = parse_rfc3339(j.at("created_at").get<std::string>());
  if (!j.contains("files") || !j.at("files").is_array()) throw DataError(path + ": missing \"files\" array");
  for (const auto& f : j.at("files")) t.file_paths.push_back(f.get<std::string>());
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reviewer recommendation for pull requests"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hgrec 1.0.0");

  // ingest
  Command ingest;
  ingest.app = app.add_subcommand("ingest", "Clean a JSONL export into a corpus artifact");
  add_input_options(ingest, true);
  std::string ingest_out = "corpus.json";
  ingest.app->add_option("-o,--output", ingest_out, "Corpus artifact path")->capture_default_str();

  // stats
  Command stats;
  stats.app = app.add_subcommand("stats", "Print PR, comment, reviewer and contributor counts");
  add_input_options(stats, true);

  // recommend
  Command rec;
  rec.app = app.add_subcommand("recommend", "Recommend reviewers for one PR");
  add_input_options(rec, true);
  add_param_options(rec);
  std::string recommender = "hgrec";
  std::size_t top_k = 5;
  std::string files;
  std::string contributor;
  std::string time;
  std::string target_file;
  std::string target_id = "target";
  std::string graph_out;
  rec.app->add_option("--recommender", recommender, "hgrec, ac, revfinder, chrev or cn")
      ->check(CLI::IsMember(recommender_names()))
      ->capture_default_str();
  rec.app->add_option("--top-k", top_k, "Number of reviewers to list")->capture_default_str();
  rec.app->add_option("--files", files, "Comma-separated changed file paths (default: none)");
  rec.app->add_option("--contributor", contributor, "Author of the PR (default: none)");
  rec.app->add_option("--time", time, "PR creation time, RFC 3339 (default: end of the history)");
  rec.app->add_option("--id", target_id, "Id given to the target PR")->capture_default_str();
  rec.app->add_option("--target", target_file, "JSON file with id, contributor, created_at and files (default: none)");
  rec.app->add_option("--graph-out", graph_out, "Write the grafted hypergraph as JSON (hgrec only) (default: none)");

  // evaluate / compare
  Command eval;
  Command compare;
  bool quiet = false;
  std::vector<std::size_t> ks_cli;
  compare.defaults.recommenders = recommender_names();
  compare.ov.cli.recommenders = recommender_names();
  for (auto* cmd : {&eval, &compare}) {
    const bool is_compare = cmd == &compare;
    cmd->app = app.add_subcommand(is_compare ? "compare" : "evaluate",
                                  is_compare ? "Evaluate two or more recommenders with pairwise Wilcoxon tests"
                                             : "Run the monthly expanding-window evaluation");
    add_input_options(*cmd, true);
    add_param_options(*cmd);
    cmd->ov.add(*cmd->app, "--recommenders", &RunConfig::recommenders, "Recommenders to run")
        ->delimiter(',')
        ->check(CLI::IsMember(recommender_names()));
    cmd->ov.add(*cmd->app, "--ks", &RunConfig::ks, "Cut-offs k")->delimiter(',');
    cmd->ov.add(*cmd->app, "--initial-months", &RunConfig::initial_months, "Months in the first training window");
    cmd->ov.add(*cmd->app, "--max-rounds", &RunConfig::max_rounds, "Maximum number of monthly rounds");
    cmd->ov.add(*cmd->app, "--output-dir", &RunConfig::output_dir, "Directory for report.csv and summary.json");
    cmd->ov.add(*cmd->app, "--ac-window-days", &RunConfig::ac_window_days, "AC-s activity window");
    cmd->ov.add(*cmd->app, "--cn-decay", &RunConfig::cn_decay, "CN-s per-interaction decay");
    auto* flag = cmd->app->add_flag("--rd-global-n", cmd->ov.cli.rd_global_n,
                                    "Use the whole corpus's reviewer count in RD instead of the round's");
    cmd->ov.apply.emplace_back(flag, [cmd](RunConfig& c) { c.rd_global_n = cmd->ov.cli.rd_global_n; });
    cmd->app->add_flag("-q,--quiet", quiet, "Suppress the per-round log");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitData;
  }

  try {
    if (ingest.app->parsed()) {
      const RunConfig c = ingest.effective();
      const ReviewCorpus corpus = load(c);
      save_corpus(ingest_out, corpus, hex64(fnv1a(read_file(c.input))));
      std::cout << stats_block(corpus).dump(2) << "\n";
    } else if (stats.app->parsed()) {
      const RunConfig c = stats.effective();
      std::cout << stats_block(load(c)).dump(2) << "\n";
    } else if (rec.app->parsed()) {
      const RunConfig c = rec.effective();
      if (top_k < 1) throw DataError("--top-k must be at least 1");
      auto corpus = std::make_shared<const ReviewCorpus>(load(c));
      TargetPR target;
      if (!target_file.empty()) {
        target = read_target_file(target_file);
      } else {
        target.id = target_id;
        target.contributor = contributor;
        target.file_paths = split_list(files);
        target.created_at = time.empty() ? corpus->t_e() : parse_rfc3339(time);
      }
      if (target.contributor.empty()) throw DataError("the target PR needs a contributor");
      if (target.file_paths.empty()) throw DataError("the target PR has no changed files");
      std::sort(target.file_paths.begin(), target.file_paths.end());
      target.file_paths.erase(std::unique(target.file_paths.begin(), target.file_paths.end()), target.file_paths.end());

      Recommendation result;
      if (recommender == "hgrec") {
        const Hypergraph base = build(*corpus, c.params, rec.jobs);
        result = hgrec::recommend(base, *corpus, target, c.params, top_k);
        if (!graph_out.empty()) write_file(graph_out, to_json(graft(base, *corpus, target, c.params)).dump(1) + "\n");
      } else {
        const BaselineOptions b{c.ac_window_days, c.cn_decay};
        result = make_recommender(recommender, c.params, b).train(corpus)(target, top_k);
      }
      nlohmann::json list = nlohmann::json::array();
      for (std::size_t i = 0; i < result.candidates.size(); ++i) {
        list.push_back({{"rank", i + 1},
                        {"developer", result.candidates[i].developer},
                        {"score", round_g9(result.candidates[i].score)}});
      }
      nlohmann::json out{{"target", target.id},
                         {"recommender", make_recommender(recommender, c.params).label},
                         {"k", top_k},
                         {"candidates", list}};
      std::cout << out.dump(2) << "\n";
    } else {
      Command& cmd = eval.app->parsed() ? eval : compare;
      const RunConfig c = cmd.effective();
      if (&cmd == &compare && c.recommenders.size() < 2) throw DataError("compare needs at least two recommenders");
      const ReviewCorpus corpus = load(c);
      std::vector<RecommenderSpec> specs;
      const BaselineOptions b{c.ac_window_days, c.cn_decay};
      for (const auto& name : c.recommenders) specs.push_back(make_recommender(name, c.params, b));
      EvaluationOptions opts;
      opts.ks = c.ks;
      opts.initial_months = c.initial_months;
      opts.max_rounds = c.max_rounds;
      opts.jobs = cmd.jobs;
      opts.rd_global_n = c.rd_global_n;
      opts.log = quiet ? nullptr : &std::cerr;
      const EvaluationReport report = run_comparison(corpus, specs, opts);

      std::filesystem::create_directories(c.output_dir);
      std::ostringstream csv;
      write_csv(csv, report);
      write_file((std::filesystem::path(c.output_dir) / "report.csv").string(), csv.str());
      auto summary = summary_json(report);
      summary["config"] = to_json(c);
      write_file((std::filesystem::path(c.output_dir) / "summary.json").string(), summary.dump(2) + "\n");

      print_average_table(std::cout, report);
      if (!report.tests.empty()) {
        std::cout << "\nWilcoxon signed-rank vs " << report.tests.front().reference << " (per-round pairs)\n";
        for (const auto& t : report.tests) {
          std::cout << "  " << t.other << " " << t.metric << "@" << t.k << ": " << to_string(t.result.verdict)
                    << " (p> " << format_g9(t.result.p_greater) << ", p< " << format_g9(t.result.p_less)
                    << ", n=" << t.result.n << ")\n";
        }
      }
    }
  } catch (const DataError& e) {
    std::cerr << "hgrec: " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "hgrec: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "hgrec: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
