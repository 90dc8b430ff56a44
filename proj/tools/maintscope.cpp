#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "maintscope/corpus.hpp"
#include "maintscope/pipeline.hpp"

namespace {

using namespace maintscope;

std::string out_path(const PipelineConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.out_dir);
  return (std::filesystem::path(config.out_dir) / name).string();
}

std::vector<DeveloperMetricsRow> load_metrics(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_metrics_csv(in);
}

std::vector<Predictor> category_selection(ChangeCategory c) {
  GlmModel model = builtin_model();
  std::vector<Predictor> sel;
  for (const auto& t : model.category(c).terms) sel.push_back(t.predictor);
  return sel;
}

void print_category_model(const std::string& name, const CategoryModel& cm) {
  std::cout << name << ":\n";
  std::cout << "  constant " << cm.constant << " (se " << cm.constant_std_error << ")\n";
  for (const auto& t : cm.terms) {
    std::cout << "  " << predictor_name(t.predictor) << " " << t.coefficient << " (se "
              << t.std_error << ")\n";
  }
  if (cm.training_r2) std::cout << "  training r2 " << *cm.training_r2 << "\n";
}

int cmd_select(const PipelineConfig& config, const std::string& api_url,
               const std::string& candidates_file, const SelectionCriteria& criteria,
               const std::string& clone_dir) {
  std::vector<RepoCandidate> candidates;
  if (!candidates_file.empty()) {
    candidates = read_candidates(candidates_file);
    std::vector<RepoCandidate> kept;
    for (auto& c : candidates) {
      if (matches(c, criteria)) kept.push_back(std::move(c));
    }
    candidates = std::move(kept);
    if (candidates.size() > criteria.result_cap) candidates.resize(criteria.result_cap);
  } else {
    const char* token = std::getenv("MAINTSCOPE_TOKEN");
    candidates = search(criteria, api_url, token ? token : "");
  }

  write_candidates(candidates, out_path(config, "candidates.jsonl"));
  std::cout << "selected " << candidates.size() << " candidate repositories\n";

  if (!clone_dir.empty()) {
    CloneReport report = clone_all(candidates, clone_dir, config.jobs);
    std::cout << "clones: " << report.succeeded << " succeeded, " << report.failed << " failed\n";
  }
  return 0;
}

int cmd_ingest(const PipelineConfig& config, const std::vector<std::string>& repos) {
  PipelineResult result = collect_pipeline(repos, config);
  // The commit table reflects the ingest stage only; classification is its
  // own subcommand.
  for (auto& c : result.commits) c.categories.clear();
  {
    std::ofstream os(out_path(config, "commits.csv"), std::ios::binary);
    write_commits_csv(os, result.commits);
  }
  {
    std::ofstream os(out_path(config, "changes.tsv"), std::ios::binary);
    write_changes_tsv(os, result.changes, result.change_repo_ids);
  }
  std::cout << result.commits.size() << " commits, " << result.changes.size()
            << " semantic changes from " << result.repos_succeeded << " repositories ("
            << result.repos_failed << " failed)\n";
  return result.exit_code();
}

int cmd_classify(const PipelineConfig& config, const std::string& commits_file) {
  std::ifstream in(commits_file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + commits_file);
  auto rows = read_commits_csv(in);
  KeywordTable table = config.keyword_table();
  ClassifyMode mode = config.multi_label ? ClassifyMode::MultiLabel : ClassifyMode::SingleLabel;
  for (auto& r : rows) r.categories = categories_to_string(classify(r.message, table, mode));
  std::ofstream os(out_path(config, "classified.csv"), std::ios::binary);
  write_commits_csv(os, rows);
  std::cout << "classified " << rows.size() << " commits\n";
  return 0;
}

int cmd_metrics(const PipelineConfig& config, const std::string& commits_file,
                const std::string& changes_file) {
  std::ifstream cin_(commits_file, std::ios::binary);
  if (!cin_) throw std::runtime_error("cannot open " + commits_file);
  auto commits = read_commits_csv(cin_);
  std::ifstream chin(changes_file, std::ios::binary);
  if (!chin) throw std::runtime_error("cannot open " + changes_file);
  auto changes = read_changes_tsv(chin);

  auto rows = aggregate_from_tables(commits, changes);
  std::ofstream os(out_path(config, "metrics.csv"), std::ios::binary);
  write_metrics_csv(os, rows);
  std::cout << rows.size() << " developer rows\n";
  return 0;
}

int cmd_predict(const PipelineConfig& config, const std::string& metrics_file) {
  auto rows = load_metrics(metrics_file);
  GlmModel model = config.model();
  std::vector<DeveloperProfileRow> profiles;
  profiles.reserve(rows.size());
  for (const auto& row : rows) {
    profiles.push_back({row.developer, row.actual, predict(row, model, config.log_floor)});
  }
  std::ofstream os(out_path(config, "profiles.csv"), std::ios::binary);
  write_profiles_csv(os, profiles);
  std::cout << profiles.size() << " developer profiles\n";
  return 0;
}

int cmd_fit(const PipelineConfig& config, const std::string& metrics_file, double train_fraction) {
  auto rows = load_metrics(metrics_file);

  std::vector<RepoId> repos;
  for (const auto& r : rows) repos.push_back(r.developer.repo);
  std::sort(repos.begin(), repos.end());
  repos.erase(std::unique(repos.begin(), repos.end()), repos.end());

  std::vector<DeveloperMetricsRow> train = rows, test;
  if (repos.size() >= 2 && train_fraction < 1.0) {
    RepoSplit split = split_repos(repos, train_fraction, config.seed);
    auto in_set = [](const std::vector<RepoId>& set, const RepoId& id) {
      return std::binary_search(set.begin(), set.end(), id);
    };
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    train.clear();
    for (const auto& r : rows) {
      (in_set(split.train, r.developer.repo) ? train : test).push_back(r);
    }
    std::cout << "split: " << split.train.size() << " train / " << split.test.size()
              << " test repositories\n";
  }

  GlmModel model;
  const ChangeCategory cats[3] = {ChangeCategory::Corrective, ChangeCategory::Perfective,
                                  ChangeCategory::Adaptive};
  for (ChangeCategory c : cats) {
    auto responses = log_responses(train, c, config.log_floor);
    model.category(c) = fit(train, responses, category_selection(c), config.log_floor);
    print_category_model(category_name(c), model.category(c));
  }

  save_model(model, out_path(config, "model.json"));
  std::cout << "model written to " << out_path(config, "model.json") << "\n";

  if (!test.empty()) {
    EvaluationResult ev = evaluate(model, test, config.log_floor);
    std::cout << "holdout r2: corrective " << ev.corrective_r2 << ", perfective "
              << ev.perfective_r2 << ", adaptive " << ev.adaptive_r2 << "\n";
  }
  return 0;
}

int cmd_evaluate(const PipelineConfig& config, const std::string& metrics_file) {
  auto rows = load_metrics(metrics_file);
  GlmModel model = config.model();
  EvaluationResult ev = evaluate(model, rows, config.log_floor);
  std::cout << "r2: corrective " << ev.corrective_r2 << ", perfective " << ev.perfective_r2
            << ", adaptive " << ev.adaptive_r2 << "\n";
  return 0;
}

int cmd_report(const PipelineConfig& config, const std::vector<std::string>& repos) {
  PipelineResult result = run_report(repos, config);
  std::cout << result.repos_succeeded << " repositories processed, " << result.repos_failed
            << " failed; " << result.rows.size() << " developer rows\n";
  return result.exit_code();
}

int cmd_plot_data(const PipelineConfig& config, const std::string& metrics_file, size_t sample) {
  auto rows = load_metrics(metrics_file);
  GlmModel model = config.model();
  std::vector<DeveloperProfileRow> profiles;
  for (const auto& row : rows) {
    profiles.push_back({row.developer, row.actual, predict(row, model, config.log_floor)});
  }
  std::ofstream os(out_path(config, "plot.csv"), std::ios::binary);
  emit_plot_data(os, profiles, std::min(sample, profiles.size()), config.seed);
  std::cout << "plot data for " << std::min(sample, profiles.size()) << " developers\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maintscope: developer-level maintenance activity mining and prediction"};
  app.require_subcommand(1);
  app.set_config("--config", "", "configuration file (key = value, mirrors the flags)");

  PipelineConfig config;
  app.add_option("--jobs", config.jobs, "worker threads")->capture_default_str();
  app.add_option("--seed", config.seed, "seed for sampling and splits")->capture_default_str();
  app.add_option("--out", config.out_dir, "output directory")->capture_default_str();
  app.add_option("--ext", config.ext, "source file extension filter")->capture_default_str();
  app.add_option("--keywords", config.keywords_path, "keyword table override file");
  app.add_flag("--multi-label", config.multi_label, "allow multiple categories per commit");
  app.add_option("--model", config.model_path, "GLM file path or 'builtin'")->capture_default_str();
  app.add_option("--log-floor", config.log_floor, "floor applied before logs of zero-able metrics")
      ->capture_default_str();
  app.add_option("--threshold", config.anomaly_threshold, "anomaly deviation threshold")
      ->capture_default_str();
  app.add_option("--rename-similarity", config.distill.rename_similarity,
                 "body similarity threshold for method rename matching")
      ->capture_default_str();

  // select
  auto* select = app.add_subcommand("select", "query the hosting search API for candidate repos");
  std::string api_url = "https://api.github.com";
  std::string candidates_file;
  std::string clone_dir;
  SelectionCriteria criteria = SelectionCriteria::defaults();
  std::string pushed_since = "2016-01-01", created_before = "2015-01-01";
  select->add_option("--api-url", api_url, "search API base url")->capture_default_str();
  select->add_option("--candidates", candidates_file, "offline candidate list (JSON lines)");
  select->add_option("--clone", clone_dir, "bare-clone accepted candidates into this directory");
  select->add_option("--language", criteria.language)->capture_default_str();
  select->add_option("--min-stars", criteria.min_stars_exclusive, "strict lower bound")
      ->capture_default_str();
  select->add_option("--min-forks", criteria.min_forks_exclusive, "strict lower bound")
      ->capture_default_str();
  select->add_option("--pushed-since", pushed_since, "inclusive date")->capture_default_str();
  select->add_option("--created-before", created_before, "exclusive date")->capture_default_str();
  select->add_option("--min-size-kb", criteria.min_size_kb_exclusive, "strict lower bound")
      ->capture_default_str();
  select->add_option("--cap", criteria.result_cap, "result cap")->capture_default_str();

  // repo-consuming subcommands
  std::vector<std::string> repo_paths;
  auto* ingest = app.add_subcommand("ingest", "extract commits and semantic changes");
  ingest->add_option("repos", repo_paths, "repository paths")->required();
  auto* report = app.add_subcommand("report", "run the full pipeline and write all artifacts");
  report->add_option("repos", repo_paths, "repository paths")->required();

  // table-consuming subcommands
  std::string commits_file, changes_file, metrics_file;
  auto* classify_cmd = app.add_subcommand("classify", "classify commit messages");
  classify_cmd->add_option("--commits", commits_file, "commit table")->required();
  auto* metrics_cmd = app.add_subcommand("metrics", "aggregate developer metrics from tables");
  metrics_cmd->add_option("--commits", commits_file, "classified commit table")->required();
  metrics_cmd->add_option("--changes", changes_file, "semantic change dump")->required();
  auto* predict_cmd = app.add_subcommand("predict", "predict maintenance profiles");
  predict_cmd->add_option("--metrics", metrics_file, "metrics table")->required();
  double train_fraction = 0.9;
  auto* fit_cmd = app.add_subcommand("fit", "fit a fresh GLM on a metrics table");
  fit_cmd->add_option("--metrics", metrics_file, "metrics table")->required();
  fit_cmd->add_option("--train-fraction", train_fraction, "by-repository train share")
      ->capture_default_str();
  auto* evaluate_cmd = app.add_subcommand("evaluate", "holdout R^2 of a model on a metrics table");
  evaluate_cmd->add_option("--metrics", metrics_file, "metrics table")->required();
  size_t plot_sample = 150;
  auto* plot_cmd = app.add_subcommand("plot-data", "emit actual-vs-predicted plot data");
  plot_cmd->add_option("--metrics", metrics_file, "metrics table")->required();
  plot_cmd->add_option("--sample", plot_sample, "developers to sample")->capture_default_str();

  // Global flags may follow the subcommand name.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (select->parsed()) {
      criteria.pushed_on_or_after = maintscope::parse_utc(pushed_since);
      criteria.created_before = maintscope::parse_utc(created_before);
      return cmd_select(config, api_url, candidates_file, criteria, clone_dir);
    }
    if (ingest->parsed()) return cmd_ingest(config, repo_paths);
    if (classify_cmd->parsed()) return cmd_classify(config, commits_file);
    if (metrics_cmd->parsed()) return cmd_metrics(config, commits_file, changes_file);
    if (predict_cmd->parsed()) return cmd_predict(config, metrics_file);
    if (fit_cmd->parsed()) return cmd_fit(config, metrics_file, train_fraction);
    if (evaluate_cmd->parsed()) return cmd_evaluate(config, metrics_file);
    if (report->parsed()) return cmd_report(config, repo_paths);
    if (plot_cmd->parsed()) return cmd_plot_data(config, metrics_file, plot_sample);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
