#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "maintscope/classify.hpp"
#include "maintscope/distill.hpp"
#include "maintscope/git_repo.hpp"
#include "maintscope/glm.hpp"
#include "maintscope/metrics.hpp"

namespace maintscope {

// Runs fn(0..n-1) on a bounded pool; results keyed by index stay
// deterministic for any worker count.
void parallel_map(size_t n, unsigned jobs, const std::function<void(size_t)>& fn);

struct PipelineConfig {
  unsigned jobs = 1;
  uint64_t seed = 42;
  std::string out_dir = ".";
  std::string ext = ".java";
  std::string keywords_path;  // empty: built-in table
  bool multi_label = false;
  std::string model_path = "builtin";
  double log_floor = 0.001;
  double anomaly_threshold = 1.0;
  size_t plot_sample = 150;
  DistillOptions distill;

  KeywordTable keyword_table() const;
  GlmModel model() const;
};

// One line of the persisted commit table (commits.csv / classified.csv).
struct CommitTableRow {
  RepoId repo;
  std::string commit_id;
  std::string developer_key;
  int64_t timestamp = 0;
  int parent_count = 0;
  std::string categories;  // "", "corrective", "corrective|adaptive", "unclassified"
  std::string message;
};

struct DeveloperProfileRow {
  DeveloperId developer;
  ProfileCounts actual;
  MaintenanceProfile predicted;
};

struct ProjectProfile {
  RepoId repo;
  size_t developer_count = 0;
  ProfileCounts actual;
  double corrective_predicted = 0.0;
  double perfective_predicted = 0.0;
  double adaptive_predicted = 0.0;
};

struct AnomalyRecord {
  DeveloperId developer;
  ChangeCategory category;
  double actual = 0.0;
  double predicted = 0.0;
  double deviation_score = 0.0;  // |actual - predicted| / max(predicted, 1)
};

struct PipelineResult {
  size_t repos_succeeded = 0;
  size_t repos_failed = 0;
  std::vector<CommitTableRow> commits;
  std::vector<SemanticChange> changes;      // with repo attribution in dump file
  std::vector<std::string> change_repo_ids; // parallel to changes
  std::vector<DeveloperMetricsRow> rows;
  std::vector<DeveloperProfileRow> profiles;

  int exit_code() const { return repos_succeeded > 0 ? 0 : 2; }
};

// ingest -> distill -> classify -> aggregate -> predict for every repo, with
// per-repo failure isolation; no files written.
PipelineResult collect_pipeline(const std::vector<std::string>& repo_paths,
                                const PipelineConfig& config);

// collect_pipeline plus commits.csv, changes.tsv, metrics.csv and
// profiles.csv in config.out_dir.
PipelineResult run_pipeline(const std::vector<std::string>& repo_paths,
                            const PipelineConfig& config);

// run_pipeline plus projects.csv, anomalies.csv and plot.csv.
PipelineResult run_report(const std::vector<std::string>& repo_paths, const PipelineConfig& config);

// Project profile of one repository's rows (actuals are column sums; the
// predicted totals sum the developers' count estimates).
ProjectProfile aggregate_project(const std::vector<DeveloperProfileRow>& profiles);
std::vector<ProjectProfile> aggregate_projects(const std::vector<DeveloperProfileRow>& profiles);

std::vector<AnomalyRecord> detect_anomalies(const std::vector<DeveloperProfileRow>& profiles,
                                            double threshold);

void emit_plot_data(std::ostream& os, const std::vector<DeveloperProfileRow>& profiles,
                    size_t sample_size, uint64_t seed);

// ---- persisted table IO ----

void write_commits_csv(std::ostream& os, const std::vector<CommitTableRow>& rows);
std::vector<CommitTableRow> read_commits_csv(std::istream& is);

// Pipeline dump line: repo_id \t commit_id \t file \t change_type \t entity.
void write_changes_tsv(std::ostream& os, const std::vector<SemanticChange>& changes,
                       const std::vector<std::string>& repo_ids);
struct DumpedChange {
  std::string repo_id;
  SemanticChange change;
};
std::vector<DumpedChange> read_changes_tsv(std::istream& is);

// The distiller's own 4-column debug-dump format.
std::string format_change_dump_line(const SemanticChange& change);

void write_profiles_csv(std::ostream& os, const std::vector<DeveloperProfileRow>& profiles);
void write_projects_csv(std::ostream& os, const std::vector<ProjectProfile>& projects);
void write_anomalies_csv(std::ostream& os, const std::vector<AnomalyRecord>& anomalies);

// Recomputes metric rows from the persisted commit table and change dump;
// the result matches the in-process aggregation exactly.
std::vector<DeveloperMetricsRow> aggregate_from_tables(const std::vector<CommitTableRow>& commits,
                                                       const std::vector<DumpedChange>& changes);

std::string categories_to_string(const CategorySet& set);
CategorySet categories_from_string(const std::string& s);

}  // namespace maintscope
