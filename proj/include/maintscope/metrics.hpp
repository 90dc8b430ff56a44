#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "maintscope/classify.hpp"
#include "maintscope/distill.hpp"
#include "maintscope/git_repo.hpp"

namespace maintscope {

// Set of distinct change types in one commit, as a 20-bit mask.
using ChangeTypeSet = uint32_t;

ChangeTypeSet make_change_type_set(const std::vector<SemanticChange>& changes);
int change_type_set_size(ChangeTypeSet set);

// Commit versatility: number of distinct change types in the commit.
inline int commit_versatility(ChangeTypeSet set) { return change_type_set_size(set); }

struct VersatilityMeasures {
  int64_t developer_versatility = 0;
  int64_t muse = 0;
  double mean_commit_versatility = 0.0;
  int64_t versatility_level = 0;
};

// Versatility measures over all of a developer's commit change-type sets.
VersatilityMeasures developer_versatility_measures(const std::vector<ChangeTypeSet>& commit_sets);

struct TemporalMeasures {
  double contrib_start_rel = 0.0;
  double contrib_duration = 0.0;
  double mtbc = 0.0;
};

// From sufficient statistics of a developer's commit timestamps. A first
// commit that predates the repository start (rebase artifacts) clamps
// contrib_start_rel to 0 with a diagnostic.
TemporalMeasures temporal_measures(int64_t first_ts, int64_t last_ts, int64_t commit_count,
                                   int64_t repo_first_ts, const std::string& repo_id = "",
                                   const std::string& developer = "");
TemporalMeasures temporal_measures(const std::vector<int64_t>& timestamps, int64_t repo_first_ts);

struct ProfileCounts {
  int64_t corrective = 0;
  int64_t perfective = 0;
  int64_t adaptive = 0;
  int64_t unclassified = 0;
  bool operator==(const ProfileCounts&) const = default;
};

struct DeveloperMetricsRow {
  DeveloperId developer;
  int64_t commits = 0;
  int64_t developer_versatility = 0;  // |union of commit change-type sets|
  int64_t muse = 0;                   // max commit versatility
  double mean_commit_versatility = 0.0;
  int64_t versatility_level = 0;  // number of distinct commit change-type sets
  double contrib_start_rel = 0.0;  // days since the repo's first commit
  double contrib_duration = 0.0;   // days between first and last commit
  double mtbc = 0.0;               // mean time between commits, days
  ProfileCounts actual;
};

// Per-repository accumulator. Partial accumulators merge commutatively, so
// rows are identical for any processing order or worker count.
class RepoAggregator {
public:
  explicit RepoAggregator(RepoId repo) : repo_(std::move(repo)) {}

  void add_commit(const CommitRecord& commit, const CategorySet& categories, ChangeTypeSet vset);
  void merge(const RepoAggregator& other);

  const RepoId& repo() const { return repo_; }
  int64_t total_commits() const { return total_commits_; }

  // One row per developer with at least one commit, sorted by developer key.
  std::vector<DeveloperMetricsRow> rows() const;

private:
  struct DevAccum {
    int64_t commits = 0;
    int64_t versatility_sum = 0;
    int64_t muse = 0;
    ChangeTypeSet type_union = 0;
    std::set<ChangeTypeSet> distinct_sets;
    int64_t first_ts = INT64_MAX;
    int64_t last_ts = INT64_MIN;
    ProfileCounts counts;
  };

  RepoId repo_;
  int64_t repo_first_ts_ = INT64_MAX;
  int64_t total_commits_ = 0;
  std::map<std::string, DevAccum> devs_;
};

extern const char* const kMetricsCsvHeader[14];

void write_metrics_csv(std::ostream& os, const std::vector<DeveloperMetricsRow>& rows);
std::vector<DeveloperMetricsRow> read_metrics_csv(std::istream& is);

}  // namespace maintscope
