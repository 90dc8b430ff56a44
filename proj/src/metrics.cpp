#include "maintscope/metrics.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "maintscope/csv.hpp"
#include "maintscope/diagnostics.hpp"

namespace maintscope {

namespace {
constexpr double kSecondsPerDay = 86400.0;
}

ChangeTypeSet make_change_type_set(const std::vector<SemanticChange>& changes) {
  ChangeTypeSet set = 0;
  for (const auto& c : changes) set |= 1u << static_cast<int>(c.type);
  return set;
}

int change_type_set_size(ChangeTypeSet set) { return std::popcount(set); }

VersatilityMeasures developer_versatility_measures(const std::vector<ChangeTypeSet>& commit_sets) {
  if (commit_sets.empty()) throw std::invalid_argument("developer without commits");
  VersatilityMeasures m;
  ChangeTypeSet type_union = 0;
  int64_t sum = 0;
  std::set<ChangeTypeSet> distinct;
  for (ChangeTypeSet s : commit_sets) {
    int v = change_type_set_size(s);
    sum += v;
    m.muse = std::max<int64_t>(m.muse, v);
    type_union |= s;
    distinct.insert(s);
  }
  m.developer_versatility = change_type_set_size(type_union);
  m.mean_commit_versatility = static_cast<double>(sum) / static_cast<double>(commit_sets.size());
  m.versatility_level = static_cast<int64_t>(distinct.size());
  return m;
}

TemporalMeasures temporal_measures(int64_t first_ts, int64_t last_ts, int64_t commit_count,
                                   int64_t repo_first_ts, const std::string& repo_id,
                                   const std::string& developer) {
  TemporalMeasures t;
  double start_rel = static_cast<double>(first_ts - repo_first_ts) / kSecondsPerDay;
  if (start_rel < 0.0) {
    warn(repo_id, "", "developer " + developer + " commit predates repository start; clamped");
    start_rel = 0.0;
  }
  t.contrib_start_rel = start_rel;
  t.contrib_duration = static_cast<double>(last_ts - first_ts) / kSecondsPerDay;
  t.mtbc = commit_count >= 2 ? t.contrib_duration / static_cast<double>(commit_count - 1) : 0.0;
  return t;
}

TemporalMeasures temporal_measures(const std::vector<int64_t>& timestamps, int64_t repo_first_ts) {
  if (timestamps.empty()) throw std::invalid_argument("developer without commits");
  auto [lo, hi] = std::minmax_element(timestamps.begin(), timestamps.end());
  return temporal_measures(*lo, *hi, static_cast<int64_t>(timestamps.size()), repo_first_ts);
}

void RepoAggregator::add_commit(const CommitRecord& commit, const CategorySet& categories,
                                ChangeTypeSet vset) {
  repo_first_ts_ = std::min(repo_first_ts_, commit.timestamp);
  ++total_commits_;

  DevAccum& acc = devs_[commit.author.key];
  ++acc.commits;
  int versatility = change_type_set_size(vset);
  acc.versatility_sum += versatility;
  acc.muse = std::max<int64_t>(acc.muse, versatility);
  acc.type_union |= vset;
  acc.distinct_sets.insert(vset);
  acc.first_ts = std::min(acc.first_ts, commit.timestamp);
  acc.last_ts = std::max(acc.last_ts, commit.timestamp);
  if (categories.empty()) {
    ++acc.counts.unclassified;
  } else {
    if (categories.corrective) ++acc.counts.corrective;
    if (categories.perfective) ++acc.counts.perfective;
    if (categories.adaptive) ++acc.counts.adaptive;
  }
}

void RepoAggregator::merge(const RepoAggregator& other) {
  if (other.repo_ != repo_) throw std::logic_error("merging aggregators of different repositories");
  repo_first_ts_ = std::min(repo_first_ts_, other.repo_first_ts_);
  total_commits_ += other.total_commits_;
  for (const auto& [key, theirs] : other.devs_) {
    DevAccum& acc = devs_[key];
    acc.commits += theirs.commits;
    acc.versatility_sum += theirs.versatility_sum;
    acc.muse = std::max(acc.muse, theirs.muse);
    acc.type_union |= theirs.type_union;
    acc.distinct_sets.insert(theirs.distinct_sets.begin(), theirs.distinct_sets.end());
    acc.first_ts = std::min(acc.first_ts, theirs.first_ts);
    acc.last_ts = std::max(acc.last_ts, theirs.last_ts);
    acc.counts.corrective += theirs.counts.corrective;
    acc.counts.perfective += theirs.counts.perfective;
    acc.counts.adaptive += theirs.counts.adaptive;
    acc.counts.unclassified += theirs.counts.unclassified;
  }
}

std::vector<DeveloperMetricsRow> RepoAggregator::rows() const {
  std::vector<DeveloperMetricsRow> rows;
  rows.reserve(devs_.size());
  for (const auto& [key, acc] : devs_) {
    DeveloperMetricsRow row;
    row.developer = DeveloperId{repo_, key};
    row.commits = acc.commits;
    row.developer_versatility = change_type_set_size(acc.type_union);
    row.muse = acc.muse;
    row.mean_commit_versatility =
        static_cast<double>(acc.versatility_sum) / static_cast<double>(acc.commits);
    row.versatility_level = static_cast<int64_t>(acc.distinct_sets.size());

    TemporalMeasures t =
        temporal_measures(acc.first_ts, acc.last_ts, acc.commits, repo_first_ts_, repo_.id, key);
    row.contrib_start_rel = t.contrib_start_rel;
    row.contrib_duration = t.contrib_duration;
    row.mtbc = t.mtbc;
    row.actual = acc.counts;
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* const kMetricsCsvHeader[14] = {
    "repo_id",        "developer_id",          "commits",
    "developer_versatility", "muse",           "mean_commit_versatility",
    "versatility_level",     "contrib_start_rel", "contrib_duration",
    "mtbc",           "corrective",            "perfective",
    "adaptive",       "unclassified"};

void write_metrics_csv(std::ostream& os, const std::vector<DeveloperMetricsRow>& rows) {
  std::vector<std::string> header(std::begin(kMetricsCsvHeader), std::end(kMetricsCsvHeader));
  csv::write_row(os, header);

  std::vector<const DeveloperMetricsRow*> sorted;
  sorted.reserve(rows.size());
  for (const auto& r : rows) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    if (a->developer.repo.id != b->developer.repo.id) return a->developer.repo.id < b->developer.repo.id;
    return a->developer.key < b->developer.key;
  });

  for (const auto* r : sorted) {
    csv::write_row(os, {r->developer.repo.id, r->developer.key, std::to_string(r->commits),
                        std::to_string(r->developer_versatility), std::to_string(r->muse),
                        csv::format_real(r->mean_commit_versatility),
                        std::to_string(r->versatility_level),
                        csv::format_real(r->contrib_start_rel),
                        csv::format_real(r->contrib_duration), csv::format_real(r->mtbc),
                        std::to_string(r->actual.corrective), std::to_string(r->actual.perfective),
                        std::to_string(r->actual.adaptive), std::to_string(r->actual.unclassified)});
  }
}

std::vector<DeveloperMetricsRow> read_metrics_csv(std::istream& is) {
  std::vector<std::string> fields;
  if (!csv::read_row(is, fields)) throw std::runtime_error("metrics file is empty");
  if (fields.size() != 14 || fields[0] != "repo_id")
    throw std::runtime_error("metrics file has an unexpected header");

  std::vector<DeveloperMetricsRow> rows;
  while (csv::read_row(is, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 14)
      throw std::runtime_error("metrics row has " + std::to_string(fields.size()) + " fields");
    DeveloperMetricsRow row;
    row.developer = DeveloperId{RepoId{fields[0]}, fields[1]};
    row.commits = std::stoll(fields[2]);
    row.developer_versatility = std::stoll(fields[3]);
    row.muse = std::stoll(fields[4]);
    row.mean_commit_versatility = std::stod(fields[5]);
    row.versatility_level = std::stoll(fields[6]);
    row.contrib_start_rel = std::stod(fields[7]);
    row.contrib_duration = std::stod(fields[8]);
    row.mtbc = std::stod(fields[9]);
    row.actual.corrective = std::stoll(fields[10]);
    row.actual.perfective = std::stoll(fields[11]);
    row.actual.adaptive = std::stoll(fields[12]);
    row.actual.unclassified = std::stoll(fields[13]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace maintscope
