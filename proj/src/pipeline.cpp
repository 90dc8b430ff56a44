#include "maintscope/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "maintscope/csv.hpp"
#include "maintscope/diagnostics.hpp"

namespace maintscope {

void parallel_map(size_t n, unsigned jobs, const std::function<void(size_t)>& fn) {
  if (n == 0) return;
  unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : threads) t.join();
}

KeywordTable PipelineConfig::keyword_table() const {
  return keywords_path.empty() ? KeywordTable::defaults() : KeywordTable::load(keywords_path);
}

GlmModel PipelineConfig::model() const {
  return model_path == "builtin" ? builtin_model() : load_model(model_path);
}

std::string categories_to_string(const CategorySet& set) {
  if (set.empty()) return "unclassified";
  std::string out;
  auto append = [&](const char* name) {
    if (!out.empty()) out += '|';
    out += name;
  };
  if (set.corrective) append("corrective");
  if (set.perfective) append("perfective");
  if (set.adaptive) append("adaptive");
  return out;
}

CategorySet categories_from_string(const std::string& s) {
  CategorySet set;
  size_t start = 0;
  while (start <= s.size()) {
    size_t end = s.find('|', start);
    std::string part = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (part == "corrective") set.corrective = true;
    else if (part == "perfective") set.perfective = true;
    else if (part == "adaptive") set.adaptive = true;
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return set;
}

namespace {

struct RepoWork {
  bool failed = false;
  std::string error;
  RepoId repo;
  std::vector<CommitTableRow> commits;
  std::vector<SemanticChange> changes;
  std::vector<DeveloperMetricsRow> rows;
};

RepoWork process_repo(const std::string& path, const PipelineConfig& config,
                      const KeywordTable& table) {
  RepoWork work;
  GitRepo repo(path);
  work.repo = repo.id();

  auto commits = repo.enumerate_commits();
  RepoAggregator agg(repo.id());
  ClassifyMode mode = config.multi_label ? ClassifyMode::MultiLabel : ClassifyMode::SingleLabel;

  for (const auto& commit : commits) {
    std::vector<SemanticChange> commit_changes;
    if (commit.parent_count < 2) {
      for (auto& pair : repo.revision_pairs(commit, config.ext)) {
        try {
          auto distilled = distill(pair, config.distill);
          commit_changes.insert(commit_changes.end(), distilled.begin(), distilled.end());
        } catch (const DistillParseError& e) {
          warn(repo.id().id, commit.commit_id,
               "parse failure (" + e.side + ") for " + pair.file_path + ": " + e.what());
        }
      }
    }

    CategorySet cats = classify(commit.message, table, mode);
    agg.add_commit(commit, cats, make_change_type_set(commit_changes));

    CommitTableRow row;
    row.repo = repo.id();
    row.commit_id = commit.commit_id;
    row.developer_key = commit.author.key;
    row.timestamp = commit.timestamp;
    row.parent_count = commit.parent_count;
    row.categories = categories_to_string(cats);
    row.message = commit.message;
    work.commits.push_back(std::move(row));
    work.changes.insert(work.changes.end(), commit_changes.begin(), commit_changes.end());
  }

  work.rows = agg.rows();
  return work;
}

void write_file(const std::string& dir, const std::string& name,
                const std::function<void(std::ostream&)>& writer) {
  std::filesystem::create_directories(dir);
  std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  writer(out);
}

const char* category_label(ChangeCategory c) { return category_name(c); }

}  // namespace

PipelineResult collect_pipeline(const std::vector<std::string>& repo_paths,
                                const PipelineConfig& config) {
  KeywordTable table = config.keyword_table();
  GlmModel model = config.model();

  std::vector<RepoWork> works(repo_paths.size());
  parallel_map(repo_paths.size(), config.jobs, [&](size_t i) {
    try {
      works[i] = process_repo(repo_paths[i], config, table);
    } catch (const std::exception& e) {
      works[i].failed = true;
      works[i].error = e.what();
      warn(repo_paths[i], "", std::string("repository failed: ") + e.what());
    } catch (...) {
      works[i].failed = true;
      works[i].error = "unknown error";
      warn(repo_paths[i], "", "repository failed: unknown error");
    }
  });

  // Order-normalize: merge per-repo outputs by repository id.
  std::vector<const RepoWork*> ordered;
  PipelineResult result;
  for (const auto& w : works) {
    if (w.failed) {
      ++result.repos_failed;
    } else {
      ++result.repos_succeeded;
      ordered.push_back(&w);
    }
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const RepoWork* a, const RepoWork* b) { return a->repo.id < b->repo.id; });
  // The same repository listed twice (aliased paths) would double every row.
  auto dup = std::unique(ordered.begin(), ordered.end(),
                         [](const RepoWork* a, const RepoWork* b) { return a->repo == b->repo; });
  for (auto it = dup; it != ordered.end(); ++it) {
    warn((*it)->repo.id, "", "duplicate repository input ignored");
    --result.repos_succeeded;
  }
  ordered.erase(dup, ordered.end());

  for (const auto* w : ordered) {
    result.commits.insert(result.commits.end(), w->commits.begin(), w->commits.end());
    for (const auto& c : w->changes) {
      result.changes.push_back(c);
      result.change_repo_ids.push_back(w->repo.id);
    }
    result.rows.insert(result.rows.end(), w->rows.begin(), w->rows.end());
  }

  std::sort(result.rows.begin(), result.rows.end(),
            [](const DeveloperMetricsRow& a, const DeveloperMetricsRow& b) {
              return std::tie(a.developer.repo.id, a.developer.key) <
                     std::tie(b.developer.repo.id, b.developer.key);
            });

  result.profiles.reserve(result.rows.size());
  for (const auto& row : result.rows) {
    DeveloperProfileRow p;
    p.developer = row.developer;
    p.actual = row.actual;
    p.predicted = predict(row, model, config.log_floor);
    result.profiles.push_back(std::move(p));
  }
  return result;
}

PipelineResult run_pipeline(const std::vector<std::string>& repo_paths,
                            const PipelineConfig& config) {
  PipelineResult result = collect_pipeline(repo_paths, config);
  write_file(config.out_dir, "commits.csv",
             [&](std::ostream& os) { write_commits_csv(os, result.commits); });
  write_file(config.out_dir, "changes.tsv", [&](std::ostream& os) {
    write_changes_tsv(os, result.changes, result.change_repo_ids);
  });
  write_file(config.out_dir, "metrics.csv",
             [&](std::ostream& os) { write_metrics_csv(os, result.rows); });
  write_file(config.out_dir, "profiles.csv",
             [&](std::ostream& os) { write_profiles_csv(os, result.profiles); });
  return result;
}

PipelineResult run_report(const std::vector<std::string>& repo_paths,
                          const PipelineConfig& config) {
  PipelineResult result = run_pipeline(repo_paths, config);
  auto projects = aggregate_projects(result.profiles);
  auto anomalies = detect_anomalies(result.profiles, config.anomaly_threshold);
  write_file(config.out_dir, "projects.csv",
             [&](std::ostream& os) { write_projects_csv(os, projects); });
  write_file(config.out_dir, "anomalies.csv",
             [&](std::ostream& os) { write_anomalies_csv(os, anomalies); });
  write_file(config.out_dir, "plot.csv", [&](std::ostream& os) {
    emit_plot_data(os, result.profiles, std::min(config.plot_sample, result.profiles.size()),
                   config.seed);
  });
  return result;
}

ProjectProfile aggregate_project(const std::vector<DeveloperProfileRow>& profiles) {
  ProjectProfile project;
  if (!profiles.empty()) project.repo = profiles.front().developer.repo;
  for (const auto& p : profiles) {
    project.developer_count += 1;
    project.actual.corrective += p.actual.corrective;
    project.actual.perfective += p.actual.perfective;
    project.actual.adaptive += p.actual.adaptive;
    project.actual.unclassified += p.actual.unclassified;
    project.corrective_predicted += p.predicted.corrective.count_estimate;
    project.perfective_predicted += p.predicted.perfective.count_estimate;
    project.adaptive_predicted += p.predicted.adaptive.count_estimate;
  }
  return project;
}

std::vector<ProjectProfile> aggregate_projects(const std::vector<DeveloperProfileRow>& profiles) {
  std::map<std::string, std::vector<DeveloperProfileRow>> by_repo;
  for (const auto& p : profiles) by_repo[p.developer.repo.id].push_back(p);
  std::vector<ProjectProfile> out;
  out.reserve(by_repo.size());
  for (const auto& [repo, group] : by_repo) out.push_back(aggregate_project(group));
  return out;
}

std::vector<AnomalyRecord> detect_anomalies(const std::vector<DeveloperProfileRow>& profiles,
                                            double threshold) {
  std::vector<AnomalyRecord> anomalies;
  for (const auto& p : profiles) {
    auto check = [&](ChangeCategory c, int64_t actual_count) {
      double predicted = p.predicted.category(c).count_estimate;
      double actual = static_cast<double>(actual_count);
      double score = std::abs(actual - predicted) / std::max(predicted, 1.0);
      if (score > threshold)
        anomalies.push_back({p.developer, c, actual, predicted, score});
    };
    check(ChangeCategory::Corrective, p.actual.corrective);
    check(ChangeCategory::Perfective, p.actual.perfective);
    check(ChangeCategory::Adaptive, p.actual.adaptive);
  }
  std::sort(anomalies.begin(), anomalies.end(), [](const AnomalyRecord& a, const AnomalyRecord& b) {
    if (a.deviation_score != b.deviation_score) return a.deviation_score > b.deviation_score;
    return std::tie(a.developer.repo.id, a.developer.key, a.category) <
           std::tie(b.developer.repo.id, b.developer.key, b.category);
  });
  return anomalies;
}

namespace {

uint64_t bounded_rand(std::mt19937_64& gen, uint64_t n) {
  uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % n;
}

}  // namespace

void emit_plot_data(std::ostream& os, const std::vector<DeveloperProfileRow>& profiles,
                    size_t sample_size, uint64_t seed) {
  if (sample_size > profiles.size())
    throw std::invalid_argument("plot sample larger than the number of developers");

  std::vector<size_t> indices(profiles.size());
  for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  if (sample_size < profiles.size()) {
    std::mt19937_64 gen(seed);
    for (size_t i = indices.size() - 1; i > 0; --i) {
      size_t j = static_cast<size_t>(bounded_rand(gen, i + 1));
      std::swap(indices[i], indices[j]);
    }
    indices.resize(sample_size);
    std::sort(indices.begin(), indices.end());
  }

  csv::write_row(os, {"developer_index", "category", "actual", "predicted"});
  const ChangeCategory cats[3] = {ChangeCategory::Corrective, ChangeCategory::Perfective,
                                  ChangeCategory::Adaptive};
  for (ChangeCategory c : cats) {
    for (size_t k = 0; k < indices.size(); ++k) {
      const DeveloperProfileRow& p = profiles[indices[k]];
      int64_t actual = c == ChangeCategory::Corrective   ? p.actual.corrective
                       : c == ChangeCategory::Perfective ? p.actual.perfective
                                                         : p.actual.adaptive;
      csv::write_row(os, {std::to_string(k), category_label(c), std::to_string(actual),
                          csv::format_real(p.predicted.category(c).count_estimate)});
    }
  }
}

void write_commits_csv(std::ostream& os, const std::vector<CommitTableRow>& rows) {
  csv::write_row(os, {"repo_id", "commit_id", "developer_id", "timestamp", "parent_count",
                      "categories", "message"});
  for (const auto& r : rows) {
    csv::write_row(os, {r.repo.id, r.commit_id, r.developer_key, std::to_string(r.timestamp),
                        std::to_string(r.parent_count), r.categories, r.message});
  }
}

std::vector<CommitTableRow> read_commits_csv(std::istream& is) {
  std::vector<std::string> fields;
  if (!csv::read_row(is, fields) || fields.size() != 7 || fields[0] != "repo_id")
    throw std::runtime_error("commit table has an unexpected header");
  std::vector<CommitTableRow> rows;
  while (csv::read_row(is, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 7)
      throw std::runtime_error("commit row has " + std::to_string(fields.size()) + " fields");
    CommitTableRow r;
    r.repo = RepoId{fields[0]};
    r.commit_id = fields[1];
    r.developer_key = fields[2];
    r.timestamp = std::stoll(fields[3]);
    r.parent_count = std::stoi(fields[4]);
    r.categories = fields[5];
    r.message = fields[6];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_change_dump_line(const SemanticChange& change) {
  return change.commit_id + "\t" + change.file_path + "\t" + change_type_label(change.type) +
         "\t" + change.entity;
}

void write_changes_tsv(std::ostream& os, const std::vector<SemanticChange>& changes,
                       const std::vector<std::string>& repo_ids) {
  for (size_t i = 0; i < changes.size(); ++i) {
    os << repo_ids[i] << '\t' << format_change_dump_line(changes[i]) << '\n';
  }
}

std::vector<DumpedChange> read_changes_tsv(std::istream& is) {
  std::vector<DumpedChange> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> parts;
    size_t start = 0;
    while (parts.size() < 4) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos) break;
      parts.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    parts.push_back(line.substr(start));
    if (parts.size() != 5) throw std::runtime_error("malformed change dump line: " + line);
    auto type = change_type_from_label(parts[3]);
    if (!type) throw std::runtime_error("unknown change type in dump: " + parts[3]);
    out.push_back({parts[0], SemanticChange{*type, parts[1], parts[2], parts[4]}});
  }
  return out;
}

void write_profiles_csv(std::ostream& os, const std::vector<DeveloperProfileRow>& profiles) {
  csv::write_row(os, {"repo_id", "developer_id", "category", "actual", "linear_predictor",
                      "predicted"});
  const ChangeCategory cats[3] = {ChangeCategory::Corrective, ChangeCategory::Perfective,
                                  ChangeCategory::Adaptive};
  for (const auto& p : profiles) {
    for (ChangeCategory c : cats) {
      int64_t actual = c == ChangeCategory::Corrective   ? p.actual.corrective
                       : c == ChangeCategory::Perfective ? p.actual.perfective
                                                         : p.actual.adaptive;
      const CategoryPrediction& pred = p.predicted.category(c);
      csv::write_row(os, {p.developer.repo.id, p.developer.key, category_label(c),
                          std::to_string(actual), csv::format_real(pred.linear_predictor),
                          csv::format_real(pred.count_estimate)});
    }
  }
}

void write_projects_csv(std::ostream& os, const std::vector<ProjectProfile>& projects) {
  csv::write_row(os, {"repo_id", "developer_count", "corrective_actual", "corrective_predicted",
                      "perfective_actual", "perfective_predicted", "adaptive_actual",
                      "adaptive_predicted", "unclassified_actual"});
  for (const auto& p : projects) {
    csv::write_row(os, {p.repo.id, std::to_string(p.developer_count),
                        std::to_string(p.actual.corrective), csv::format_real(p.corrective_predicted),
                        std::to_string(p.actual.perfective), csv::format_real(p.perfective_predicted),
                        std::to_string(p.actual.adaptive), csv::format_real(p.adaptive_predicted),
                        std::to_string(p.actual.unclassified)});
  }
}

void write_anomalies_csv(std::ostream& os, const std::vector<AnomalyRecord>& anomalies) {
  csv::write_row(os, {"repo_id", "developer_id", "category", "actual", "predicted",
                      "deviation_score"});
  for (const auto& a : anomalies) {
    csv::write_row(os, {a.developer.repo.id, a.developer.key, category_label(a.category),
                        csv::format_real(a.actual), csv::format_real(a.predicted),
                        csv::format_real(a.deviation_score)});
  }
}

std::vector<DeveloperMetricsRow> aggregate_from_tables(const std::vector<CommitTableRow>& commits,
                                                       const std::vector<DumpedChange>& changes) {
  std::map<std::pair<std::string, std::string>, std::vector<SemanticChange>> by_commit;
  for (const auto& d : changes) by_commit[{d.repo_id, d.change.commit_id}].push_back(d.change);

  std::map<std::string, RepoAggregator> aggs;
  for (const auto& row : commits) {
    auto it = aggs.find(row.repo.id);
    if (it == aggs.end()) it = aggs.emplace(row.repo.id, RepoAggregator(row.repo)).first;

    CommitRecord commit;
    commit.commit_id = row.commit_id;
    commit.author = DeveloperId{row.repo, row.developer_key};
    commit.timestamp = row.timestamp;
    commit.parent_count = row.parent_count;

    ChangeTypeSet vset = 0;
    auto ch = by_commit.find({row.repo.id, row.commit_id});
    if (ch != by_commit.end()) vset = make_change_type_set(ch->second);

    it->second.add_commit(commit, categories_from_string(row.categories), vset);
  }

  std::vector<DeveloperMetricsRow> rows;
  for (auto& [id, agg] : aggs) {
    auto repo_rows = agg.rows();
    rows.insert(rows.end(), repo_rows.begin(), repo_rows.end());
  }
  std::sort(rows.begin(), rows.end(), [](const DeveloperMetricsRow& a, const DeveloperMetricsRow& b) {
    return std::tie(a.developer.repo.id, a.developer.key) <
           std::tie(b.developer.repo.id, b.developer.key);
  });
  return rows;
}

}  // namespace maintscope
