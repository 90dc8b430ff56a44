#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "maintscope/distill.hpp"
#include "maintscope/subprocess.hpp"

namespace maintscope {

struct RepoId {
  std::string id;
  bool operator==(const RepoId&) const = default;
  auto operator<=>(const RepoId&) const = default;
};

// Stable identifier for a local repository path: directory basename plus a
// short digest of the canonical path.
RepoId repo_id_for_path(const std::string& path);

struct DeveloperId {
  RepoId repo;
  std::string key;  // case-folded author email, with fallbacks
  bool operator==(const DeveloperId&) const = default;
  auto operator<=>(const DeveloperId&) const = default;
};

struct CommitRecord {
  std::string commit_id;
  DeveloperId author;
  int64_t timestamp = 0;  // UTC seconds
  std::string message;
  int parent_count = 0;
};

class NotARepository : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Identity key: case-folded, whitespace-trimmed email; falls back to the
// folded author name, then to "unknown@<commit_id>".
DeveloperId resolve_identity(const std::string& author_name, const std::string& author_email,
                             const RepoId& repo, const std::string& commit_id = "");

class GitRepo {
public:
  explicit GitRepo(std::string path);

  const RepoId& id() const { return id_; }
  const std::string& path() const { return path_; }

  // First-parent history of HEAD, ascending by timestamp, ties broken by
  // commit hash. An empty repository yields an empty sequence with a warning.
  std::vector<CommitRecord> enumerate_commits() const;

  // One pair per touched source file relative to the first parent; merge
  // commits yield no pairs. `ext` filters by file suffix (default ".java").
  std::vector<RevisionPair> revision_pairs(const CommitRecord& commit,
                                           const std::string& ext = ".java") const;

private:
  std::string read_blob(const std::string& sha) const;
  std::string empty_tree_hash() const;

  std::string path_;
  RepoId id_;
  mutable std::unique_ptr<PipeProcess> cat_file_;
  mutable std::string empty_tree_;
};

}  // namespace maintscope
