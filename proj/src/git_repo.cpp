#include "maintscope/git_repo.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <sstream>

#include "maintscope/diagnostics.hpp"

namespace maintscope {

namespace {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fold_trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  std::string out = s.substr(b, e - b + 1);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

RepoId repo_id_for_path(const std::string& path) {
  std::error_code ec;
  std::filesystem::path canonical = std::filesystem::weakly_canonical(path, ec);
  if (ec) canonical = std::filesystem::path(path);
  std::string name = canonical.filename().string();
  if (name.empty()) name = "repo";
  char digest[20];
  std::snprintf(digest, sizeof(digest), "%08llx",
                static_cast<unsigned long long>(fnv1a(canonical.string()) & 0xffffffffull));
  return RepoId{name + "-" + digest};
}

DeveloperId resolve_identity(const std::string& author_name, const std::string& author_email,
                             const RepoId& repo, const std::string& commit_id) {
  std::string key = fold_trim(author_email);
  if (key.empty()) key = fold_trim(author_name);
  if (key.empty()) key = "unknown@" + commit_id;
  return DeveloperId{repo, key};
}

GitRepo::GitRepo(std::string path) : path_(std::move(path)) {
  auto res = run_command({"git", "-C", path_, "rev-parse", "--git-dir"});
  if (!res.ok()) throw NotARepository("not a git repository: " + path_);
  id_ = repo_id_for_path(path_);
}

std::vector<CommitRecord> GitRepo::enumerate_commits() const {
  auto head = run_command({"git", "-C", path_, "rev-parse", "--verify", "-q", "HEAD"});
  if (!head.ok()) {
    warn(id_.id, "", "empty repository (no commits on HEAD)");
    return {};
  }

  // NUL-separated fields: no git field (including the message) can contain
  // NUL, so each record contributes exactly six fields.
  auto res = run_command({"git", "-C", path_, "log", "HEAD", "--first-parent", "--reverse",
                          "--format=%H%x00%an%x00%ae%x00%at%x00%P%x00%B%x00"});
  if (!res.ok()) throw std::runtime_error("git log failed for " + path_ + ": " + res.err);

  auto fields = split(res.out, '\0');
  std::vector<CommitRecord> commits;
  for (size_t base = 0; base + 5 < fields.size(); base += 6) {
    CommitRecord c;
    c.commit_id = fields[base];
    // records are newline-separated on top of the NUL terminator
    size_t lead = c.commit_id.find_first_not_of('\n');
    c.commit_id = lead == std::string::npos ? "" : c.commit_id.substr(lead);
    if (c.commit_id.empty()) break;
    c.timestamp = std::strtoll(fields[base + 3].c_str(), nullptr, 10);
    const std::string& parents = fields[base + 4];
    c.parent_count = 0;
    if (!parents.empty()) {
      c.parent_count = 1 + static_cast<int>(std::count(parents.begin(), parents.end(), ' '));
    }
    c.message = fields[base + 5];
    if (!c.message.empty() && c.message.back() == '\n') c.message.pop_back();
    c.author = resolve_identity(fields[base + 1], fields[base + 2], id_, c.commit_id);
    commits.push_back(std::move(c));
  }

  std::stable_sort(commits.begin(), commits.end(), [](const CommitRecord& a, const CommitRecord& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.commit_id < b.commit_id;
  });
  return commits;
}

std::string GitRepo::empty_tree_hash() const {
  if (empty_tree_.empty()) {
    auto res = run_command({"git", "-C", path_, "hash-object", "-t", "tree", "/dev/null"});
    if (!res.ok()) throw std::runtime_error("git hash-object failed for " + path_);
    empty_tree_ = res.out;
    while (!empty_tree_.empty() && std::isspace(static_cast<unsigned char>(empty_tree_.back())))
      empty_tree_.pop_back();
  }
  return empty_tree_;
}

std::string GitRepo::read_blob(const std::string& sha) const {
  if (!cat_file_) {
    cat_file_ = std::make_unique<PipeProcess>(
        std::vector<std::string>{"git", "-C", path_, "cat-file", "--batch"});
  }
  cat_file_->write_line(sha);
  std::string header = cat_file_->read_line();
  if (header.find("missing") != std::string::npos)
    throw std::runtime_error("missing blob " + sha);
  auto parts = split(header, ' ');
  if (parts.size() < 3 || parts[1] != "blob")
    throw std::runtime_error("unexpected cat-file header: " + header);
  size_t size = std::strtoull(parts[2].c_str(), nullptr, 10);
  std::string content = cat_file_->read_exact(size);
  cat_file_->read_exact(1);  // trailing newline
  return content;
}

std::vector<RevisionPair> GitRepo::revision_pairs(const CommitRecord& commit,
                                                  const std::string& ext) const {
  if (commit.parent_count >= 2) return {};

  std::string base = commit.parent_count == 0 ? empty_tree_hash() : commit.commit_id + "^";
  auto res = run_command({"git", "-C", path_, "diff-tree", "-r", "--no-renames", "-z", base,
                          commit.commit_id});
  if (!res.ok()) {
    warn(id_.id, commit.commit_id, "diff-tree failed: " + res.err);
    return {};
  }

  const std::string zero_prefix = "0000000";
  std::vector<RevisionPair> pairs;
  size_t pos = 0;
  const std::string& out = res.out;
  while (pos < out.size() && out[pos] == ':') {
    size_t meta_end = out.find('\0', pos);
    if (meta_end == std::string::npos) break;
    std::string meta = out.substr(pos + 1, meta_end - pos - 1);
    size_t path_end = out.find('\0', meta_end + 1);
    if (path_end == std::string::npos) break;
    std::string file_path = out.substr(meta_end + 1, path_end - meta_end - 1);
    pos = path_end + 1;

    auto fields = split(meta, ' ');
    if (fields.size() < 5) continue;
    const std::string& old_sha = fields[2];
    const std::string& new_sha = fields[3];
    const std::string& status = fields[4];
    if (status == "U") continue;  // unmerged; cannot occur on committed trees

    if (file_path.size() < ext.size() ||
        file_path.compare(file_path.size() - ext.size(), ext.size(), ext) != 0)
      continue;

    RevisionPair pair;
    pair.commit_id = commit.commit_id;
    pair.file_path = file_path;
    pair.before_present = old_sha.compare(0, zero_prefix.size(), zero_prefix) != 0;
    pair.after_present = new_sha.compare(0, zero_prefix.size(), zero_prefix) != 0;
    if (!pair.before_present && !pair.after_present) continue;
    try {
      if (pair.before_present) pair.before = read_blob(old_sha);
      if (pair.after_present) pair.after = read_blob(new_sha);
    } catch (const std::exception& e) {
      warn(id_.id, commit.commit_id, std::string("unreadable blob for ") + file_path + ": " + e.what());
      continue;
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace maintscope
