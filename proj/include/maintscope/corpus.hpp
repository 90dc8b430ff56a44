#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace maintscope {

struct RepoCandidate {
  std::string full_name;
  int64_t stars = 0;
  int64_t forks = 0;
  int64_t created_at = 0;  // UTC seconds
  int64_t pushed_at = 0;   // UTC seconds
  int64_t size_kb = 0;
  std::string language;
  std::string clone_url;
};

struct SelectionCriteria {
  std::string language = "Java";
  int64_t min_stars_exclusive = 100;
  int64_t min_forks_exclusive = 60;
  int64_t pushed_on_or_after = 0;   // defaults set to 2016-01-01 in defaults()
  int64_t created_before = 0;       // defaults set to 2015-01-01 in defaults()
  int64_t min_size_kb_exclusive = 2048;
  size_t result_cap = 1000;

  static SelectionCriteria defaults();
};

// "2016-01-01" or "2016-01-01T12:34:56Z" to UTC seconds.
int64_t parse_utc(const std::string& iso);
std::string format_utc_date(int64_t ts);

// Conjunction of the six selection criteria; all comparisons strict except
// the pushed-at lower bound, which is inclusive.
bool matches(const RepoCandidate& candidate, const SelectionCriteria& criteria);

class AuthFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class RateLimited : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SearchOptions {
  size_t per_page = 100;
  int max_rate_limit_retries = 3;
  // Injectable for tests; defaults to an actual sleep.
  std::function<void(int64_t seconds)> sleep_fn;
};

// Paginates the search endpoint until the result cap or exhaustion; every
// candidate is re-validated locally so API drift cannot widen the corpus.
std::vector<RepoCandidate> search(const SelectionCriteria& criteria, const std::string& api_url,
                                  const std::string& auth_token, const SearchOptions& opts = {});

// Candidate list file: one JSON object per line with the RepoCandidate fields.
std::vector<RepoCandidate> read_candidates(const std::string& path);
void write_candidates(const std::vector<RepoCandidate>& candidates, const std::string& path);

enum class CloneStatus { Cloned, Skipped, Failed };

struct CloneResult {
  std::string full_name;
  CloneStatus status;
  std::string message;
  std::string local_path;
};

struct CloneReport {
  std::vector<CloneResult> results;  // sorted by full_name
  size_t succeeded = 0;  // cloned + skipped-as-succeeded
  size_t failed = 0;
};

// Bare-clones each candidate into dest_dir. Existing valid clones are
// skipped; per-repo failures are recorded and never abort the batch.
CloneReport clone_all(const std::vector<RepoCandidate>& candidates, const std::string& dest_dir,
                      unsigned parallelism);

}  // namespace maintscope
