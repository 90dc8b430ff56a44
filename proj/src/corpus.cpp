#include "maintscope/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "maintscope/diagnostics.hpp"
#include "maintscope/pipeline.hpp"
#include "maintscope/subprocess.hpp"

namespace maintscope {

namespace {

std::string fold(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out += static_cast<char>(std::tolower(c));
  return out;
}

// Howard Hinnant's days-from-civil; proleptic Gregorian calendar.
int64_t days_from_civil(int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

}  // namespace

int64_t parse_utc(const std::string& iso) {
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  int n = std::sscanf(iso.c_str(), "%d-%d-%dT%d:%d:%d", &year, &month, &day, &hour, &minute, &second);
  if (n < 3) throw std::runtime_error("unparseable date: " + iso);
  return days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
         hour * 3600 + minute * 60 + second;
}

std::string format_utc_date(int64_t ts) {
  int64_t days = ts / 86400;
  int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u", static_cast<long long>(y), m, d);
  return buf;
}

SelectionCriteria SelectionCriteria::defaults() {
  SelectionCriteria c;
  c.pushed_on_or_after = parse_utc("2016-01-01");
  c.created_before = parse_utc("2015-01-01");
  return c;
}

bool matches(const RepoCandidate& candidate, const SelectionCriteria& criteria) {
  return fold(candidate.language) == fold(criteria.language) &&
         candidate.stars > criteria.min_stars_exclusive &&
         candidate.forks > criteria.min_forks_exclusive &&
         candidate.pushed_at >= criteria.pushed_on_or_after &&
         candidate.created_at < criteria.created_before &&
         candidate.size_kb > criteria.min_size_kb_exclusive;
}

namespace {

int64_t json_time(const nlohmann::json& j, const char* field) {
  if (!j.contains(field)) return 0;
  if (j[field].is_number()) return j[field].get<int64_t>();
  return parse_utc(j[field].get<std::string>());
}

// Accepts both this tool's candidate fields and the hosting API's names.
RepoCandidate candidate_from_json(const nlohmann::json& j) {
  RepoCandidate c;
  c.full_name = j.value("full_name", "");
  c.stars = j.contains("stars") ? j["stars"].get<int64_t>() : j.value("stargazers_count", 0);
  c.forks = j.contains("forks") && j["forks"].is_number() ? j["forks"].get<int64_t>()
                                                          : j.value("forks_count", 0);
  c.created_at = json_time(j, "created_at");
  c.pushed_at = json_time(j, "pushed_at");
  c.size_kb = j.contains("size_kb") ? j["size_kb"].get<int64_t>() : j.value("size", 0);
  c.language = j.value("language", "");
  c.clone_url = j.value("clone_url", "");
  return c;
}

nlohmann::ordered_json candidate_to_json(const RepoCandidate& c) {
  nlohmann::ordered_json j;
  j["full_name"] = c.full_name;
  j["stars"] = c.stars;
  j["forks"] = c.forks;
  j["created_at"] = c.created_at;
  j["pushed_at"] = c.pushed_at;
  j["size_kb"] = c.size_kb;
  j["language"] = c.language;
  j["clone_url"] = c.clone_url;
  return j;
}

struct ParsedUrl {
  std::string base;  // scheme://host:port
  std::string path;  // leading path prefix, may be empty
};

ParsedUrl parse_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::runtime_error("api url needs a scheme: " + url);
  auto path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return {url, ""};
  return {url.substr(0, path_begin), url.substr(path_begin)};
}

}  // namespace

std::vector<RepoCandidate> search(const SelectionCriteria& criteria, const std::string& api_url,
                                  const std::string& auth_token, const SearchOptions& opts) {
  auto sleep_fn = opts.sleep_fn ? opts.sleep_fn : [](int64_t seconds) {
    std::this_thread::sleep_for(std::chrono::seconds(seconds));
  };

  ParsedUrl url = parse_url(api_url);
  httplib::Client client(url.base);
  client.set_connection_timeout(30);
  client.set_read_timeout(60);

  std::string query = "language:" + criteria.language +
                      " stars:>" + std::to_string(criteria.min_stars_exclusive) +
                      " forks:>" + std::to_string(criteria.min_forks_exclusive) +
                      " pushed:>=" + format_utc_date(criteria.pushed_on_or_after) +
                      " created:<" + format_utc_date(criteria.created_before) +
                      " size:>" + std::to_string(criteria.min_size_kb_exclusive);

  std::vector<RepoCandidate> out;
  int retries = 0;
  for (size_t page = 1; out.size() < criteria.result_cap; ++page) {
    httplib::Params params{{"q", query},
                           {"per_page", std::to_string(opts.per_page)},
                           {"page", std::to_string(page)}};
    httplib::Headers headers{{"Accept", "application/json"}};
    if (!auth_token.empty()) headers.emplace("Authorization", "Bearer " + auth_token);

    auto res = client.Get(url.path + "/search/repositories", params, headers);
    if (!res) {
      warn("", "", "search request failed: " + httplib::to_string(res.error()));
      break;
    }
    if (res->status == 401) throw AuthFailure("search endpoint rejected the token (401)");
    if (res->status == 403 || res->status == 429) {
      std::string remaining = res->get_header_value("X-RateLimit-Remaining");
      if (res->status == 429 || remaining == "0") {
        if (++retries > opts.max_rate_limit_retries)
          throw RateLimited("rate limit retries exhausted");
        int64_t wait = 1;
        if (res->has_header("Retry-After")) {
          wait = std::strtoll(res->get_header_value("Retry-After").c_str(), nullptr, 10);
        } else if (res->has_header("X-RateLimit-Reset")) {
          int64_t reset = std::strtoll(res->get_header_value("X-RateLimit-Reset").c_str(), nullptr, 10);
          int64_t now = std::chrono::duration_cast<std::chrono::seconds>(
                            std::chrono::system_clock::now().time_since_epoch())
                            .count();
          wait = std::max<int64_t>(reset - now, 1);
        }
        sleep_fn(wait);
        --page;  // retry the same page
        continue;
      }
      throw AuthFailure("search endpoint returned 403 without a rate-limit header");
    }
    if (res->status != 200) {
      warn("", "", "search endpoint returned status " + std::to_string(res->status));
      break;
    }

    nlohmann::json body;
    try {
      body = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      warn("", "", std::string("malformed search response: ") + e.what());
      break;  // partial results
    }
    if (!body.contains("items") || !body["items"].is_array()) {
      warn("", "", "malformed search response: missing items array");
      break;
    }

    size_t page_count = body["items"].size();
    for (const auto& item : body["items"]) {
      RepoCandidate c;
      try {
        c = candidate_from_json(item);
      } catch (const std::exception& e) {
        warn("", c.full_name, std::string("skipping malformed candidate: ") + e.what());
        continue;
      }
      if (!matches(c, criteria)) continue;  // local re-validation
      out.push_back(std::move(c));
      if (out.size() >= criteria.result_cap) break;
    }
    if (page_count < opts.per_page) break;  // exhausted
  }
  return out;
}

std::vector<RepoCandidate> read_candidates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open candidate list: " + path);
  std::vector<RepoCandidate> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(candidate_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      warn("", "", path + ":" + std::to_string(lineno) + ": skipping bad candidate: " + e.what());
    }
  }
  return out;
}

void write_candidates(const std::vector<RepoCandidate>& candidates, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write candidate list: " + path);
  for (const auto& c : candidates) out << candidate_to_json(c).dump() << "\n";
}

namespace {

std::string clone_dir_name(const std::string& full_name) {
  std::string name;
  for (char c : full_name) name += (c == '/') ? '_' : c;
  return name + ".git";
}

bool is_valid_repo(const std::string& path) {
  if (!std::filesystem::exists(path)) return false;
  return run_command({"git", "-C", path, "rev-parse", "--git-dir"}).ok();
}

}  // namespace

CloneReport clone_all(const std::vector<RepoCandidate>& candidates, const std::string& dest_dir,
                      unsigned parallelism) {
  std::filesystem::create_directories(dest_dir);
  std::vector<CloneResult> results(candidates.size());

  parallel_map(candidates.size(), parallelism, [&](size_t i) {
    const RepoCandidate& c = candidates[i];
    CloneResult r;
    r.full_name = c.full_name;
    r.local_path = (std::filesystem::path(dest_dir) / clone_dir_name(c.full_name)).string();
    if (is_valid_repo(r.local_path)) {
      r.status = CloneStatus::Skipped;
      r.message = "existing clone";
    } else {
      auto res = run_command({"git", "clone", "--bare", "--quiet", c.clone_url, r.local_path});
      if (res.ok()) {
        r.status = CloneStatus::Cloned;
      } else {
        r.status = CloneStatus::Failed;
        r.message = res.err.empty() ? ("exit code " + std::to_string(res.exit_code)) : res.err;
        std::error_code ec;
        std::filesystem::remove_all(r.local_path, ec);  // no half-clones
      }
    }
    results[i] = std::move(r);
  });

  std::sort(results.begin(), results.end(),
            [](const CloneResult& a, const CloneResult& b) { return a.full_name < b.full_name; });

  CloneReport report;
  for (auto& r : results) {
    if (r.status == CloneStatus::Failed) {
      ++report.failed;
      warn(r.full_name, "", "clone failed: " + r.message);
    } else {
      ++report.succeeded;
    }
  }
  report.results = std::move(results);
  return report;
}

}  // namespace maintscope
