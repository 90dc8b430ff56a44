#include <doctest.h>

#include <algorithm>

#include "maintscope/diagnostics.hpp"
#include "maintscope/git_repo.hpp"
#include "support/fixture_repo.hpp"

using namespace maintscope;
using maintscope::testing::FixtureRepo;
using maintscope::testing::make_temp_dir;

namespace {

struct WarningCapture {
  std::vector<std::string> lines;
  WarningCapture() {
    Diagnostics::instance().set_sink([this](const std::string& l) { lines.push_back(l); });
  }
  ~WarningCapture() { Diagnostics::instance().reset_sink(); }
};

}  // namespace

TEST_SUITE("git_repo") {

TEST_CASE("identity resolution rules") {
  RepoId r1{"repo-1"}, r2{"repo-2"};
  CHECK(resolve_identity("Alice", "A@X.COM", r1) == resolve_identity("alice b", "a@x.com", r1));
  CHECK(resolve_identity("Alice", "a@x.com", r1) != resolve_identity("Alice", "a@x.com", r2));
  CHECK(resolve_identity("", "", r1, "c9").key == "unknown@c9");
  CHECK(resolve_identity("Named Only", "", r1).key == "named only");
  CHECK(resolve_identity("x", "  Padded@Y.Z \t", r1).key == "padded@y.z");
}

TEST_CASE("identity resolution is idempotent") {
  RepoId r{"repo"};
  DeveloperId d = resolve_identity("Bob", "BOB@host", r);
  CHECK(resolve_identity("Bob", d.key, r) == d);
}

TEST_CASE("not a repository") {
  auto dir = make_temp_dir("notrepo");
  CHECK_THROWS_AS(GitRepo(dir.string()), NotARepository);
  std::filesystem::remove_all(dir);
}

TEST_CASE("empty repository yields no commits and a warning") {
  FixtureRepo repo("empty");
  WarningCapture warnings;
  GitRepo git(repo.path().string());
  CHECK(git.enumerate_commits().empty());
  CHECK(warnings.lines.size() == 1);
}

TEST_CASE("commits come back ascending by timestamp") {
  FixtureRepo repo("ordered");
  repo.write_file("a.txt", "1");
  repo.commit("third", "Dev", "dev@x.com", 3000);
  repo.write_file("a.txt", "2");
  repo.commit("first", "Dev", "dev@x.com", 1000);
  repo.write_file("a.txt", "3");
  repo.commit("second", "Dev", "dev@x.com", 2000);

  GitRepo git(repo.path().string());
  auto commits = git.enumerate_commits();
  REQUIRE(commits.size() == 3);
  CHECK(commits[0].timestamp == 1000);
  CHECK(commits[1].timestamp == 2000);
  CHECK(commits[2].timestamp == 3000);
  CHECK(commits[0].message == "first");
  CHECK(commits[1].message == "second");
  CHECK(commits[2].message == "third");
  // "third" was committed first, so it is the only parentless commit
  CHECK(commits[2].parent_count == 0);
  CHECK(commits[0].parent_count == 1);
}

TEST_CASE("equal timestamps break ties by hash order") {
  FixtureRepo repo("ties");
  repo.write_file("a.txt", "1");
  repo.commit("one", "Dev", "dev@x.com", 5000);
  repo.write_file("a.txt", "2");
  repo.commit("two", "Dev", "dev@x.com", 5000);

  GitRepo git(repo.path().string());
  auto commits = git.enumerate_commits();
  REQUIRE(commits.size() == 2);
  CHECK(commits[0].commit_id < commits[1].commit_id);
}

TEST_CASE("revision pairs for adds, edits and deletes") {
  FixtureRepo repo("pairs");
  repo.write_file("F.java", "class F {}");
  repo.write_file("notes.txt", "not java");
  std::string c1 = repo.commit("add F", "Dev", "dev@x.com", 1000);

  repo.write_file("F.java", "class F { int x; }");
  repo.write_file("G.java", "class G {}");
  std::string c2 = repo.commit("edit F add G", "Dev", "dev@x.com", 2000);

  repo.write_file("F.java", "class F { int x, y; }");
  repo.remove_file("G.java");
  std::string c3 = repo.commit("edit F drop G", "Dev", "dev@x.com", 3000);

  GitRepo git(repo.path().string());
  auto commits = git.enumerate_commits();
  REQUIRE(commits.size() == 3);

  auto p1 = git.revision_pairs(commits[0]);
  REQUIRE(p1.size() == 1);  // notes.txt filtered out
  CHECK(p1[0].file_path == "F.java");
  CHECK_FALSE(p1[0].before_present);
  CHECK(p1[0].after == "class F {}");

  auto p2 = git.revision_pairs(commits[1]);
  REQUIRE(p2.size() == 2);
  std::sort(p2.begin(), p2.end(),
            [](const RevisionPair& a, const RevisionPair& b) { return a.file_path < b.file_path; });
  CHECK(p2[0].file_path == "F.java");
  CHECK(p2[0].before == "class F {}");
  CHECK(p2[0].after == "class F { int x; }");
  CHECK_FALSE(p2[1].before_present);

  auto p3 = git.revision_pairs(commits[2]);
  REQUIRE(p3.size() == 2);
  std::sort(p3.begin(), p3.end(),
            [](const RevisionPair& a, const RevisionPair& b) { return a.file_path < b.file_path; });
  CHECK(p3[1].file_path == "G.java");
  CHECK(p3[1].before_present);
  CHECK_FALSE(p3[1].after_present);
}

TEST_CASE("merge commits contribute no revision pairs") {
  FixtureRepo repo("merge");
  repo.write_file("F.java", "class F {}");
  repo.commit("base", "Dev", "dev@x.com", 1000);
  repo.branch("feature");
  repo.write_file("F.java", "class F { int a; }");
  repo.commit("main work", "Dev", "dev@x.com", 2000);
  repo.checkout("feature");
  repo.write_file("G.java", "class G {}");
  repo.commit("feature work", "Dev", "dev@x.com", 2500);
  repo.checkout("master");
  repo.merge("feature", "merge feature", "Dev", "dev@x.com", 3000);

  GitRepo git(repo.path().string());
  auto commits = git.enumerate_commits();
  // first-parent walk: base, main work, merge
  REQUIRE(commits.size() == 3);
  CHECK(commits[2].parent_count == 2);
  CHECK(git.revision_pairs(commits[2]).empty());
}

TEST_CASE("extension filter is configurable") {
  FixtureRepo repo("exts");
  repo.write_file("a.kt", "fun main() {}");
  repo.write_file("b.java", "class B {}");
  repo.commit("mixed", "Dev", "dev@x.com", 1000);

  GitRepo git(repo.path().string());
  auto commits = git.enumerate_commits();
  auto kotlin = git.revision_pairs(commits[0], ".kt");
  REQUIRE(kotlin.size() == 1);
  CHECK(kotlin[0].file_path == "a.kt");
}

TEST_CASE("enumeration is stable across repeated runs") {
  FixtureRepo repo("stable");
  for (int i = 0; i < 5; ++i) {
    repo.write_file("f.java", "class F { int v = " + std::to_string(i) + "; }");
    repo.commit("c" + std::to_string(i), "Dev", "dev@x.com", 1000 + i * 100);
  }
  GitRepo git(repo.path().string());
  auto a = git.enumerate_commits();
  auto b = git.enumerate_commits();
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].commit_id == b[i].commit_id);
    CHECK(a[i].timestamp == b[i].timestamp);
  }
}

TEST_CASE("repo ids are stable and distinct per path") {
  FixtureRepo repo("ids");
  repo.write_file("x", "x");
  repo.commit("c", "Dev", "dev@x.com", 1);
  RepoId a = repo_id_for_path(repo.path().string());
  RepoId b = repo_id_for_path(repo.path().string());
  CHECK(a == b);
  FixtureRepo other("ids");
  CHECK(repo_id_for_path(other.path().string()) != a);
}

}  // TEST_SUITE
