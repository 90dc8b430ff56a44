#include "maintscope/classify.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace maintscope {

const char* category_name(ChangeCategory c) {
  switch (c) {
    case ChangeCategory::Corrective: return "corrective";
    case ChangeCategory::Perfective: return "perfective";
    case ChangeCategory::Adaptive: return "adaptive";
    case ChangeCategory::Unclassified: return "unclassified";
  }
  return "unclassified";
}

bool CategorySet::contains(ChangeCategory c) const {
  switch (c) {
    case ChangeCategory::Corrective: return corrective;
    case ChangeCategory::Perfective: return perfective;
    case ChangeCategory::Adaptive: return adaptive;
    case ChangeCategory::Unclassified: return empty();
  }
  return false;
}

ChangeCategory CategorySet::primary() const {
  if (corrective) return ChangeCategory::Corrective;
  if (perfective) return ChangeCategory::Perfective;
  if (adaptive) return ChangeCategory::Adaptive;
  return ChangeCategory::Unclassified;
}

KeywordTable KeywordTable::defaults() {
  KeywordTable t;
  // The published corrective list prints "esolv"; the leading "r" was lost
  // typographically, so the shipped stem is "resolv". Overridable via load().
  t.corrective = {"fix", "resolv", "clos", "handl", "issue", "defect", "bug", "problem", "ticket"};
  t.perfective = {"refactor", "re-factor", "reimplement", "re-implement", "design",
                  "replac", "modify", "updat", "upgrad", "cleanup", "clean-up"};
  t.adaptive = {"add", "new", "introduc", "implement", "implemented", "extend", "feature", "support"};
  return t;
}

namespace {

std::string fold(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out += static_cast<char>(std::tolower(c));
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokenize(const std::string& folded) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : folded) {
    if (std::isalnum(c)) {
      cur += static_cast<char>(c);
    } else if (!cur.empty()) {
      tokens.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  return tokens;
}

bool matches_category(const std::string& folded, const std::vector<std::string>& tokens,
                      const std::vector<std::string>& stems) {
  for (const auto& stem : stems) {
    if (stem.empty()) continue;
    if (stem.find('-') != std::string::npos) {
      if (folded.find(stem) != std::string::npos) return true;
      continue;
    }
    for (const auto& tok : tokens) {
      if (tok.size() >= stem.size() && tok.compare(0, stem.size(), stem) == 0) return true;
    }
  }
  return false;
}

}  // namespace

CategorySet classify_multi(const std::string& message, const KeywordTable& table) {
  std::string folded = fold(message);
  std::vector<std::string> tokens = tokenize(folded);
  CategorySet set;
  set.corrective = matches_category(folded, tokens, table.corrective);
  set.perfective = matches_category(folded, tokens, table.perfective);
  set.adaptive = matches_category(folded, tokens, table.adaptive);
  return set;
}

ChangeCategory classify_single(const std::string& message, const KeywordTable& table) {
  return classify_multi(message, table).primary();
}

CategorySet classify(const std::string& message, const KeywordTable& table, ClassifyMode mode) {
  CategorySet set = classify_multi(message, table);
  if (mode == ClassifyMode::MultiLabel) return set;
  CategorySet single;
  switch (set.primary()) {
    case ChangeCategory::Corrective: single.corrective = true; break;
    case ChangeCategory::Perfective: single.perfective = true; break;
    case ChangeCategory::Adaptive: single.adaptive = true; break;
    case ChangeCategory::Unclassified: break;
  }
  return single;
}

KeywordTable KeywordTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open keyword table: " + path);
  KeywordTable table;
  std::vector<std::string>* section = nullptr;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t == "[corrective]") {
      section = &table.corrective;
    } else if (t == "[perfective]") {
      section = &table.perfective;
    } else if (t == "[adaptive]") {
      section = &table.adaptive;
    } else if (t[0] == '[') {
      throw std::runtime_error("unknown keyword section in " + path + ": " + t);
    } else {
      if (!section) throw std::runtime_error("stem before any section in " + path + ": " + t);
      section->push_back(fold(t));
    }
  }
  return table;
}

}  // namespace maintscope
