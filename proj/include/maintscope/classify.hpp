#pragma once

#include <array>
#include <string>
#include <vector>

namespace maintscope {

enum class ChangeCategory { Corrective, Perfective, Adaptive, Unclassified };

const char* category_name(ChangeCategory c);

// Multi-label classification outcome; empty means unclassified.
struct CategorySet {
  bool corrective = false;
  bool perfective = false;
  bool adaptive = false;

  bool empty() const { return !corrective && !perfective && !adaptive; }
  bool contains(ChangeCategory c) const;
  bool operator==(const CategorySet&) const = default;

  // Highest-precedence member: Corrective > Perfective > Adaptive.
  ChangeCategory primary() const;
};

// Per-category keyword stems. Stems are matched as prefixes of the folded
// message tokens; stems containing '-' are matched as substrings of the
// folded message text before tokenization.
struct KeywordTable {
  std::vector<std::string> corrective;
  std::vector<std::string> perfective;
  std::vector<std::string> adaptive;

  static KeywordTable defaults();

  // Override file: sections [corrective] / [perfective] / [adaptive],
  // one stem per line, '#' comments.
  static KeywordTable load(const std::string& path);

  size_t total_stems() const {
    return corrective.size() + perfective.size() + adaptive.size();
  }
};

enum class ClassifyMode { SingleLabel, MultiLabel };

CategorySet classify_multi(const std::string& message, const KeywordTable& table);

// Single-label mode resolves multi-matches by precedence
// Corrective > Perfective > Adaptive; no match yields Unclassified.
ChangeCategory classify_single(const std::string& message, const KeywordTable& table);

// Mode-dispatching form: in single-label mode the set has at most one member.
CategorySet classify(const std::string& message, const KeywordTable& table, ClassifyMode mode);

}  // namespace maintscope
