#include "maintscope/distill.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace maintscope {

namespace {

const char* kLabels[kChangeTypeCount] = {
    "statement_insert",
    "statement_delete",
    "statement_update",
    "statement_ordering_change",
    "additional_class",
    "removed_class",
    "additional_functionality",
    "removed_functionality",
    "method_renaming",
    "return_type_change",
    "return_type_insert",
    "return_type_delete",
    "parameter_insert",
    "parameter_delete",
    "parameter_renaming",
    "parameter_type_change",
    "attribute_insert",
    "attribute_delete",
    "attribute_type_change",
    "condition_expression_change",
};

}  // namespace

const char* change_type_label(ChangeType t) { return kLabels[static_cast<int>(t)]; }

std::optional<ChangeType> change_type_from_label(const std::string& label) {
  for (int i = 0; i < kChangeTypeCount; ++i) {
    if (label == kLabels[i]) return static_cast<ChangeType>(i);
  }
  return std::nullopt;
}

std::vector<ChangeType> all_change_types() {
  std::vector<ChangeType> out;
  out.reserve(kChangeTypeCount);
  for (int i = 0; i < kChangeTypeCount; ++i) out.push_back(static_cast<ChangeType>(i));
  return out;
}

double body_similarity(const java::MethodDecl& a, const java::MethodDecl& b) {
  const auto& ta = a.body_tokens;
  const auto& tb = b.body_tokens;
  if (ta.size() < 2 || tb.size() < 2) {
    if (ta.empty() && tb.empty()) return 1.0;
    return ta == tb ? 1.0 : 0.0;
  }
  std::map<std::pair<std::string, std::string>, int> bigrams;
  for (size_t i = 0; i + 1 < ta.size(); ++i) bigrams[{ta[i], ta[i + 1]}]++;
  size_t common = 0;
  for (size_t i = 0; i + 1 < tb.size(); ++i) {
    auto it = bigrams.find({tb[i], tb[i + 1]});
    if (it != bigrams.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  size_t na = ta.size() - 1, nb = tb.size() - 1;
  return 2.0 * static_cast<double>(common) / static_cast<double>(na + nb);
}

namespace {

std::string method_key(const java::MethodDecl& m) { return m.signature(); }

struct Candidate {
  double similarity;
  const java::MethodDecl* before;
  const java::MethodDecl* after;
};

// Greedy best-first pairing, deterministic via signature tie-breaks.
void pair_by_similarity(std::vector<const java::MethodDecl*>& befores,
                        std::vector<const java::MethodDecl*>& afters, double threshold,
                        bool require_same_name, std::vector<MethodMatch>& out) {
  std::vector<Candidate> candidates;
  for (auto* b : befores) {
    for (auto* a : afters) {
      if (require_same_name && b->name != a->name) continue;
      if (!require_same_name && b->name == a->name) continue;
      double sim = body_similarity(*b, *a);
      if (sim >= threshold) candidates.push_back({sim, b, a});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (x.similarity != y.similarity) return x.similarity > y.similarity;
    if (x.before->signature() != y.before->signature())
      return x.before->signature() < y.before->signature();
    return x.after->signature() < y.after->signature();
  });
  for (const auto& c : candidates) {
    auto bi = std::find(befores.begin(), befores.end(), c.before);
    auto ai = std::find(afters.begin(), afters.end(), c.after);
    if (bi == befores.end() || ai == afters.end()) continue;
    out.push_back({c.before, c.after});
    befores.erase(bi);
    afters.erase(ai);
  }
}

void match_members(ClassMatch& cm, const DistillOptions& opts) {
  // Fields by name.
  std::map<std::string, const java::FieldDecl*> before_fields;
  for (const auto& f : cm.before->fields) before_fields.emplace(f.name, &f);
  std::map<std::string, const java::FieldDecl*> after_fields;
  for (const auto& f : cm.after->fields) after_fields.emplace(f.name, &f);
  for (const auto& [name, bf] : before_fields) {
    auto it = after_fields.find(name);
    if (it != after_fields.end()) {
      cm.fields.push_back({bf, it->second});
    } else {
      cm.removed_fields.push_back(bf);
    }
  }
  for (const auto& [name, af] : after_fields) {
    if (!before_fields.count(name)) cm.added_fields.push_back(af);
  }

  // Methods: exact signature, then same-name overload drift, then renames.
  std::map<std::string, const java::MethodDecl*> before_sigs;
  for (const auto& m : cm.before->methods) before_sigs.emplace(method_key(m), &m);
  std::map<std::string, const java::MethodDecl*> after_sigs;
  for (const auto& m : cm.after->methods) after_sigs.emplace(method_key(m), &m);

  std::vector<const java::MethodDecl*> before_rest;
  std::vector<const java::MethodDecl*> after_rest;
  for (const auto& [sig, bm] : before_sigs) {
    auto it = after_sigs.find(sig);
    if (it != after_sigs.end()) {
      cm.methods.push_back({bm, it->second});
    } else {
      before_rest.push_back(bm);
    }
  }
  for (const auto& [sig, am] : after_sigs) {
    if (!before_sigs.count(sig)) after_rest.push_back(am);
  }

  pair_by_similarity(before_rest, after_rest, opts.rename_similarity, true, cm.methods);
  pair_by_similarity(before_rest, after_rest, opts.rename_similarity, false, cm.methods);

  cm.removed_methods = std::move(before_rest);
  cm.added_methods = std::move(after_rest);
}

// ---- statement diff ----

using Units = std::vector<const java::Stmt*>;

// Longest common subsequence over statement units; returns matched index pairs.
std::vector<std::pair<size_t, size_t>> lcs_pairs(const Units& a, const Units& b) {
  size_t n = a.size(), m = b.size();
  size_t lo = 0;
  while (lo < n && lo < m && java::same_unit(*a[lo], *b[lo])) ++lo;
  size_t hi = 0;
  while (hi + lo < n && hi + lo < m && java::same_unit(*a[n - 1 - hi], *b[m - 1 - hi])) ++hi;

  size_t an = n - lo - hi, bm = m - lo - hi;
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < lo; ++i) pairs.push_back({i, i});

  if (an > 0 && bm > 0) {
    std::vector<uint32_t> dp((an + 1) * (bm + 1), 0);
    auto at = [&](size_t i, size_t j) -> uint32_t& { return dp[i * (bm + 1) + j]; };
    for (size_t i = 1; i <= an; ++i) {
      for (size_t j = 1; j <= bm; ++j) {
        if (java::same_unit(*a[lo + i - 1], *b[lo + j - 1]))
          at(i, j) = at(i - 1, j - 1) + 1;
        else
          at(i, j) = std::max(at(i - 1, j), at(i, j - 1));
      }
    }
    std::vector<std::pair<size_t, size_t>> middle;
    size_t i = an, j = bm;
    while (i > 0 && j > 0) {
      if (java::same_unit(*a[lo + i - 1], *b[lo + j - 1]) && at(i, j) == at(i - 1, j - 1) + 1) {
        middle.push_back({lo + i - 1, lo + j - 1});
        --i;
        --j;
      } else if (at(i - 1, j) >= at(i, j - 1)) {
        --i;
      } else {
        --j;
      }
    }
    std::reverse(middle.begin(), middle.end());
    pairs.insert(pairs.end(), middle.begin(), middle.end());
  }

  for (size_t k = hi; k > 0; --k) pairs.push_back({n - k, m - k});
  return pairs;
}

struct Emitter {
  std::vector<SemanticChange>& out;
  const std::string& commit_id;
  const std::string& file_path;

  void emit(ChangeType t, const std::string& entity) {
    out.push_back({t, commit_id, file_path, entity});
  }
};

void diff_statements(const java::MethodDecl& before, const java::MethodDecl& after,
                     const std::string& entity, Emitter& em) {
  Units ub = java::flatten(before.body);
  Units ua = java::flatten(after.body);
  auto matched = lcs_pairs(ub, ua);

  std::vector<bool> b_used(ub.size(), false), a_used(ua.size(), false);
  for (auto [i, j] : matched) {
    b_used[i] = true;
    a_used[j] = true;
  }

  // Moves: identical units stranded off the common subsequence.
  for (size_t i = 0; i < ub.size(); ++i) {
    if (b_used[i]) continue;
    for (size_t j = 0; j < ua.size(); ++j) {
      if (a_used[j]) continue;
      if (java::same_unit(*ub[i], *ua[j])) {
        b_used[i] = a_used[j] = true;
        em.emit(ChangeType::StatementOrderingChange, entity);
        break;
      }
    }
  }

  // Updates: pair leftover units positionally within each gap between anchors.
  size_t bi = 0, aj = 0;
  auto process_gap = [&](size_t b_end, size_t a_end) {
    std::vector<size_t> bs, as;
    for (size_t i = bi; i < b_end; ++i)
      if (!b_used[i]) bs.push_back(i);
    for (size_t j = aj; j < a_end; ++j)
      if (!a_used[j]) as.push_back(j);
    size_t k = 0;
    for (; k < bs.size() && k < as.size(); ++k) {
      const java::Stmt& sb = *ub[bs[k]];
      const java::Stmt& sa = *ua[as[k]];
      if (sb.kind == sa.kind) {
        if (sb.condition_bearing() && sb.head == sa.head && sb.condition != sa.condition) {
          em.emit(ChangeType::ConditionExpressionChange, entity);
        } else {
          em.emit(ChangeType::StatementUpdate, entity);
        }
      } else {
        em.emit(ChangeType::StatementDelete, entity);
        em.emit(ChangeType::StatementInsert, entity);
      }
    }
    for (size_t r = k; r < bs.size(); ++r) em.emit(ChangeType::StatementDelete, entity);
    for (size_t r = k; r < as.size(); ++r) em.emit(ChangeType::StatementInsert, entity);
  };
  for (auto [i, j] : matched) {
    process_gap(i, j);
    bi = i + 1;
    aj = j + 1;
  }
  process_gap(ub.size(), ua.size());
}

void diff_signature(const java::MethodDecl& before, const java::MethodDecl& after,
                    const std::string& entity, Emitter& em) {
  if (before.name != after.name) em.emit(ChangeType::MethodRenaming, entity);

  if (!before.is_constructor && !after.is_constructor) {
    const std::string& rb = before.return_type;
    const std::string& ra = after.return_type;
    if (rb != ra) {
      if (rb == "void" && ra != "void") em.emit(ChangeType::ReturnTypeInsert, entity);
      else if (rb != "void" && ra == "void") em.emit(ChangeType::ReturnTypeDelete, entity);
      else em.emit(ChangeType::ReturnTypeChange, entity);
    }
  }

  // Parameters: name-stable pairs first, the rest positionally.
  std::vector<const java::Param*> pb, pa;
  for (const auto& p : before.params) pb.push_back(&p);
  for (const auto& p : after.params) pa.push_back(&p);
  for (auto bit = pb.begin(); bit != pb.end();) {
    auto ait = std::find_if(pa.begin(), pa.end(),
                            [&](const java::Param* q) { return q->name == (*bit)->name; });
    if (ait != pa.end()) {
      if ((*bit)->type != (*ait)->type) em.emit(ChangeType::ParameterTypeChange, entity);
      pa.erase(ait);
      bit = pb.erase(bit);
    } else {
      ++bit;
    }
  }
  size_t k = 0;
  for (; k < pb.size() && k < pa.size(); ++k) {
    if (pb[k]->type == pa[k]->type) {
      em.emit(ChangeType::ParameterRenaming, entity);
    } else {
      em.emit(ChangeType::ParameterDelete, entity);
      em.emit(ChangeType::ParameterInsert, entity);
    }
  }
  for (size_t r = k; r < pb.size(); ++r) em.emit(ChangeType::ParameterDelete, entity);
  for (size_t r = k; r < pa.size(); ++r) em.emit(ChangeType::ParameterInsert, entity);
}

std::string member_entity(const java::TypeDecl& owner, const java::MethodDecl& m) {
  return owner.qualified_name + "#" + m.signature();
}

std::string member_entity(const java::TypeDecl& owner, const java::FieldDecl& f) {
  return owner.qualified_name + "#" + f.name;
}

void emit_class_addition(const java::TypeDecl& type, Emitter& em) {
  em.emit(ChangeType::AdditionalClass, type.qualified_name);
  for (const auto& f : type.fields) em.emit(ChangeType::AttributeInsert, member_entity(type, f));
  for (const auto& m : type.methods)
    em.emit(ChangeType::AdditionalFunctionality, member_entity(type, m));
}

void emit_class_removal(const java::TypeDecl& type, Emitter& em) {
  em.emit(ChangeType::RemovedClass, type.qualified_name);
  for (const auto& f : type.fields) em.emit(ChangeType::AttributeDelete, member_entity(type, f));
  for (const auto& m : type.methods)
    em.emit(ChangeType::RemovedFunctionality, member_entity(type, m));
}

}  // namespace

EntityCorrespondence match_entities(const java::CompilationUnit& before,
                                    const java::CompilationUnit& after,
                                    const DistillOptions& opts) {
  EntityCorrespondence corr;
  std::map<std::string, const java::TypeDecl*> before_types;
  for (const auto* t : java::all_types(before)) before_types.emplace(t->qualified_name, t);
  std::map<std::string, const java::TypeDecl*> after_types;
  for (const auto* t : java::all_types(after)) after_types.emplace(t->qualified_name, t);

  for (const auto& [name, bt] : before_types) {
    auto it = after_types.find(name);
    if (it == after_types.end()) {
      corr.removed_classes.push_back(bt);
      continue;
    }
    ClassMatch cm{bt, it->second, {}, {}, {}, {}, {}, {}};
    match_members(cm, opts);
    corr.classes.push_back(std::move(cm));
  }
  for (const auto& [name, at] : after_types) {
    if (!before_types.count(name)) corr.added_classes.push_back(at);
  }
  return corr;
}

std::vector<SemanticChange> distill(const RevisionPair& pair, const DistillOptions& opts) {
  java::CompilationUnit before_cu, after_cu;
  if (pair.before_present) {
    try {
      before_cu = java::parse(pair.before);
    } catch (const java::ParseError& e) {
      throw DistillParseError("before", e.what());
    }
  }
  if (pair.after_present) {
    try {
      after_cu = java::parse(pair.after);
    } catch (const java::ParseError& e) {
      throw DistillParseError("after", e.what());
    }
  }

  std::vector<SemanticChange> changes;
  Emitter em{changes, pair.commit_id, pair.file_path};
  EntityCorrespondence corr = match_entities(before_cu, after_cu, opts);

  for (const auto* t : corr.removed_classes) emit_class_removal(*t, em);
  for (const auto* t : corr.added_classes) emit_class_addition(*t, em);

  for (const auto& cm : corr.classes) {
    for (const auto* f : cm.removed_fields)
      em.emit(ChangeType::AttributeDelete, member_entity(*cm.before, *f));
    for (const auto* f : cm.added_fields)
      em.emit(ChangeType::AttributeInsert, member_entity(*cm.after, *f));
    for (const auto& fm : cm.fields) {
      if (fm.before->type != fm.after->type)
        em.emit(ChangeType::AttributeTypeChange, member_entity(*cm.after, *fm.after));
    }
    for (const auto* m : cm.removed_methods)
      em.emit(ChangeType::RemovedFunctionality, member_entity(*cm.before, *m));
    for (const auto* m : cm.added_methods)
      em.emit(ChangeType::AdditionalFunctionality, member_entity(*cm.after, *m));
    for (const auto& mm : cm.methods) {
      std::string entity = member_entity(*cm.after, *mm.after);
      diff_signature(*mm.before, *mm.after, entity, em);
      if (mm.before->has_body && mm.after->has_body)
        diff_statements(*mm.before, *mm.after, entity, em);
    }
  }
  return changes;
}

}  // namespace maintscope
