#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maintscope/java_ast.hpp"

namespace maintscope {

// Closed taxonomy subset handled by the differ. The enumeration is part of
// the tool's file formats; labels are stable.
enum class ChangeType {
  StatementInsert,
  StatementDelete,
  StatementUpdate,
  StatementOrderingChange,
  AdditionalClass,
  RemovedClass,
  AdditionalFunctionality,
  RemovedFunctionality,
  MethodRenaming,
  ReturnTypeChange,
  ReturnTypeInsert,
  ReturnTypeDelete,
  ParameterInsert,
  ParameterDelete,
  ParameterRenaming,
  ParameterTypeChange,
  AttributeInsert,
  AttributeDelete,
  AttributeTypeChange,
  ConditionExpressionChange,
};

inline constexpr int kChangeTypeCount = 20;

const char* change_type_label(ChangeType t);
std::optional<ChangeType> change_type_from_label(const std::string& label);
std::vector<ChangeType> all_change_types();

struct SemanticChange {
  ChangeType type;
  std::string commit_id;
  std::string file_path;
  std::string entity;  // class qualified name or Class#member locator
};

// One consecutive-revision pair of a single file. EMPTY side is an empty
// string together with the corresponding *_present flag cleared.
struct RevisionPair {
  std::string commit_id;
  std::string file_path;
  std::string before;
  std::string after;
  bool before_present = true;
  bool after_present = true;
};

struct DistillOptions {
  double rename_similarity = 0.6;  // token-bigram Dice threshold
};

class DistillParseError : public std::runtime_error {
public:
  DistillParseError(std::string side, const std::string& what)
      : std::runtime_error(what), side(std::move(side)) {}
  std::string side;  // "before" or "after"
};

// Entity correspondence between two parsed compilation units.
struct MethodMatch {
  const java::MethodDecl* before;
  const java::MethodDecl* after;
};

struct FieldMatch {
  const java::FieldDecl* before;
  const java::FieldDecl* after;
};

struct ClassMatch {
  const java::TypeDecl* before;
  const java::TypeDecl* after;
  std::vector<MethodMatch> methods;
  std::vector<const java::MethodDecl*> removed_methods;
  std::vector<const java::MethodDecl*> added_methods;
  std::vector<FieldMatch> fields;
  std::vector<const java::FieldDecl*> removed_fields;
  std::vector<const java::FieldDecl*> added_fields;
};

struct EntityCorrespondence {
  std::vector<ClassMatch> classes;
  std::vector<const java::TypeDecl*> removed_classes;
  std::vector<const java::TypeDecl*> added_classes;
};

EntityCorrespondence match_entities(const java::CompilationUnit& before,
                                    const java::CompilationUnit& after,
                                    const DistillOptions& opts = {});

// Token-bigram Dice similarity of two method bodies.
double body_similarity(const java::MethodDecl& a, const java::MethodDecl& b);

// Distills the taxonomy-labeled changes of one revision pair.
// Throws DistillParseError when a non-empty side fails to parse.
std::vector<SemanticChange> distill(const RevisionPair& pair, const DistillOptions& opts = {});

}  // namespace maintscope
