#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace maintscope::java {

// Tolerant, lexer-driven structural parser for Java compilation units.
// It recovers the declaration structure (types, fields, methods) and the
// statement sequence of each method body. It is not a full grammar: inner
// statements of lambdas, anonymous classes, and enum-constant bodies are
// kept as opaque text inside their enclosing statement. The parse is
// deterministic, which is what the differ depends on.

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class StmtKind {
  Simple,
  Block,
  If,
  Else,
  While,
  DoWhile,
  For,
  ForEach,
  Switch,
  Case,
  Try,
  Catch,
  Finally,
  Sync,
  Label,
};

const char* stmt_kind_name(StmtKind k);

struct Stmt {
  StmtKind kind = StmtKind::Simple;
  std::string head;       // normalized text identifying the statement itself
  std::string condition;  // condition expression for condition-bearing kinds
  std::vector<Stmt> children;

  bool condition_bearing() const {
    switch (kind) {
      case StmtKind::If:
      case StmtKind::While:
      case StmtKind::DoWhile:
      case StmtKind::For:
      case StmtKind::ForEach:
      case StmtKind::Switch:
        return true;
      default:
        return false;
    }
  }
};

struct Param {
  std::string type;
  std::string name;
};

struct MethodDecl {
  std::string name;
  std::string return_type;  // "" for constructors
  bool is_constructor = false;
  bool has_body = false;
  std::vector<Param> params;
  std::vector<Stmt> body;
  std::vector<std::string> body_tokens;  // raw body token texts, for similarity

  std::string signature() const;
};

struct FieldDecl {
  std::string name;
  std::string type;
};

struct TypeDecl {
  std::string kind;  // class | interface | enum | record | annotation
  std::string name;
  std::string qualified_name;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
  std::vector<TypeDecl> nested;
};

struct CompilationUnit {
  std::string package;
  std::vector<TypeDecl> types;
};

CompilationUnit parse(const std::string& source);

// All types in the unit, nested included, paired with their qualified names.
std::vector<const TypeDecl*> all_types(const CompilationUnit& cu);

// Preorder flattening of a statement tree into comparable units.
std::vector<const Stmt*> flatten(const std::vector<Stmt>& stmts);

bool same_unit(const Stmt& a, const Stmt& b);

}  // namespace maintscope::java
