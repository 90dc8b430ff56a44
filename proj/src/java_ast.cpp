#include "maintscope/java_ast.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace maintscope::java {

namespace {

enum class TokKind { Word, Number, Str, Chr, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
};

bool word_like(TokKind k) {
  return k == TokKind::Word || k == TokKind::Number || k == TokKind::Str || k == TokKind::Chr;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_part(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> toks;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      toks.push_back(next_token());
    }
    toks.push_back({TokKind::End, ""});
    return toks;
  }

private:
  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        size_t end = src_.find("*/", pos_ + 2);
        if (end == std::string::npos) throw ParseError("unterminated block comment");
        pos_ = end + 2;
      } else {
        break;
      }
    }
  }

  Token next_token() {
    char c = src_[pos_];
    if (ident_start(c)) {
      size_t start = pos_;
      while (pos_ < src_.size() && ident_part(src_[pos_])) ++pos_;
      return {TokKind::Word, src_.substr(start, pos_ - start)};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      return lex_number();
    }
    if (c == '"') {
      if (src_.compare(pos_, 3, "\"\"\"") == 0) return lex_text_block();
      return lex_quoted('"', TokKind::Str, "unterminated string literal");
    }
    if (c == '\'') return lex_quoted('\'', TokKind::Chr, "unterminated char literal");
    return lex_punct();
  }

  Token lex_number() {
    size_t start = pos_;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
        ++pos_;
      } else if ((c == '+' || c == '-') && pos_ > start) {
        char prev = std::tolower(static_cast<unsigned char>(src_[pos_ - 1]));
        if (prev == 'e' || prev == 'p') ++pos_;
        else break;
      } else {
        break;
      }
    }
    return {TokKind::Number, src_.substr(start, pos_ - start)};
  }

  Token lex_quoted(char delim, TokKind kind, const char* err) {
    size_t start = pos_++;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
        continue;
      }
      if (c == delim) {
        ++pos_;
        return {kind, src_.substr(start, pos_ - start)};
      }
      if (c == '\n') break;
      ++pos_;
    }
    throw ParseError(err);
  }

  Token lex_text_block() {
    size_t start = pos_;
    pos_ += 3;
    while (pos_ < src_.size()) {
      if (src_[pos_] == '\\') {
        pos_ += 2;
        continue;
      }
      if (src_.compare(pos_, 3, "\"\"\"") == 0) {
        pos_ += 3;
        return {TokKind::Str, src_.substr(start, pos_ - start)};
      }
      ++pos_;
    }
    throw ParseError("unterminated text block");
  }

  Token lex_punct() {
    // '>' is always a single token so generic closers like '>>' stay countable.
    static const char* three[] = {"...", "<<=", nullptr};
    static const char* two[] = {"==", "!=", "<=", "&&", "||", "++", "--", "+=", "-=", "*=",
                                "/=", "%=", "&=", "|=", "^=", "<<", "->", "::", nullptr};
    for (const char** p = three; *p; ++p) {
      if (src_.compare(pos_, 3, *p) == 0) {
        pos_ += 3;
        return {TokKind::Punct, *p};
      }
    }
    if (src_[pos_] != '>') {
      for (const char** p = two; *p; ++p) {
        if (src_.compare(pos_, 2, *p) == 0) {
          pos_ += 2;
          return {TokKind::Punct, *p};
        }
      }
    }
    return {TokKind::Punct, std::string(1, src_[pos_++])};
  }

  const std::string& src_;
  size_t pos_ = 0;
};

const std::unordered_set<std::string>& modifier_words() {
  static const std::unordered_set<std::string> m = {
      "public", "private", "protected", "static", "final", "abstract", "native",
      "synchronized", "transient", "volatile", "strictfp", "default", "sealed"};
  return m;
}

std::string join(const std::vector<Token>& toks, size_t begin, size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (!out.empty() && word_like(toks[i].kind) && word_like(toks[i - 1].kind)) out += ' ';
    out += toks[i].text;
  }
  return out;
}

std::string join(const std::vector<Token>& toks) { return join(toks, 0, toks.size()); }

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  CompilationUnit run() {
    CompilationUnit cu;
    while (!at_end()) {
      if (at_word("package")) {
        advance();
        std::vector<Token> name;
        scan_until_semi(name);
        cu.package = join(name);
      } else if (at_word("import")) {
        skip_to_semi();
      } else if (at_type_keyword() || at_annotation_decl()) {
        cu.types.push_back(parse_type(cu.package));
      } else if (at_punct("@")) {
        skip_annotation();
      } else if (cur().kind == TokKind::Word && modifier_words().count(cur().text)) {
        advance();
      } else {
        advance();  // tolerate stray tokens at top level
      }
    }
    return cu;
  }

private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t n = 1) const {
    size_t i = pos_ + n;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  void advance() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }
  bool at_end() const { return cur().kind == TokKind::End; }
  bool at_word(const char* w) const { return cur().kind == TokKind::Word && cur().text == w; }
  bool at_punct(const char* p) const { return cur().kind == TokKind::Punct && cur().text == p; }

  void expect_punct(const char* p) {
    if (!at_punct(p)) throw ParseError(std::string("expected '") + p + "', got '" + cur().text + "'");
    advance();
  }

  bool at_type_keyword() const {
    if (at_word("class") || at_word("interface") || at_word("enum")) return true;
    // 'record' is a contextual keyword; require the record-header shape so
    // identifiers named record still parse as ordinary members.
    if (at_word("record") && peek().kind == TokKind::Word && peek(2).kind == TokKind::Punct &&
        (peek(2).text == "(" || peek(2).text == "<"))
      return true;
    return false;
  }

  bool at_annotation_decl() const {
    return at_punct("@") && peek().kind == TokKind::Word && peek().text == "interface";
  }

  void skip_annotation() {
    expect_punct("@");
    if (cur().kind == TokKind::Word) advance();
    while (at_punct(".") && peek().kind == TokKind::Word) {
      advance();
      advance();
    }
    if (at_punct("(")) skip_balanced_parens();
  }

  void skip_balanced_parens() {
    expect_punct("(");
    int depth = 1;
    while (depth > 0 && !at_end()) {
      if (at_punct("(")) ++depth;
      else if (at_punct(")")) --depth;
      advance();
    }
    if (depth > 0) throw ParseError("unbalanced parentheses");
  }

  void skip_balanced_braces() {
    expect_punct("{");
    int depth = 1;
    while (depth > 0 && !at_end()) {
      if (at_punct("{")) ++depth;
      else if (at_punct("}")) --depth;
      advance();
    }
    if (depth > 0) throw ParseError("unbalanced braces");
  }

  void skip_balanced_angles() {
    expect_punct("<");
    int depth = 1;
    while (depth > 0 && !at_end()) {
      if (at_punct("<")) ++depth;
      else if (at_punct(">")) --depth;
      else if (at_punct("@")) {
        skip_annotation();
        continue;
      }
      advance();
    }
    if (depth > 0) throw ParseError("unbalanced type arguments");
  }

  void skip_to_semi() {
    while (!at_end() && !at_punct(";")) advance();
    if (at_punct(";")) advance();
  }

  void scan_until_semi(std::vector<Token>& out) {
    while (!at_end() && !at_punct(";")) {
      out.push_back(cur());
      advance();
    }
    if (at_punct(";")) advance();
  }

  // ---- declarations ----

  TypeDecl parse_type(const std::string& enclosing) {
    TypeDecl type;
    if (at_annotation_decl()) {
      advance();  // '@'
      advance();  // 'interface'
      type.kind = "annotation";
    } else {
      type.kind = cur().text;
      advance();
    }
    if (cur().kind != TokKind::Word) throw ParseError("expected type name after '" + type.kind + "'");
    type.name = cur().text;
    advance();
    type.qualified_name = enclosing.empty() ? type.name : enclosing + "." + type.name;

    if (at_punct("<")) skip_balanced_angles();

    if (type.kind == "record" && at_punct("(")) {
      std::vector<Param> components = parse_params();
      for (const auto& c : components) type.fields.push_back({c.name, c.type});
    }

    // extends / implements / permits, generics included
    while (!at_end() && !at_punct("{") && !at_punct(";")) {
      if (at_punct("<")) {
        skip_balanced_angles();
      } else if (at_punct("@")) {
        skip_annotation();
      } else if (at_punct("(")) {
        skip_balanced_parens();
      } else {
        advance();
      }
    }
    if (at_punct(";")) {  // degenerate body-less declaration
      advance();
      return type;
    }
    expect_punct("{");

    if (type.kind == "enum") parse_enum_constants(type);

    while (!at_punct("}")) {
      if (at_end()) throw ParseError("unterminated body of " + type.qualified_name);
      parse_member(type);
    }
    advance();  // '}'
    return type;
  }

  void parse_enum_constants(TypeDecl& type) {
    while (!at_end()) {
      while (at_punct("@")) skip_annotation();
      if (at_punct(";")) {
        advance();
        return;
      }
      if (at_punct("}")) return;
      if (cur().kind != TokKind::Word) {
        advance();
        continue;
      }
      FieldDecl constant{cur().text, "<enum-constant>"};
      advance();
      if (at_punct("(")) skip_balanced_parens();
      if (at_punct("{")) skip_balanced_braces();  // constant class body is opaque
      type.fields.push_back(constant);
      if (at_punct(",")) {
        advance();
        continue;
      }
      if (at_punct(";")) {
        advance();
        return;
      }
      if (at_punct("}")) return;
    }
  }

  void parse_member(TypeDecl& owner) {
    while (at_punct(";")) advance();
    if (at_punct("}")) return;

    bool saw_static = false;
    while (true) {
      if (at_punct("@") && !at_annotation_decl()) {
        skip_annotation();
      } else if (at_word("non") && peek().kind == TokKind::Punct && peek().text == "-" &&
                 peek(2).kind == TokKind::Word && peek(2).text == "sealed") {
        advance();
        advance();
        advance();
      } else if (cur().kind == TokKind::Word && modifier_words().count(cur().text) &&
                 !(cur().text == "default" && peek().kind == TokKind::Punct && peek().text == ":")) {
        if (cur().text == "static") saw_static = true;
        advance();
      } else {
        break;
      }
    }

    if (at_type_keyword() || at_annotation_decl()) {
      owner.nested.push_back(parse_type(owner.qualified_name));
      return;
    }

    if (at_punct("{")) {  // static or instance initializer block
      MethodDecl init;
      init.name = (saw_static ? "<static-init#" : "<init-block#") +
                  std::to_string(owner.methods.size()) + ">";
      init.has_body = true;
      advance();
      size_t body_start = pos_;
      init.body = parse_block();
      record_body_tokens(init, body_start, pos_ - 1);
      owner.methods.push_back(std::move(init));
      return;
    }

    // Header: everything up to '(' (method) or '=' ';' ',' (field).
    std::vector<Token> header;
    int angle = 0, bracket = 0;
    while (!at_end()) {
      if (at_punct("@")) {
        skip_annotation();
        continue;
      }
      if (at_punct("<")) {
        ++angle;
      } else if (at_punct(">")) {
        if (angle > 0) --angle;
      } else if (at_punct("[")) {
        ++bracket;
      } else if (at_punct("]")) {
        if (bracket > 0) --bracket;
      } else if (angle == 0 && bracket == 0) {
        if (at_punct("(")) {
          parse_method(owner, header);
          return;
        }
        if (at_punct("=") || at_punct(";") || at_punct(",")) {
          parse_field(owner, header);
          return;
        }
        if (at_punct("{") || at_punct("}")) {
          // Unrecognized construct; skip it without losing brace balance.
          if (at_punct("{")) skip_balanced_braces();
          return;
        }
      }
      header.push_back(cur());
      advance();
    }
    throw ParseError("unterminated member in " + owner.qualified_name);
  }

  static size_t last_word_index(const std::vector<Token>& toks) {
    for (size_t i = toks.size(); i > 0; --i) {
      if (toks[i - 1].kind == TokKind::Word) return i - 1;
    }
    return toks.size();
  }

  void parse_method(TypeDecl& owner, std::vector<Token>& header) {
    MethodDecl method;
    size_t name_idx = last_word_index(header);
    if (name_idx == header.size()) throw ParseError("method without a name in " + owner.qualified_name);
    method.name = header[name_idx].text;

    // Leading generic type parameters of the method itself.
    size_t ret_begin = 0;
    if (!header.empty() && header[0].kind == TokKind::Punct && header[0].text == "<") {
      int depth = 0;
      for (size_t i = 0; i < header.size(); ++i) {
        if (header[i].text == "<") ++depth;
        else if (header[i].text == ">" && --depth == 0) {
          ret_begin = i + 1;
          break;
        }
      }
    }
    std::vector<Token> ret(header.begin() + ret_begin, header.begin() + name_idx);
    method.return_type = join(ret);
    if (method.return_type.empty() && method.name == owner.name) method.is_constructor = true;

    method.params = parse_params();

    // Old-style array suffix on the return type.
    while (at_punct("[")) {
      advance();
      if (at_punct("]")) advance();
      method.return_type += "[]";
    }

    // throws clause / annotation-member default value
    while (!at_end() && !at_punct("{") && !at_punct(";")) {
      if (at_punct("<")) skip_balanced_angles();
      else if (at_punct("(")) skip_balanced_parens();
      else advance();
    }
    if (at_punct(";")) {
      advance();
      method.has_body = false;
    } else {
      expect_punct("{");
      size_t body_start = pos_;
      method.body = parse_block();
      record_body_tokens(method, body_start, pos_ - 1);
      method.has_body = true;
    }
    owner.methods.push_back(std::move(method));
  }

  std::vector<Param> parse_params() {
    expect_punct("(");
    std::vector<Param> params;
    std::vector<Token> chunk;
    int paren = 1, angle = 0, bracket = 0;
    auto flush = [&]() {
      if (chunk.empty()) return;
      // Strip 'final' and leading annotations were already skipped.
      std::vector<Token> tokens;
      for (auto& t : chunk) {
        if (t.kind == TokKind::Word && t.text == "final") continue;
        tokens.push_back(t);
      }
      if (tokens.empty()) return;
      size_t name_idx = last_word_index(tokens);
      if (name_idx == tokens.size()) return;
      Param p;
      p.name = tokens[name_idx].text;
      std::vector<Token> type(tokens.begin(), tokens.begin() + name_idx);
      // Array brackets written after the name belong to the type.
      for (size_t i = name_idx + 1; i < tokens.size(); ++i) type.push_back(tokens[i]);
      p.type = join(type);
      params.push_back(std::move(p));
      chunk.clear();
    };
    while (!at_end()) {
      if (at_punct("@")) {
        skip_annotation();
        continue;
      }
      if (at_punct("(")) ++paren;
      else if (at_punct(")")) {
        if (--paren == 0) {
          advance();
          flush();
          return params;
        }
      } else if (at_punct("<")) ++angle;
      else if (at_punct(">")) {
        if (angle > 0) --angle;
      } else if (at_punct("[")) ++bracket;
      else if (at_punct("]")) {
        if (bracket > 0) --bracket;
      } else if (at_punct(",") && paren == 1 && angle == 0 && bracket == 0) {
        flush();
        advance();
        continue;
      }
      chunk.push_back(cur());
      advance();
    }
    throw ParseError("unterminated parameter list");
  }

  void parse_field(TypeDecl& owner, std::vector<Token>& header) {
    size_t name_idx = last_word_index(header);
    if (name_idx == header.size()) {
      skip_to_semi();
      return;
    }
    std::vector<Token> type(header.begin(), header.begin() + name_idx);
    for (size_t i = name_idx + 1; i < header.size(); ++i) type.push_back(header[i]);
    std::string type_text = join(type);
    owner.fields.push_back({header[name_idx].text, type_text});

    while (!at_end()) {
      if (at_punct(";")) {
        advance();
        return;
      }
      if (at_punct("=")) {
        advance();
        skip_initializer();
        continue;
      }
      if (at_punct(",")) {
        advance();
        if (cur().kind != TokKind::Word) {
          skip_to_semi();
          return;
        }
        std::string decl_name = cur().text;
        advance();
        std::string decl_type = type_text;
        while (at_punct("[")) {
          advance();
          if (at_punct("]")) advance();
          decl_type += "[]";
        }
        owner.fields.push_back({decl_name, decl_type});
        continue;
      }
      advance();  // tolerate e.g. bracket suffixes already consumed
    }
    throw ParseError("unterminated field in " + owner.qualified_name);
  }

  // Consumes an initializer expression up to (not including) the ',' that
  // starts the next declarator, or the terminating ';'. A top-level ','
  // only ends the initializer when followed by the declarator pattern
  // "name =", "name ,", or "name ;" — this keeps generic arguments like
  // new HashMap<String, Integer>() inside one initializer.
  void skip_initializer() {
    int paren = 0, bracket = 0, brace = 0;
    while (!at_end()) {
      if (paren == 0 && bracket == 0 && brace == 0) {
        if (at_punct(";")) return;
        if (at_punct(",")) {
          const Token& n1 = peek(1);
          const Token& n2 = peek(2);
          bool declarator = n1.kind == TokKind::Word && n2.kind == TokKind::Punct &&
                            (n2.text == "=" || n2.text == "," || n2.text == ";" || n2.text == "[");
          if (declarator) return;
        }
      }
      if (at_punct("(")) ++paren;
      else if (at_punct(")")) --paren;
      else if (at_punct("[")) ++bracket;
      else if (at_punct("]")) --bracket;
      else if (at_punct("{")) ++brace;
      else if (at_punct("}")) {
        if (brace == 0) return;  // malformed; let the caller see the '}'
        --brace;
      }
      advance();
    }
  }

  void record_body_tokens(MethodDecl& m, size_t begin, size_t end) {
    m.body_tokens.reserve(end - begin);
    for (size_t i = begin; i < end && i < toks_.size(); ++i) m.body_tokens.push_back(toks_[i].text);
  }

  // ---- statements ----

  std::vector<Stmt> parse_block() {
    std::vector<Stmt> stmts;
    while (!at_punct("}")) {
      if (at_end()) throw ParseError("unterminated block");
      parse_statement(stmts);
    }
    advance();  // '}'
    return stmts;
  }

  std::string paren_text() {
    expect_punct("(");
    std::vector<Token> toks;
    int depth = 1;
    while (!at_end()) {
      if (at_punct("(")) ++depth;
      else if (at_punct(")")) {
        if (--depth == 0) {
          advance();
          return join(toks);
        }
      }
      toks.push_back(cur());
      advance();
    }
    throw ParseError("unterminated parenthesized expression");
  }

  void parse_statement(std::vector<Stmt>& out) {
    if (at_punct(";")) {
      advance();
      return;
    }
    if (at_punct("{")) {
      advance();
      Stmt s;
      s.kind = StmtKind::Block;
      s.head = "{}";
      s.children = parse_block();
      out.push_back(std::move(s));
      return;
    }
    if (cur().kind == TokKind::Word) {
      const std::string& w = cur().text;
      if (w == "if") return parse_if(out);
      if (w == "while") return parse_while(out);
      if (w == "do") return parse_do(out);
      if (w == "for") return parse_for(out);
      if (w == "switch") return parse_switch(out);
      if (w == "try") return parse_try(out);
      if (w == "synchronized" && peek().text == "(") return parse_sync(out);
      if (peek().kind == TokKind::Punct && peek().text == ":" && w != "default") {
        Stmt s;
        s.kind = StmtKind::Label;
        s.head = w + ":";
        advance();
        advance();
        out.push_back(std::move(s));
        return;
      }
    }
    parse_simple(out);
  }

  void parse_if(std::vector<Stmt>& out) {
    advance();  // 'if'
    Stmt s;
    s.kind = StmtKind::If;
    s.head = "if";
    s.condition = paren_text();
    parse_statement(s.children);
    out.push_back(std::move(s));
    if (at_word("else")) {
      advance();
      Stmt e;
      e.kind = StmtKind::Else;
      e.head = "else";
      parse_statement(e.children);
      out.push_back(std::move(e));
    }
  }

  void parse_while(std::vector<Stmt>& out) {
    advance();
    Stmt s;
    s.kind = StmtKind::While;
    s.head = "while";
    s.condition = paren_text();
    parse_statement(s.children);
    out.push_back(std::move(s));
  }

  void parse_do(std::vector<Stmt>& out) {
    advance();
    Stmt s;
    s.kind = StmtKind::DoWhile;
    s.head = "do-while";
    parse_statement(s.children);
    if (at_word("while")) {
      advance();
      s.condition = paren_text();
    }
    if (at_punct(";")) advance();
    out.push_back(std::move(s));
  }

  void parse_for(std::vector<Stmt>& out) {
    advance();
    expect_punct("(");
    std::vector<Token> header;
    std::vector<size_t> semi_positions;
    int depth = 1;
    while (!at_end()) {
      if (at_punct("(")) ++depth;
      else if (at_punct(")")) {
        if (--depth == 0) {
          advance();
          break;
        }
      } else if (at_punct(";") && depth == 1) {
        semi_positions.push_back(header.size());
      }
      header.push_back(cur());
      advance();
    }
    Stmt s;
    if (semi_positions.size() == 2) {
      s.kind = StmtKind::For;
      size_t a = semi_positions[0], b = semi_positions[1];
      std::vector<Token> init(header.begin(), header.begin() + a);
      std::vector<Token> cond(header.begin() + a + 1, header.begin() + b);
      std::vector<Token> update(header.begin() + b + 1, header.end());
      s.head = "for(" + join(init) + ";" + join(update) + ")";
      s.condition = join(cond);
    } else {
      s.kind = StmtKind::ForEach;
      s.head = "for-each";
      s.condition = join(header);
    }
    parse_statement(s.children);
    out.push_back(std::move(s));
  }

  void parse_switch(std::vector<Stmt>& out) {
    advance();
    Stmt s;
    s.kind = StmtKind::Switch;
    s.head = "switch";
    s.condition = paren_text();
    expect_punct("{");
    while (!at_punct("}")) {
      if (at_end()) throw ParseError("unterminated switch body");
      if (at_word("case") || at_word("default")) {
        std::vector<Token> label;
        label.push_back(cur());
        advance();
        int depth = 0;
        bool arrow = false;
        while (!at_end()) {
          if (at_punct("(") || at_punct("[")) ++depth;
          else if (at_punct(")") || at_punct("]")) --depth;
          else if (depth == 0 && at_punct(":")) {
            advance();
            break;
          } else if (depth == 0 && at_punct("->")) {
            advance();
            arrow = true;
            break;
          }
          label.push_back(cur());
          advance();
        }
        Stmt c;
        c.kind = StmtKind::Case;
        c.head = join(label);
        if (arrow) {
          parse_statement(c.children);
          out_push(s.children, std::move(c));
        } else {
          out_push(s.children, std::move(c));
        }
        continue;
      }
      parse_statement(s.children);
    }
    advance();  // '}'
    out.push_back(std::move(s));
  }

  static void out_push(std::vector<Stmt>& v, Stmt&& s) { v.push_back(std::move(s)); }

  void parse_try(std::vector<Stmt>& out) {
    advance();
    Stmt s;
    s.kind = StmtKind::Try;
    s.head = "try";
    if (at_punct("(")) s.head = "try(" + paren_text() + ")";
    if (at_punct("{")) {
      advance();
      s.children = parse_block();
    }
    while (at_word("catch")) {
      advance();
      Stmt c;
      c.kind = StmtKind::Catch;
      c.head = "catch(" + paren_text() + ")";
      if (at_punct("{")) {
        advance();
        c.children = parse_block();
      }
      s.children.push_back(std::move(c));
    }
    if (at_word("finally")) {
      advance();
      Stmt f;
      f.kind = StmtKind::Finally;
      f.head = "finally";
      if (at_punct("{")) {
        advance();
        f.children = parse_block();
      }
      s.children.push_back(std::move(f));
    }
    out.push_back(std::move(s));
  }

  void parse_sync(std::vector<Stmt>& out) {
    advance();
    Stmt s;
    s.kind = StmtKind::Sync;
    s.head = "synchronized(" + paren_text() + ")";
    if (at_punct("{")) {
      advance();
      s.children = parse_block();
    }
    out.push_back(std::move(s));
  }

  void parse_simple(std::vector<Stmt>& out) {
    std::vector<Token> toks;
    int paren = 0, bracket = 0, brace = 0;
    while (!at_end()) {
      if (paren == 0 && bracket == 0 && brace == 0) {
        if (at_punct(";")) {
          advance();
          break;
        }
        if (at_punct("}")) break;  // do not eat the enclosing block close
      }
      if (at_punct("(")) ++paren;
      else if (at_punct(")")) paren = std::max(0, paren - 1);
      else if (at_punct("[")) ++bracket;
      else if (at_punct("]")) bracket = std::max(0, bracket - 1);
      else if (at_punct("{")) ++brace;
      else if (at_punct("}")) --brace;
      toks.push_back(cur());
      advance();
    }
    if (toks.empty()) {
      if (!at_punct("}") && !at_end()) advance();  // guarantee progress
      return;
    }
    Stmt s;
    s.kind = StmtKind::Simple;
    s.head = join(toks);
    out.push_back(std::move(s));
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

void collect_types(const TypeDecl& t, std::vector<const TypeDecl*>& out) {
  out.push_back(&t);
  for (const auto& n : t.nested) collect_types(n, out);
}

void flatten_into(const std::vector<Stmt>& stmts, std::vector<const Stmt*>& out) {
  for (const auto& s : stmts) {
    // Bare blocks are structure, not statements; brace style alone is not a
    // change, and anonymous "{}" units would pair up as bogus moves.
    if (s.kind != StmtKind::Block) out.push_back(&s);
    flatten_into(s.children, out);
  }
}

}  // namespace

const char* stmt_kind_name(StmtKind k) {
  switch (k) {
    case StmtKind::Simple: return "simple";
    case StmtKind::Block: return "block";
    case StmtKind::If: return "if";
    case StmtKind::Else: return "else";
    case StmtKind::While: return "while";
    case StmtKind::DoWhile: return "do-while";
    case StmtKind::For: return "for";
    case StmtKind::ForEach: return "for-each";
    case StmtKind::Switch: return "switch";
    case StmtKind::Case: return "case";
    case StmtKind::Try: return "try";
    case StmtKind::Catch: return "catch";
    case StmtKind::Finally: return "finally";
    case StmtKind::Sync: return "synchronized";
    case StmtKind::Label: return "label";
  }
  return "?";
}

std::string MethodDecl::signature() const {
  std::string sig = name + "(";
  for (size_t i = 0; i < params.size(); ++i) {
    if (i) sig += ",";
    sig += params[i].type;
  }
  sig += ")";
  return sig;
}

CompilationUnit parse(const std::string& source) {
  Lexer lexer(source);
  Parser parser(lexer.run());
  return parser.run();
}

std::vector<const TypeDecl*> all_types(const CompilationUnit& cu) {
  std::vector<const TypeDecl*> out;
  for (const auto& t : cu.types) collect_types(t, out);
  return out;
}

std::vector<const Stmt*> flatten(const std::vector<Stmt>& stmts) {
  std::vector<const Stmt*> out;
  flatten_into(stmts, out);
  return out;
}

bool same_unit(const Stmt& a, const Stmt& b) {
  return a.kind == b.kind && a.head == b.head && a.condition == b.condition;
}

}  // namespace maintscope::java
