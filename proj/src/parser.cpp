#include "fgg/parser.hpp"

#include <charconv>
#include <set>
#include <string>

namespace fgg {

std::string format_diagnostic(const std::string& file, const Diagnostic& d) {
  return file + ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + ": " +
         (d.severity == "error" ? "" : d.severity + ": ") + d.message;
}

namespace {

enum class Tok {
  ident, number, kw_package, kw_type, kw_struct, kw_interface, kw_func, kw_return, kw_if,
  kw_else, kw_panic, kw_true, kw_false, lbrace, rbrace, lparen, rparen, lbrack, rbrack, comma,
  semi, dot, assign, lt, gt, plus, minus, neq, eof
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

const char* tok_text(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::number: return "integer";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbrack: return "'['";
    case Tok::rbrack: return "']'";
    case Tok::comma: return "','";
    case Tok::semi: return "';'";
    case Tok::dot: return "'.'";
    case Tok::assign: return "'='";
    case Tok::eof: return "end of input";
    default: return "keyword";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      SourcePos p{line_, col_};
      if (i_ >= src_.size()) {
        out.push_back({Tok::eof, "", p});
        return out;
      }
      unsigned char c = src_[i_];
      if (ident_start(c)) {
        std::size_t b = i_;
        while (i_ < src_.size() && ident_char(src_[i_])) advance();
        std::string s(src_.substr(b, i_ - b));
        out.push_back({keyword(s), s, p});
      } else if (c >= '0' && c <= '9') {
        std::size_t b = i_;
        while (i_ < src_.size() && src_[i_] >= '0' && src_[i_] <= '9') advance();
        out.push_back({Tok::number, std::string(src_.substr(b, i_ - b)), p});
      } else {
        advance();
        Tok k;
        switch (c) {
          case '{': k = Tok::lbrace; break;
          case '}': k = Tok::rbrace; break;
          case '(': k = Tok::lparen; break;
          case ')': k = Tok::rparen; break;
          case '[': k = Tok::lbrack; break;
          case ']': k = Tok::rbrack; break;
          case ',': k = Tok::comma; break;
          case ';': k = Tok::semi; break;
          case '.': k = Tok::dot; break;
          case '=': k = Tok::assign; break;
          case '<': k = Tok::lt; break;
          case '>': k = Tok::gt; break;
          case '+': k = Tok::plus; break;
          case '-': k = Tok::minus; break;
          case '!':
            if (i_ < src_.size() && src_[i_] == '=') {
              advance();
              k = Tok::neq;
              break;
            }
            [[fallthrough]];
          default:
            throw CompileError(p, std::string("unexpected character '") + char(c) + "'");
        }
        out.push_back({k, "", p});
      }
    }
  }

 private:
  static bool ident_start(unsigned char c) {
    return c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
  }
  static bool ident_char(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

  static Tok keyword(const std::string& s) {
    if (s == "package") return Tok::kw_package;
    if (s == "type") return Tok::kw_type;
    if (s == "struct") return Tok::kw_struct;
    if (s == "interface") return Tok::kw_interface;
    if (s == "func") return Tok::kw_func;
    if (s == "return") return Tok::kw_return;
    if (s == "if") return Tok::kw_if;
    if (s == "else") return Tok::kw_else;
    if (s == "panic") return Tok::kw_panic;
    if (s == "true") return Tok::kw_true;
    if (s == "false") return Tok::kw_false;
    return Tok::ident;
  }

  void advance() {
    unsigned char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++col_;
    }
  }

  void skip_space() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (src_.substr(i_, 2) == "//") {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else if (src_.substr(i_, 2) == "/*") {
        SourcePos p{line_, col_};
        advance();
        advance();
        while (i_ < src_.size() && src_.substr(i_, 2) != "*/") advance();
        if (i_ >= src_.size()) throw CompileError(p, "unterminated block comment");
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, Dialect d) : t_(std::move(toks)), dialect_(d) {}

  ParseResult run() {
    ParseResult r;
    Program prog;
    prog.dialect = dialect_;
    try {
      if (peek().kind != Tok::kw_package) throw CompileError(peek().pos, "missing package main");
      next();
      Token name = expect(Tok::ident);
      if (name.text != "main") throw CompileError(name.pos, "expected package main");
      accept(Tok::semi);
    } catch (const CompileError& e) {
      r.diagnostics.push_back(e.diagnostic());
      return r;
    }
    while (peek().kind != Tok::eof) {
      try {
        parse_top(prog);
      } catch (const CompileError& e) {
        r.diagnostics.push_back(e.diagnostic());
        recover();
      }
    }
    if (!prog.main && r.diagnostics.empty())
      r.diagnostics.push_back(CompileError(peek().pos, "missing func main").diagnostic());
    if (r.diagnostics.empty()) r.program = std::move(prog);
    return r;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
  Token next() {
    Token t = peek();
    if (i_ < t_.size() - 1) ++i_;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  Token expect(Tok k) {
    if (peek().kind != k)
      throw CompileError(peek().pos, std::string("expected ") + tok_text(k) + ", found " +
                                         describe(peek()));
    return next();
  }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::ident || t.kind == Tok::number) return "'" + t.text + "'";
    if (t.kind >= Tok::kw_package && t.kind <= Tok::kw_false) return "'" + t.text + "'";
    return tok_text(t.kind);
  }

  // Skip to the next top-level declaration.
  void recover() {
    next();
    while (peek().kind != Tok::eof) {
      if ((peek().kind == Tok::kw_type || peek().kind == Tok::kw_func) && peek().pos.column == 1)
        return;
      next();
    }
  }

  bool generic() const { return dialect_ == Dialect::fgg; }
  bool extended() const { return dialect_ != Dialect::fg; }
  void need_extended(SourcePos p, const char* what) const {
    if (!extended()) throw CompileError(p, std::string(what) + " requires the extended FG dialect");
  }

  void parse_top(Program& prog) {
    if (peek().kind == Tok::kw_type) {
      prog.decls.push_back(parse_type_decl());
    } else if (peek().kind == Tok::kw_func) {
      if (peek(1).kind == Tok::ident && peek(1).text == "main") {
        SourcePos p = next().pos;
        next();
        if (prog.main) throw CompileError(p, "duplicate func main");
        expect(Tok::lparen);
        expect(Tok::rparen);
        expect(Tok::lbrace);
        scope_.clear();
        prog.main = parse_body();
        prog.main_pos = p;
        expect(Tok::rbrace);
      } else {
        prog.decls.push_back(parse_method());
      }
    } else {
      throw CompileError(peek().pos, "expected declaration, found " + describe(peek()));
    }
    accept(Tok::semi);
  }

  TypeFormal parse_formal() {
    TypeFormal f;
    if (peek().kind != Tok::lbrack) return f;
    if (!generic()) throw CompileError(peek().pos, "type parameters are not allowed in FG");
    next();
    // Names first so bounds can refer to any parameter of the same formal.
    std::size_t save = i_;
    std::vector<std::string> names;
    while (peek().kind != Tok::rbrack) {
      names.push_back(expect(Tok::ident).text);
      skip_type();
      if (!accept(Tok::comma)) break;
    }
    for (auto& n : names) scope_.insert(n);
    i_ = save;
    while (peek().kind != Tok::rbrack) {
      std::string n = expect(Tok::ident).text;
      f.push_back({n, parse_type()});
      if (!accept(Tok::comma)) break;
    }
    expect(Tok::rbrack);
    return f;
  }

  void skip_type() {
    expect(Tok::ident);
    if (peek().kind == Tok::lbrack) {
      int depth = 0;
      do {
        if (peek().kind == Tok::lbrack) ++depth;
        if (peek().kind == Tok::rbrack) --depth;
        if (peek().kind == Tok::eof) throw CompileError(peek().pos, "unbalanced '['");
        next();
      } while (depth > 0);
    }
  }

  Type parse_type() {
    Token name = expect(Tok::ident);
    if (peek().kind == Tok::lbrack) {
      if (!generic()) throw CompileError(peek().pos, "type arguments are not allowed in FG");
      if (scope_.count(name.text))
        throw CompileError(name.pos, "type parameter " + name.text + " cannot take arguments");
      return Type::named(name.text, parse_type_args());
    }
    if (scope_.count(name.text)) return Type::param(name.text);
    return Type::named(name.text);
  }

  std::vector<Type> parse_type_args() {
    std::vector<Type> args;
    expect(Tok::lbrack);
    while (peek().kind != Tok::rbrack) {
      args.push_back(parse_type());
      if (!accept(Tok::comma)) break;
    }
    expect(Tok::rbrack);
    return args;
  }

  Signature parse_signature() {
    Signature s;
    s.formal = parse_formal();
    expect(Tok::lparen);
    while (peek().kind != Tok::rparen) {
      std::string n = expect(Tok::ident).text;
      s.params.push_back({n, parse_type()});
      if (!accept(Tok::comma)) break;
    }
    expect(Tok::rparen);
    s.result = parse_type();
    return s;
  }

  Decl parse_type_decl() {
    expect(Tok::kw_type);
    Token name = expect(Tok::ident);
    scope_.clear();
    TypeFormal formal = parse_formal();
    if (accept(Tok::kw_struct)) {
      StructDecl d{name.text, std::move(formal), {}, name.pos};
      expect(Tok::lbrace);
      while (peek().kind != Tok::rbrace) {
        std::string f = expect(Tok::ident).text;
        d.fields.push_back({f, parse_type()});
        accept(Tok::semi);
      }
      expect(Tok::rbrace);
      return d;
    }
    if (accept(Tok::kw_interface)) {
      InterfaceDecl d{name.text, std::move(formal), {}, name.pos};
      expect(Tok::lbrace);
      auto outer = scope_;
      while (peek().kind != Tok::rbrace) {
        std::string m = expect(Tok::ident).text;
        d.specs.push_back({m, parse_signature()});
        scope_ = outer;
        accept(Tok::semi);
      }
      expect(Tok::rbrace);
      return d;
    }
    throw CompileError(peek().pos, "expected struct or interface, found " + describe(peek()));
  }

  Decl parse_method() {
    Token f = expect(Tok::kw_func);
    MethodDecl m;
    m.pos = f.pos;
    scope_.clear();
    expect(Tok::lparen);
    m.receiver = expect(Tok::ident).text;
    m.receiver_type = expect(Tok::ident).text;
    if (peek().kind == Tok::lbrack) {
      if (!generic()) throw CompileError(peek().pos, "type parameters are not allowed in FG");
      next();
      while (peek().kind != Tok::rbrack) {
        m.receiver_params.push_back(expect(Tok::ident).text);
        scope_.insert(m.receiver_params.back());
        if (!accept(Tok::comma)) break;
      }
      expect(Tok::rbrack);
    }
    expect(Tok::rparen);
    Token name = expect(Tok::ident);
    m.name = name.text;
    m.sig = parse_signature();
    expect(Tok::lbrace);
    m.body = parse_body();
    expect(Tok::rbrace);
    return m;
  }

  // Body of a `{ ... }` block. Statements are folded right into Seq/If nodes;
  // the statement just before the closing brace supplies the value.
  ExprPtr parse_body() {
    SourcePos p = peek().pos;
    ExprPtr head;
    bool terminal_kw = false;
    switch (peek().kind) {
      case Tok::kw_return:
        next();
        head = parse_expr();
        terminal_kw = true;
        break;
      case Tok::kw_panic:
        need_extended(p, "panic");
        next();
        head = make_expr(ex::Panic{}, p);
        break;
      case Tok::kw_if: {
        need_extended(p, "if statement");
        next();
        expect(Tok::lparen);
        ExprPtr c = parse_expr();
        expect(Tok::rparen);
        expect(Tok::lbrace);
        ExprPtr then = parse_body();
        expect(Tok::rbrace);
        if (accept(Tok::kw_else)) {
          expect(Tok::lbrace);
          ExprPtr els = parse_body();
          expect(Tok::rbrace);
          head = make_expr(ex::If{c, then, els, std::nullopt}, p);
        } else {
          accept(Tok::semi);
          if (peek().kind == Tok::rbrace)
            throw CompileError(peek().pos, "if without else must be followed by more statements");
          return make_expr(ex::If{c, then, parse_body(), std::nullopt}, p);
        }
        break;
      }
      default:
        if (peek().kind == Tok::ident && peek().text == "_" && peek(1).kind == Tok::assign) {
          next();
          next();
        }
        head = parse_expr();
    }
    accept(Tok::semi);
    if (peek().kind == Tok::rbrace) return head;
    if (terminal_kw) throw CompileError(peek().pos, "statement after return");
    need_extended(peek().pos, "statement sequencing");
    ExprPtr rest = parse_body();
    return make_expr(ex::Seq{head, rest}, p);
  }

  ExprPtr parse_expr() {
    ExprPtr l = parse_additive();
    while (true) {
      SourcePos p = peek().pos;
      BinaryOp op;
      if (peek().kind == Tok::lt) {
        op = BinaryOp::lt;
      } else if (peek().kind == Tok::gt) {
        need_extended(p, "operator '>'");
        op = BinaryOp::gt;
      } else if (peek().kind == Tok::neq) {
        need_extended(p, "operator '!='");
        op = BinaryOp::neq;
      } else {
        return l;
      }
      next();
      l = make_expr(ex::Binary{op, l, parse_additive()}, p);
    }
  }

  ExprPtr parse_additive() {
    ExprPtr l = parse_postfix();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      SourcePos p = peek().pos;
      need_extended(p, "arithmetic");
      BinaryOp op = next().kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      l = make_expr(ex::Binary{op, l, parse_postfix()}, p);
    }
    return l;
  }

  std::vector<ExprPtr> parse_args(Tok close) {
    std::vector<ExprPtr> args;
    while (peek().kind != close) {
      args.push_back(parse_expr());
      if (!accept(Tok::comma)) break;
    }
    expect(close);
    return args;
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (peek().kind == Tok::dot) {
      SourcePos p = next().pos;
      if (accept(Tok::lparen)) {
        Type t = parse_type();
        expect(Tok::rparen);
        e = make_expr(ex::Assert{e, t}, p);
        continue;
      }
      Token name = expect(Tok::ident);
      if (peek().kind == Tok::lbrack || peek().kind == Tok::lparen) {
        std::vector<Type> targs;
        if (peek().kind == Tok::lbrack) {
          if (!generic()) throw CompileError(peek().pos, "type arguments are not allowed in FG");
          targs = parse_type_args();
        }
        expect(Tok::lparen);
        e = make_expr(ex::Call{e, name.text, std::move(targs), parse_args(Tok::rparen)}, name.pos);
      } else {
        e = make_expr(ex::Select{e, name.text}, name.pos);
      }
    }
    return e;
  }

  ExprPtr parse_primary() {
    Token t = peek();
    switch (t.kind) {
      case Tok::number:
      case Tok::minus: {
        next();
        bool neg = t.kind == Tok::minus;
        Token num = neg ? expect(Tok::number) : t;
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), v);
        if (ec != std::errc()) throw CompileError(num.pos, "integer literal out of range");
        return make_expr(ex::IntLit{neg ? -v : v}, t.pos);
      }
      case Tok::kw_true:
      case Tok::kw_false:
        next();
        return make_expr(ex::BoolLit{t.kind == Tok::kw_true}, t.pos);
      case Tok::lparen: {
        next();
        ExprPtr e = parse_expr();
        expect(Tok::rparen);
        return e;
      }
      case Tok::lbrace: {
        need_extended(t.pos, "block expression");
        next();
        ExprPtr e = parse_body();
        expect(Tok::rbrace);
        return e;
      }
      case Tok::ident: {
        next();
        if (peek().kind == Tok::lbrace || peek().kind == Tok::lbrack) {
          Type type = Type::named(t.text);
          if (peek().kind == Tok::lbrack) {
            if (!generic()) throw CompileError(peek().pos, "type arguments are not allowed in FG");
            type.args = parse_type_args();
          }
          expect(Tok::lbrace);
          return make_expr(ex::StructLit{type, parse_args(Tok::rbrace)}, t.pos);
        }
        return make_expr(ex::Var{t.text}, t.pos);
      }
      default:
        throw CompileError(t.pos, "expected expression, found " + describe(t));
    }
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
  Dialect dialect_;
  std::set<std::string> scope_;
};

}  // namespace

ParseResult parse_program(std::string_view source, Dialect dialect) {
  std::vector<Token> toks;
  try {
    toks = Lexer(source).run();
  } catch (const CompileError& e) {
    ParseResult r;
    r.diagnostics.push_back(e.diagnostic());
    return r;
  }
  return Parser(std::move(toks), dialect).run();
}

ParseResult parse_fgg(std::string_view source) { return parse_program(source, Dialect::fgg); }

ParseResult parse_fg(std::string_view source, bool extended) {
  return parse_program(source, extended ? Dialect::fg_extended : Dialect::fg);
}

}  // namespace fgg
