#include "fgg/printer.hpp"

#include <sstream>
#include <vector>

namespace fgg {

const char* binary_op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::lt: return "<";
    case BinaryOp::gt: return ">";
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::neq: return "!=";
  }
  return "?";
}

namespace {

int precedence(BinaryOp op) {
  return (op == BinaryOp::add || op == BinaryOp::sub) ? 2 : 1;
}
constexpr int kPostfix = 3;

template <class T, class F>
std::string join(const std::vector<T>& xs, F&& f, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += f(xs[i]);
  }
  return out;
}

std::string type_list(const std::vector<Type>& ts) {
  return join(ts, [](const Type& t) { return print_type(t); });
}

std::string expr(const Expr& e, int min_prec);
std::string inline_body(const ExprPtr& e);

std::string args_text(const std::vector<ExprPtr>& args) {
  return join(args, [](const ExprPtr& a) { return expr(*a, 0); });
}

bool is_block(const Expr& e) { return e.is<ex::If>() || e.is<ex::Seq>() || e.is<ex::Panic>(); }

std::string expr(const Expr& e, int min_prec) {
  if (is_block(e)) return "{ " + inline_body(std::make_shared<const Expr>(e)) + " }";
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ex::Var>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, ex::Call>) {
          std::string s = expr(*x.receiver, kPostfix) + "." + x.method;
          if (!x.type_args.empty()) s += "[" + type_list(x.type_args) + "]";
          return s + "(" + args_text(x.args) + ")";
        } else if constexpr (std::is_same_v<T, ex::StructLit>) {
          return print_type(x.type) + "{" + args_text(x.fields) + "}";
        } else if constexpr (std::is_same_v<T, ex::Select>) {
          return expr(*x.receiver, kPostfix) + "." + x.field;
        } else if constexpr (std::is_same_v<T, ex::Assert>) {
          return expr(*x.operand, kPostfix) + ".(" + print_type(x.type) + ")";
        } else if constexpr (std::is_same_v<T, ex::IntLit>) {
          return std::to_string(x.value);
        } else if constexpr (std::is_same_v<T, ex::BoolLit>) {
          return x.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, ex::Binary>) {
          int p = precedence(x.op);
          std::string s = expr(*x.lhs, p) + " " + binary_op_text(x.op) + " " + expr(*x.rhs, p + 1);
          return p < min_prec ? "(" + s + ")" : s;
        } else {
          return "?";
        }
      },
      e.node);
}

// A statement starting with `{` would glue onto a preceding identifier as a struct literal.
std::string stmt_expr(const Expr& e) {
  std::string s = expr(e, 0);
  return e.is<ex::Seq>() ? "(" + s + ")" : s;
}

std::string inline_stmt(const ExprPtr& s) {
  if (auto* i = s->as<ex::If>())
    return "if (" + expr(*i->cond, 0) + ") { " + inline_body(i->then_branch) + " } else { " +
           inline_body(i->else_branch) + " }";
  if (s->is<ex::Panic>()) return "panic";
  return stmt_expr(*s);
}

std::string inline_body(const ExprPtr& start) {
  std::vector<std::string> stmts;
  ExprPtr e = start;
  while (true) {
    if (auto* s = e->as<ex::Seq>()) {
      stmts.push_back(inline_stmt(s->first));
      e = s->rest;
    } else if (auto* i = e->as<ex::If>(); i && i->then_branch->is<ex::Panic>()) {
      stmts.push_back("if (" + expr(*i->cond, 0) + ") { panic }");
      e = i->else_branch;
    } else if (e->is<ex::If>() || e->is<ex::Panic>()) {
      stmts.push_back(inline_stmt(e));
      break;
    } else {
      stmts.push_back("return " + expr(*e, 0));
      break;
    }
  }
  return join(stmts, [](const std::string& s) { return s; }, "; ");
}

void block_body(const ExprPtr& start, bool main_style, int indent, std::vector<std::string>& out) {
  std::string pad(indent, '\t');
  auto emit_if_else = [&](const ex::If& i) {
    out.push_back(pad + "if (" + expr(*i.cond, 0) + ") {");
    block_body(i.then_branch, main_style, indent + 1, out);
    out.push_back(pad + "} else {");
    block_body(i.else_branch, main_style, indent + 1, out);
    out.push_back(pad + "}");
  };
  auto emit_value = [&](const Expr& v, bool tail) {
    if (main_style) out.push_back(pad + "_ = " + expr(v, 0));
    else if (tail) out.push_back(pad + "return " + expr(v, 0));
    else out.push_back(pad + stmt_expr(v));
  };
  ExprPtr e = start;
  while (true) {
    if (auto* s = e->as<ex::Seq>()) {
      const ExprPtr& head = s->first;
      if (auto* i = head->as<ex::If>()) emit_if_else(*i);
      else if (head->is<ex::Panic>()) out.push_back(pad + "panic");
      else emit_value(*head, false);
      e = s->rest;
    } else if (auto* i = e->as<ex::If>()) {
      if (i->then_branch->is<ex::Panic>()) {
        out.push_back(pad + "if (" + expr(*i->cond, 0) + ") { panic }");
        e = i->else_branch;
      } else {
        emit_if_else(*i);
        return;
      }
    } else if (e->is<ex::Panic>()) {
      out.push_back(pad + "panic");
      return;
    } else {
      emit_value(*e, true);
      return;
    }
  }
}

std::string params_text(const std::vector<Param>& ps) {
  return join(ps, [](const Param& p) { return p.name + " " + print_type(p.type); });
}

}  // namespace

std::string print_type(const Type& t) {
  if (t.args.empty()) return t.name;
  return t.name + "[" + type_list(t.args) + "]";
}

std::string print_formal(const TypeFormal& f) {
  if (f.empty()) return "";
  return "[" + join(f, [](const FormalEntry& e) { return e.name + " " + print_type(e.bound); }) + "]";
}

std::string print_signature(const std::string& name, const Signature& sig) {
  return name + print_formal(sig.formal) + "(" + params_text(sig.params) + ") " +
         print_type(sig.result);
}

std::string print_expr(const Expr& e) { return expr(e, 0); }
std::string print_expr(const ExprPtr& e) { return expr(*e, 0); }

std::string print_decl(const Decl& d) {
  std::ostringstream os;
  if (auto* s = std::get_if<StructDecl>(&d)) {
    os << "type " << s->name << print_formal(s->formal) << " struct {";
    if (s->fields.empty()) {
      os << "}";
    } else {
      os << "\n";
      for (auto& f : s->fields) os << "\t" << f.name << " " << print_type(f.type) << "\n";
      os << "}";
    }
  } else if (auto* i = std::get_if<InterfaceDecl>(&d)) {
    os << "type " << i->name << print_formal(i->formal) << " interface {";
    if (i->specs.empty()) {
      os << "}";
    } else {
      os << "\n";
      for (auto& sp : i->specs) os << "\t" << print_signature(sp.name, sp.sig) << "\n";
      os << "}";
    }
  } else {
    auto& m = std::get<MethodDecl>(d);
    os << "func (" << m.receiver << " " << m.receiver_type;
    if (!m.receiver_params.empty())
      os << "[" << join(m.receiver_params, [](const std::string& s) { return s; }) << "]";
    os << ") " << print_signature(m.name, m.sig) << " {\n";
    std::vector<std::string> lines;
    block_body(m.body, false, 1, lines);
    for (auto& l : lines) os << l << "\n";
    os << "}";
  }
  return os.str();
}

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  os << "package main\n";
  for (auto& d : p.decls) os << "\n" << print_decl(d) << "\n";
  os << "\nfunc main() {\n";
  std::vector<std::string> lines;
  block_body(p.main, true, 1, lines);
  for (auto& l : lines) os << l << "\n";
  os << "}\n";
  return os.str();
}

}  // namespace fgg
