#include "fgg/ast.hpp"

#include <stdexcept>

namespace fgg {

Type Type::param(std::string name) { return Type{std::move(name), {}, true}; }
Type Type::named(std::string name, std::vector<Type> args) {
  return Type{std::move(name), std::move(args), false};
}

ExprPtr make_expr(Expr::Node node, SourcePos pos, Origin origin) {
  return std::make_shared<const Expr>(Expr{std::move(node), pos, origin});
}

ExprPtr with_origin(const ExprPtr& e, Origin origin) {
  if (e->origin == origin) return e;
  return make_expr(e->node, e->pos, origin);
}

ExprPtr var(std::string name, SourcePos pos) { return make_expr(ex::Var{std::move(name)}, pos); }
ExprPtr call(ExprPtr recv, std::string method, std::vector<Type> targs, std::vector<ExprPtr> args,
             Origin origin) {
  return make_expr(ex::Call{std::move(recv), std::move(method), std::move(targs), std::move(args)},
                   {}, origin);
}
ExprPtr lit(Type type, std::vector<ExprPtr> fields, Origin origin) {
  return make_expr(ex::StructLit{std::move(type), std::move(fields)}, {}, origin);
}
ExprPtr select(ExprPtr recv, std::string field, Origin origin) {
  return make_expr(ex::Select{std::move(recv), std::move(field)}, {}, origin);
}
ExprPtr assert_to(ExprPtr e, Type type, Origin origin) {
  return make_expr(ex::Assert{std::move(e), std::move(type)}, {}, origin);
}
ExprPtr int_lit(std::int64_t v) { return make_expr(ex::IntLit{v}); }
ExprPtr bool_lit(bool v) { return make_expr(ex::BoolLit{v}); }
ExprPtr binary(BinaryOp op, ExprPtr l, ExprPtr r, Origin origin) {
  return make_expr(ex::Binary{op, std::move(l), std::move(r)}, {}, origin);
}
ExprPtr if_else(ExprPtr c, ExprPtr t, ExprPtr e, Origin origin) {
  return make_expr(ex::If{std::move(c), std::move(t), std::move(e), std::nullopt}, {}, origin);
}
ExprPtr seq(ExprPtr a, ExprPtr b, Origin origin) {
  return make_expr(ex::Seq{std::move(a), std::move(b)}, {}, origin);
}
ExprPtr panic_expr(Origin origin) { return make_expr(ex::Panic{}, {}, origin); }

namespace {

bool equal_all(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(*a[i], *b[i])) return false;
  return true;
}

}  // namespace

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  return equal(*a, *b);
}

bool equal(const Expr& a, const Expr& b) {
  if (&a == &b) return true;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, ex::Var>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, ex::Call>) {
          return x.method == y.method && x.type_args == y.type_args &&
                 equal(*x.receiver, *y.receiver) && equal_all(x.args, y.args);
        } else if constexpr (std::is_same_v<T, ex::StructLit>) {
          return x.type == y.type && equal_all(x.fields, y.fields);
        } else if constexpr (std::is_same_v<T, ex::Select>) {
          return x.field == y.field && equal(*x.receiver, *y.receiver);
        } else if constexpr (std::is_same_v<T, ex::Assert>) {
          return x.type == y.type && equal(*x.operand, *y.operand);
        } else if constexpr (std::is_same_v<T, ex::IntLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, ex::BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, ex::Binary>) {
          return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
        } else if constexpr (std::is_same_v<T, ex::If>) {
          return equal(*x.cond, *y.cond) && equal(*x.then_branch, *y.then_branch) &&
                 equal(*x.else_branch, *y.else_branch);
        } else if constexpr (std::is_same_v<T, ex::Seq>) {
          return equal(*x.first, *y.first) && equal(*x.rest, *y.rest);
        } else {
          return true;
        }
      },
      a.node);
}

bool is_value(const Expr& e) {
  if (e.is<ex::IntLit>() || e.is<ex::BoolLit>()) return true;
  if (auto* l = e.as<ex::StructLit>()) {
    for (auto& f : l->fields)
      if (!is_value(*f)) return false;
    return true;
  }
  return false;
}

Type value_type(const Expr& v) {
  if (v.is<ex::IntLit>()) return Type::named("int");
  if (v.is<ex::BoolLit>()) return Type::named("bool");
  if (auto* l = v.as<ex::StructLit>()) return l->type;
  throw std::logic_error("value_type on a non-value");
}

namespace {

bool equal_decl(const StructDecl& a, const StructDecl& b) {
  return a.name == b.name && a.formal == b.formal && a.fields == b.fields;
}
bool equal_decl(const InterfaceDecl& a, const InterfaceDecl& b) {
  return a.name == b.name && a.formal == b.formal && a.specs == b.specs;
}
bool equal_decl(const MethodDecl& a, const MethodDecl& b) {
  return a.receiver == b.receiver && a.receiver_type == b.receiver_type &&
         a.receiver_params == b.receiver_params && a.name == b.name && a.sig == b.sig &&
         equal(*a.body, *b.body);
}

}  // namespace

bool equal(const Decl& a, const Decl& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        return equal_decl(x, std::get<std::decay_t<decltype(x)>>(b));
      },
      a);
}

bool equal(const Program& a, const Program& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i)
    if (!equal(a.decls[i], b.decls[i])) return false;
  return equal(*a.main, *b.main);
}

std::size_t node_count(const Type& t) {
  std::size_t n = 1;
  for (auto& a : t.args) n += node_count(a);
  return n;
}

namespace {

std::size_t count_formal(const TypeFormal& f) {
  std::size_t n = 0;
  for (auto& e : f) n += 1 + node_count(e.bound);
  return n;
}

std::size_t count_sig(const Signature& s) {
  std::size_t n = count_formal(s.formal) + node_count(s.result);
  for (auto& p : s.params) n += 1 + node_count(p.type);
  return n;
}

}  // namespace

std::size_t node_count(const Expr& e) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        std::size_t n = 1;
        if constexpr (std::is_same_v<T, ex::Call>) {
          n += node_count(*x.receiver);
          for (auto& t : x.type_args) n += node_count(t);
          for (auto& a : x.args) n += node_count(*a);
        } else if constexpr (std::is_same_v<T, ex::StructLit>) {
          n += node_count(x.type);
          for (auto& a : x.fields) n += node_count(*a);
        } else if constexpr (std::is_same_v<T, ex::Select>) {
          n += node_count(*x.receiver);
        } else if constexpr (std::is_same_v<T, ex::Assert>) {
          n += node_count(*x.operand) + node_count(x.type);
        } else if constexpr (std::is_same_v<T, ex::Binary>) {
          n += node_count(*x.lhs) + node_count(*x.rhs);
        } else if constexpr (std::is_same_v<T, ex::If>) {
          n += node_count(*x.cond) + node_count(*x.then_branch) + node_count(*x.else_branch);
        } else if constexpr (std::is_same_v<T, ex::Seq>) {
          n += node_count(*x.first) + node_count(*x.rest);
        }
        return n;
      },
      e.node);
}

std::size_t node_count(const Decl& d) {
  if (auto* s = std::get_if<StructDecl>(&d)) {
    std::size_t n = 1 + count_formal(s->formal);
    for (auto& f : s->fields) n += 1 + node_count(f.type);
    return n;
  }
  if (auto* i = std::get_if<InterfaceDecl>(&d)) {
    std::size_t n = 1 + count_formal(i->formal);
    for (auto& s : i->specs) n += 1 + count_sig(s.sig);
    return n;
  }
  auto& m = std::get<MethodDecl>(d);
  return 1 + m.receiver_params.size() + count_sig(m.sig) + node_count(*m.body);
}

std::size_t node_count(const Program& p) {
  std::size_t n = node_count(*p.main);
  for (auto& d : p.decls) n += node_count(d);
  return n;
}

const std::string& decl_name(const Decl& d) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, d);
}

SourcePos decl_pos(const Decl& d) {
  return std::visit([](const auto& x) { return x.pos; }, d);
}

}  // namespace fgg

namespace fgg {

std::vector<ExprPtr> children(const Expr& e) {
  return std::visit(
      [](const auto& x) -> std::vector<ExprPtr> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ex::Call>) {
          std::vector<ExprPtr> out{x.receiver};
          out.insert(out.end(), x.args.begin(), x.args.end());
          return out;
        } else if constexpr (std::is_same_v<T, ex::StructLit>) {
          return x.fields;
        } else if constexpr (std::is_same_v<T, ex::Select>) {
          return {x.receiver};
        } else if constexpr (std::is_same_v<T, ex::Assert>) {
          return {x.operand};
        } else if constexpr (std::is_same_v<T, ex::Binary>) {
          return {x.lhs, x.rhs};
        } else if constexpr (std::is_same_v<T, ex::If>) {
          return {x.cond, x.then_branch, x.else_branch};
        } else if constexpr (std::is_same_v<T, ex::Seq>) {
          return {x.first, x.rest};
        } else {
          return {};
        }
      },
      e.node);
}

ExprPtr with_children(const Expr& e, std::vector<ExprPtr> k) {
  Expr::Node node = std::visit(
      [&](const auto& x) -> Expr::Node {
        using T = std::decay_t<decltype(x)>;
        T y = x;
        if constexpr (std::is_same_v<T, ex::Call>) {
          y.receiver = k[0];
          y.args.assign(k.begin() + 1, k.end());
        } else if constexpr (std::is_same_v<T, ex::StructLit>) {
          y.fields = std::move(k);
        } else if constexpr (std::is_same_v<T, ex::Select>) {
          y.receiver = k[0];
        } else if constexpr (std::is_same_v<T, ex::Assert>) {
          y.operand = k[0];
        } else if constexpr (std::is_same_v<T, ex::Binary>) {
          y.lhs = k[0];
          y.rhs = k[1];
        } else if constexpr (std::is_same_v<T, ex::If>) {
          y.cond = k[0];
          y.then_branch = k[1];
          y.else_branch = k[2];
        } else if constexpr (std::is_same_v<T, ex::Seq>) {
          y.first = k[0];
          y.rest = k[1];
        }
        return y;
      },
      e.node);
  return make_expr(std::move(node), e.pos, e.origin);
}

std::size_t strict_arity(const Expr& e) {
  if (e.is<ex::If>() || e.is<ex::Seq>()) return 1;
  return children(e).size();
}

bool uses_extended_forms(const Expr& e) {
  if (e.is<ex::If>() || e.is<ex::Seq>() || e.is<ex::Panic>()) return true;
  if (auto* b = e.as<ex::Binary>(); b && b->op != BinaryOp::lt) return true;
  for (auto& c : children(e))
    if (uses_extended_forms(*c)) return true;
  return false;
}

}  // namespace fgg
