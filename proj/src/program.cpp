#include "tracebound/program.hpp"

#include <optional>
#include <stdexcept>

namespace tb {

struct Program::Node {
  Kind kind;
  std::string var;
  Expr expr = Expr::lit(0);
  BExpr cond = BExpr::top();
  std::optional<Program> first;
  std::optional<Program> second;
};

namespace {

std::shared_ptr<Program::Node> make(Program::Kind k) {
  auto n = std::make_shared<Program::Node>();
  n->kind = k;
  return n;
}

}  // namespace

Program Program::skip() {
  static const Program s(make(Kind::Skip));
  return s;
}

Program Program::assign(std::string var, Expr e) {
  auto n = make(Kind::Assign);
  n->var = std::move(var);
  n->expr = std::move(e);
  return Program(std::move(n));
}

Program Program::prob(Program left, Program right) {
  auto n = make(Kind::Prob);
  n->first = std::move(left);
  n->second = std::move(right);
  return Program(std::move(n));
}

Program Program::nondet(Program left, Program right) {
  auto n = make(Kind::Nondet);
  n->first = std::move(left);
  n->second = std::move(right);
  return Program(std::move(n));
}

Program Program::seq(Program first, Program second) {
  auto n = make(Kind::Seq);
  n->first = std::move(first);
  n->second = std::move(second);
  return Program(std::move(n));
}

Program Program::ite(BExpr cond, Program then_branch, Program else_branch) {
  auto n = make(Kind::Ite);
  n->cond = std::move(cond);
  n->first = std::move(then_branch);
  n->second = std::move(else_branch);
  return Program(std::move(n));
}

Program Program::loop(BExpr cond, Program body) {
  auto n = make(Kind::While);
  n->cond = std::move(cond);
  n->first = std::move(body);
  return Program(std::move(n));
}

Program::Kind Program::kind() const { return node_->kind; }
const std::string& Program::var() const { return node_->var; }
const Expr& Program::expr() const { return node_->expr; }
const BExpr& Program::cond() const { return node_->cond; }

const Program& Program::first() const {
  if (!node_->first) throw std::logic_error("Program::first on leaf");
  return *node_->first;
}

const Program& Program::second() const {
  if (!node_->second) throw std::logic_error("Program::second on leaf");
  return *node_->second;
}

bool operator==(const Program& a, const Program& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Program::Kind::Skip:
      return true;
    case Program::Kind::Assign:
      return a.var() == b.var() && a.expr() == b.expr();
    case Program::Kind::While:
      return a.cond() == b.cond() && a.first() == b.first();
    case Program::Kind::Ite:
      if (!(a.cond() == b.cond())) return false;
      [[fallthrough]];
    default:
      return a.first() == b.first() && a.second() == b.second();
  }
}

namespace {

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

void print_block(const Program& p, int indent, std::string& out);

void print_stmt(const Program& p, int indent, std::string& out) {
  switch (p.kind()) {
    case Program::Kind::Skip:
      out += pad(indent) + "skip";
      break;
    case Program::Kind::Assign:
      out += pad(indent) + p.var() + " := " + to_string(p.expr());
      break;
    case Program::Kind::Seq:
      print_stmt(p.first(), indent, out);
      out += ";\n";
      print_stmt(p.second(), indent, out);
      break;
    case Program::Kind::Prob:
    case Program::Kind::Nondet:
      out += pad(indent) + "{\n";
      print_block(p.first(), indent + 1, out);
      out += "\n" + pad(indent) + (p.kind() == Program::Kind::Prob ? "} <+> {\n" : "} [] {\n");
      print_block(p.second(), indent + 1, out);
      out += "\n" + pad(indent) + "}";
      break;
    case Program::Kind::Ite:
      out += pad(indent) + "if " + to_string(p.cond()) + " then {\n";
      print_block(p.first(), indent + 1, out);
      out += "\n" + pad(indent) + "} else {\n";
      print_block(p.second(), indent + 1, out);
      out += "\n" + pad(indent) + "}";
      break;
    case Program::Kind::While:
      out += pad(indent) + "while " + to_string(p.cond()) + " do {\n";
      print_block(p.first(), indent + 1, out);
      out += "\n" + pad(indent) + "}";
      break;
  }
}

void print_block(const Program& p, int indent, std::string& out) { print_stmt(p, indent, out); }

}  // namespace

std::string to_string(const Program& p, int indent) {
  std::string out;
  print_stmt(p, indent, out);
  return out;
}

}  // namespace tb
