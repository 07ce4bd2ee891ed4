#include "warped/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <utility>
#include <vector>

namespace warped {

namespace {

enum class NodeKind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };

struct Node {
  NodeKind kind;
  double number = 0.0;
  std::string call;  // sqrt, exp, ln, arctan
  std::unique_ptr<Node> a, b;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make_node(NodeKind k) {
  auto n = std::make_unique<Node>();
  n->kind = k;
  return n;
}

struct Token {
  enum Kind { Number, Ident, Op, End } kind;
  double number = 0.0;
  std::string text;
  size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    tok_.pos = i_;
    if (i_ >= s_.size()) {
      tok_.kind = Token::End;
      tok_.text.clear();
      return;
    }
    const char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* start = s_.c_str() + i_;
      char* end = nullptr;
      const double v = std::strtod(start, &end);
      if (end == start) fail("malformed number");
      i_ += static_cast<size_t>(end - start);
      tok_.kind = Token::Number;
      tok_.number = v;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i_;
      while (j < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
        ++j;
      tok_.kind = Token::Ident;
      tok_.text = s_.substr(i_, j - i_);
      i_ = j;
      return;
    }
    if (std::string("+-*/^()").find(c) != std::string::npos) {
      tok_.kind = Token::Op;
      tok_.text = std::string(1, c);
      ++i_;
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << "expression error at position " << i_ << ": " << msg << " in \"" << s_ << "\"";
    throw ExprError(os.str());
  }

  const std::string& s_;
  size_t i_ = 0;
  Token tok_;
};

bool is_function_name(const std::string& s) {
  return s == "sqrt" || s == "exp" || s == "ln" || s == "log" || s == "arctan" || s == "atan";
}

class Parser {
 public:
  explicit Parser(const std::string& s) : src_(s), lex_(s) {}

  NodePtr parse(std::string* var_name) {
    NodePtr e = parse_sum();
    if (lex_.peek().kind != Token::End) fail("trailing input");
    *var_name = var_;
    return e;
  }

 private:
  NodePtr parse_sum() {
    NodePtr left = parse_term();
    while (lex_.peek().kind == Token::Op &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      const bool add = lex_.take().text == "+";
      NodePtr n = make_node(add ? NodeKind::Add : NodeKind::Sub);
      n->a = std::move(left);
      n->b = parse_term();
      left = std::move(n);
    }
    return left;
  }

  NodePtr parse_term() {
    NodePtr left = parse_unary();
    while (lex_.peek().kind == Token::Op &&
           (lex_.peek().text == "*" || lex_.peek().text == "/")) {
      const bool mul = lex_.take().text == "*";
      NodePtr n = make_node(mul ? NodeKind::Mul : NodeKind::Div);
      n->a = std::move(left);
      n->b = parse_unary();
      left = std::move(n);
    }
    return left;
  }

  NodePtr parse_unary() {
    if (lex_.peek().kind == Token::Op && lex_.peek().text == "-") {
      lex_.take();
      NodePtr n = make_node(NodeKind::Neg);
      n->a = parse_unary();
      return n;
    }
    if (lex_.peek().kind == Token::Op && lex_.peek().text == "+") {
      lex_.take();
      return parse_unary();
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (lex_.peek().kind == Token::Op && lex_.peek().text == "^") {
      lex_.take();
      NodePtr n = make_node(NodeKind::Pow);
      n->a = std::move(base);
      n->b = parse_unary();  // right-associative; allows a^-2 and a^b^c
      return n;
    }
    return base;
  }

  NodePtr parse_primary() {
    Token t = lex_.take();
    if (t.kind == Token::Number) {
      NodePtr n = make_node(NodeKind::Number);
      n->number = t.number;
      return n;
    }
    if (t.kind == Token::Ident) {
      if (is_function_name(t.text)) {
        expect_op("(");
        NodePtr n = make_node(NodeKind::Call);
        n->call = t.text;
        n->a = parse_sum();
        expect_op(")");
        return n;
      }
      if (t.text == "pi") {
        NodePtr n = make_node(NodeKind::Number);
        n->number = 3.14159265358979323846;
        return n;
      }
      if (t.text == "e") {
        NodePtr n = make_node(NodeKind::Number);
        n->number = 2.71828182845904523536;
        return n;
      }
      if (var_.empty()) var_ = t.text;
      if (t.text != var_) fail("more than one free variable: '" + var_ + "' and '" + t.text + "'");
      return make_node(NodeKind::Variable);
    }
    if (t.kind == Token::Op && t.text == "(") {
      NodePtr e = parse_sum();
      expect_op(")");
      return e;
    }
    fail("expected a number, name, or parenthesized expression");
  }

  void expect_op(const char* op) {
    Token t = lex_.take();
    if (t.kind != Token::Op || t.text != op) fail(std::string("expected '") + op + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << "expression error near position " << lex_.peek().pos << ": " << msg << " in \"" << src_
       << "\"";
    throw ExprError(os.str());
  }

  const std::string& src_;
  Lexer lex_;
  std::string var_;
};

bool tree_is_constant(const Node& n) {
  switch (n.kind) {
    case NodeKind::Number:
      return true;
    case NodeKind::Variable:
      return false;
    case NodeKind::Neg:
      return tree_is_constant(*n.a);
    case NodeKind::Call:
      return tree_is_constant(*n.a);
    default:
      return tree_is_constant(*n.a) && tree_is_constant(*n.b);
  }
}

Jet1D eval_node(const Node& n, const Jet1D& var);

double eval_constant(const Node& n) {
  const Jet1D v = eval_node(n, Jet1D::variable(0.0, 0));
  return v.value();
}

Jet1D eval_node(const Node& n, const Jet1D& var) {
  switch (n.kind) {
    case NodeKind::Number:
      return Jet1D::constant(n.number, var.order(), var.t0());
    case NodeKind::Variable:
      return var;
    case NodeKind::Add:
      return eval_node(*n.a, var) + eval_node(*n.b, var);
    case NodeKind::Sub:
      return eval_node(*n.a, var) - eval_node(*n.b, var);
    case NodeKind::Mul:
      return eval_node(*n.a, var) * eval_node(*n.b, var);
    case NodeKind::Div:
      return eval_node(*n.a, var) / eval_node(*n.b, var);
    case NodeKind::Neg:
      return jet1_neg(eval_node(*n.a, var));
    case NodeKind::Pow: {
      if (tree_is_constant(*n.b)) return jet1_pow(eval_node(*n.a, var), eval_constant(*n.b));
      // Variable exponent: a^b = exp(b ln a).
      return jet1_exp(jet1_mul(eval_node(*n.b, var), jet1_log(eval_node(*n.a, var))));
    }
    case NodeKind::Call: {
      Jet1D inner = eval_node(*n.a, var);
      if (n.call == "sqrt") return jet1_sqrt(inner);
      if (n.call == "exp") return jet1_exp(inner);
      if (n.call == "ln" || n.call == "log") return jet1_log(inner);
      return jet1_atan(inner);  // arctan / atan
    }
  }
  throw ExprError("expression error: unreachable node kind");
}

class ExprFunction final : public ScalarFunction1D {
 public:
  ExprFunction(NodePtr root, std::string text) : root_(std::move(root)), text_(std::move(text)) {}

  std::vector<double> derivatives(double t, int order) const override {
    if (order < 0 || order > kMaxDerivOrder)
      throw JetOrderError("ExprFunction: derivative order out of range");
    try {
      return eval_node(*root_, Jet1D::variable(t, order)).derivs(order);
    } catch (const JetDomainError& e) {
      std::ostringstream os;
      os << "evaluating \"" << text_ << "\" at t = " << t << ": " << e.what();
      throw DomainError(os.str());
    }
  }

  std::string describe() const override { return text_; }

 private:
  NodePtr root_;
  std::string text_;
};

}  // namespace

FuncPtr parse_expression(const std::string& text) {
  Parser p(text);
  std::string var;
  NodePtr root = p.parse(&var);
  return std::make_shared<ExprFunction>(std::move(root), text);
}

FuncPtr constant_function(double v) {
  std::ostringstream os;
  os << v;
  return parse_expression(os.str());
}

}  // namespace warped
