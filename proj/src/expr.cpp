#include "nf/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <sstream>

namespace nf {

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 8> kFuncs = {{
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"exp", Func::Exp},
    {"sinh", Func::Sinh},
    {"cosh", Func::Cosh},
    {"tanh", Func::Tanh},
    {"sqrt", Func::Sqrt},
    {"pow", Func::Pow},
}};

int arity(Func f) { return f == Func::Pow ? 2 : 1; }

class Parser {
 public:
  Parser(std::string_view src, int n) : src_(src), n_(n) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  std::string_view src_;
  int n_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ExprError(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  NodePtr make(ExprNode::Kind kind, std::size_t off) {
    auto node = std::make_unique<ExprNode>();
    node->kind = kind;
    node->offset = off;
    return node;
  }

  NodePtr binary(ExprNode::Kind kind, NodePtr l, NodePtr r, std::size_t off) {
    NodePtr node = make(kind, off);
    node->children.push_back(std::move(l));
    node->children.push_back(std::move(r));
    return node;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      std::size_t off = pos_;
      if (eat('+')) {
        lhs = binary(ExprNode::Kind::Add, std::move(lhs), term(), off);
      } else if (eat('-')) {
        lhs = binary(ExprNode::Kind::Sub, std::move(lhs), term(), off);
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      std::size_t off = pos_;
      if (eat('*')) {
        lhs = binary(ExprNode::Kind::Mul, std::move(lhs), factor(), off);
      } else if (eat('/')) {
        lhs = binary(ExprNode::Kind::Div, std::move(lhs), factor(), off);
      } else {
        return lhs;
      }
    }
  }

  // '^' binds tighter than the unary minus: -x0^2 parses as -(x0^2).
  NodePtr factor() {
    std::size_t off = pos_;
    if (eat('-')) {
      NodePtr node = make(ExprNode::Kind::Neg, off);
      node->children.push_back(powered_atom());
      return node;
    }
    return powered_atom();
  }

  NodePtr powered_atom() {
    NodePtr base = atom();
    std::size_t off = pos_;
    if (eat('^')) return binary(ExprNode::Kind::PowOp, std::move(base), atom(), off);
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return ident();
    fail("expected number, coordinate, function call or '('");
  }

  NodePtr number() {
    std::size_t off = pos_;
    double value = 0.0;
    const char* begin = src_.data() + pos_;
    const char* end = src_.data() + src_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    NodePtr node = make(ExprNode::Kind::Number, off);
    node->number = value;
    return node;
  }

  NodePtr ident() {
    std::size_t off = pos_;
    std::size_t end = pos_;
    while (end < src_.size() && std::isalpha(static_cast<unsigned char>(src_[end]))) ++end;
    std::string_view word = src_.substr(pos_, end - pos_);

    if (word == "x") {
      pos_ = end;
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
        fail("expected coordinate index after 'x'");
      int idx = 0;
      const char* begin = src_.data() + pos_;
      auto [ptr, ec] = std::from_chars(begin, src_.data() + src_.size(), idx);
      if (ec != std::errc()) fail("malformed coordinate index");
      pos_ += static_cast<std::size_t>(ptr - begin);
      if (idx >= n_) throw ExprError("coordinate x" + std::to_string(idx) +
                                         " out of range for dimension " + std::to_string(n_),
                                     off);
      NodePtr node = make(ExprNode::Kind::Coord, off);
      node->coord = idx;
      return node;
    }

    for (const auto& [name, f] : kFuncs) {
      if (word == name) {
        pos_ = end;
        if (!eat('(')) fail("expected '(' after function name");
        NodePtr node = make(ExprNode::Kind::Call, off);
        node->func = f;
        node->children.push_back(expr());
        while (eat(',')) node->children.push_back(expr());
        if (!eat(')')) fail("expected ')'");
        if (static_cast<int>(node->children.size()) != arity(f))
          throw ExprError(std::string(name) + " takes " + std::to_string(arity(f)) +
                              " argument(s)",
                          off);
        return node;
      }
    }
    throw ExprError("unknown function '" + std::string(word) + "'", off);
  }
};

template <class T, class CoordFn>
T eval_node(const ExprNode& node, const CoordFn& coord) {
  using K = ExprNode::Kind;
  switch (node.kind) {
    case K::Number:
      if constexpr (std::is_same_v<T, double>)
        return node.number;
      else
        return T::constant(node.number);
    case K::Coord:
      return coord(node.coord);
    case K::Neg:
      return -eval_node<T>(*node.children[0], coord);
    case K::Add:
      return eval_node<T>(*node.children[0], coord) + eval_node<T>(*node.children[1], coord);
    case K::Sub:
      return eval_node<T>(*node.children[0], coord) - eval_node<T>(*node.children[1], coord);
    case K::Mul:
      return eval_node<T>(*node.children[0], coord) * eval_node<T>(*node.children[1], coord);
    case K::Div:
      return eval_node<T>(*node.children[0], coord) / eval_node<T>(*node.children[1], coord);
    case K::PowOp:
      return lift_pow(eval_node<T>(*node.children[0], coord),
                      eval_node<T>(*node.children[1], coord));
    case K::Call: {
      T a = eval_node<T>(*node.children[0], coord);
      using std::cos;
      using std::cosh;
      using std::exp;
      using std::sin;
      using std::sinh;
      using std::sqrt;
      using std::tanh;
      switch (node.func) {
        case Func::Sin: return sin(a);
        case Func::Cos: return cos(a);
        case Func::Exp: return exp(a);
        case Func::Sinh: return sinh(a);
        case Func::Cosh: return cosh(a);
        case Func::Tanh: return tanh(a);
        case Func::Sqrt: return sqrt(a);
        case Func::Pow: return lift_pow(a, eval_node<T>(*node.children[1], coord));
      }
      break;
    }
  }
  throw std::logic_error("unreachable expression node kind");
}

void print_node(const ExprNode& node, std::ostream& os) {
  using K = ExprNode::Kind;
  switch (node.kind) {
    case K::Number: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << node.number;
      std::string s = tmp.str();
      if (node.number < 0)
        os << '(' << s << ')';
      else
        os << s;
      return;
    }
    case K::Coord:
      os << 'x' << node.coord;
      return;
    case K::Neg:
      os << "(-";
      print_node(*node.children[0], os);
      os << ')';
      return;
    case K::Add:
    case K::Sub:
    case K::Mul:
    case K::Div:
    case K::PowOp: {
      const char* op = node.kind == K::Add   ? "+"
                       : node.kind == K::Sub ? "-"
                       : node.kind == K::Mul ? "*"
                       : node.kind == K::Div ? "/"
                                             : "^";
      os << '(';
      print_node(*node.children[0], os);
      os << op;
      print_node(*node.children[1], os);
      os << ')';
      return;
    }
    case K::Call:
      os << func_name(node.func) << '(';
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) os << ',';
        print_node(*node.children[i], os);
      }
      os << ')';
      return;
  }
}

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprNode::Kind::Number:
      if (a.number != b.number) return false;
      break;
    case ExprNode::Kind::Coord:
      if (a.coord != b.coord) return false;
      break;
    case ExprNode::Kind::Call:
      if (a.func != b.func) return false;
      break;
    default:
      break;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!equal_nodes(*a.children[i], *b.children[i])) return false;
  return true;
}

}  // namespace

const char* func_name(Func f) {
  for (const auto& [name, fn] : kFuncs)
    if (fn == f) return name.data();
  return "?";
}

Expr parse(std::string_view source, int n) {
  if (n < 1) throw ExprError("dimension must be at least 1", 0);
  Parser p(source, n);
  return Expr(p.run(), n);
}

double Expr::eval(const std::vector<double>& point) const {
  return eval_node<double>(*root_, [&](int i) { return point[static_cast<std::size_t>(i)]; });
}

Jet2 Expr::eval_jet(const std::vector<double>& point, int dir_a, int dir_b) const {
  return eval_node<Jet2>(*root_, [&](int i) {
    Jet2 j = Jet2::constant(point[static_cast<std::size_t>(i)]);
    if (i == dir_a) j.da = 1.0;
    if (i == dir_b) j.db = 1.0;
    return j;
  });
}

std::string print(const Expr& e) {
  std::ostringstream os;
  print_node(*e.root(), os);
  return os.str();
}

bool structurally_equal(const Expr& a, const Expr& b) {
  return equal_nodes(*a.root(), *b.root());
}

}  // namespace nf
