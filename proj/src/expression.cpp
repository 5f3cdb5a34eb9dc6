#include "wk/expression.hpp"

#include "wk/error.hpp"

#include <cctype>
#include <charconv>
#include <numbers>

namespace wk {

class ExpressionParser {
 public:
  using Node = Expression::Node;
  using Op = Expression::Op;

  ExpressionParser(const std::string& src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  int parse_all() {
    const int root = parse_sum();
    skip_space();
    if (pos_ != src_.size()) error("unexpected '" + std::string(1, src_[pos_]) + "'");
    return root;
  }

  std::vector<Node> nodes;

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::InvalidArgument,
         "expression \"" + src_ + "\": " + what + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  int push(Op op, std::vector<int> args = {}, double constant = 0.0, int var = -1) {
    nodes.push_back(Node{op, constant, var, std::move(args)});
    return static_cast<int>(nodes.size()) - 1;
  }

  int parse_sum() {
    int lhs = parse_product();
    for (;;) {
      if (accept('+')) lhs = push(Op::Add, {lhs, parse_product()});
      else if (accept('-')) lhs = push(Op::Sub, {lhs, parse_product()});
      else return lhs;
    }
  }

  int parse_product() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = push(Op::Mul, {lhs, parse_unary()});
      else if (accept('/')) lhs = push(Op::Div, {lhs, parse_unary()});
      else return lhs;
    }
  }

  int parse_unary() {
    if (accept('-')) return push(Op::Neg, {parse_unary()});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    const int base = parse_primary();
    if (accept('^')) return push(Op::Pow, {base, parse_unary()});
    return base;
  }

  std::vector<int> parse_args() {
    std::vector<int> args;
    expect('(');
    if (accept(')')) return args;
    do {
      args.push_back(parse_sum());
    } while (accept(','));
    expect(')');
    return args;
  }

  int parse_primary() {
    skip_space();
    if (pos_ >= src_.size()) error("unexpected end of input");
    if (accept('(')) {
      const int inner = parse_sum();
      expect(')');
      return inner;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const char* begin = src_.data() + pos_;
      auto [end, ec] = std::from_chars(begin, src_.data() + src_.size(), v);
      if (ec != std::errc()) error("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return push(Op::Const, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      const std::string name = src_.substr(start, pos_ - start);
      return parse_identifier(name);
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  int parse_identifier(const std::string& name) {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) return push(Op::Var, {}, 0.0, static_cast<int>(i));
    }
    if (name.size() == 1) {
      // Single-letter alias for the first coordinate: x -> x1, y -> y1.
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name + "1") return push(Op::Var, {}, 0.0, static_cast<int>(i));
      }
    }
    if (name == "pi") return push(Op::Const, {}, std::numbers::pi);
    struct Unary {
      const char* name;
      Op op;
    };
    static constexpr Unary unary[] = {{"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt},
                                      {"abs", Op::Abs}, {"sin", Op::Sin}, {"cos", Op::Cos}};
    for (const auto& u : unary) {
      if (name == u.name) {
        auto args = parse_args();
        if (args.size() != 1) error(name + " takes one argument");
        return push(u.op, std::move(args));
      }
    }
    if (name == "pow") {
      auto args = parse_args();
      if (args.size() != 2) error("pow takes two arguments");
      return push(Op::Pow, std::move(args));
    }
    if (name == "norm") {
      auto args = parse_args();
      if (args.empty()) return push(Op::NormAll);
      return push(Op::Norm, std::move(args));
    }
    error("unknown identifier '" + name + "'");
  }

  const std::string& src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

Expression Expression::parse(const std::string& source, std::vector<std::string> variables) {
  ExpressionParser parser(source, variables);
  const int root = parser.parse_all();
  Expression e;
  e.source_ = source;
  e.variables_ = std::move(variables);
  e.nodes_ = std::make_shared<const std::vector<Node>>(std::move(parser.nodes));
  e.root_ = root;
  return e;
}

std::vector<std::string> coordinate_names(const std::string& prefix, int count) {
  std::vector<std::string> names;
  for (int i = 1; i <= count; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

}  // namespace wk
