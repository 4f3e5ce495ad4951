#pragma once

// Tiny arithmetic expression compiler for transcribed formulas.
//
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := ('-'|'+') unary | power
//   power := atom (('^'|'**') unary)?
//   atom  := number | name | name '(' token ')' | '(' expr ')' | '{' expr '}'
//
// Names and calls are resolved to slot indices at compile time, so evaluation
// is a walk over a flat node array.

#include <cctype>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ebcv {

struct ExpressionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class Expression {
 public:
  using Resolver = std::function<std::optional<int>(const std::string&)>;

  Expression() = default;

  static Expression compile(std::string_view src, const Resolver& resolve) {
    Expression e;
    e.src_ = std::string(src);
    Parser ps{e.src_, 0, resolve, e.nodes_};
    e.root_ = ps.parse_expr();
    ps.skip_ws();
    if (ps.pos != e.src_.size())
      throw ExpressionError("unexpected '" + std::string(1, e.src_[ps.pos]) +
                            "' in expression: " + e.src_);
    return e;
  }

  double eval(std::span<const double> slots) const {
    if (nodes_.empty()) throw ExpressionError("empty expression");
    return eval_node(root_, slots);
  }

  const std::string& source() const { return src_; }

 private:
  enum class Op { Num, Slot, Neg, Add, Sub, Mul, Div, Pow };
  struct Node {
    Op op;
    double value = 0.0;
    int slot = -1;
    int lhs = -1;
    int rhs = -1;
  };

  struct Parser {
    const std::string& s;
    std::size_t pos;
    const Resolver& resolve;
    std::vector<Node>& nodes;

    int push(Node n) {
      nodes.push_back(n);
      return static_cast<int>(nodes.size()) - 1;
    }
    void skip_ws() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool accept(std::string_view tok) {
      skip_ws();
      if (s.compare(pos, tok.size(), tok) == 0) {
        pos += tok.size();
        return true;
      }
      return false;
    }
    [[noreturn]] void fail(const std::string& what) {
      throw ExpressionError(what + " at offset " + std::to_string(pos) + " in: " + s);
    }

    int parse_expr() {
      int lhs = parse_term();
      for (;;) {
        if (accept("+")) lhs = push({Op::Add, 0, -1, lhs, parse_term()});
        else if (accept("-")) lhs = push({Op::Sub, 0, -1, lhs, parse_term()});
        else return lhs;
      }
    }
    int parse_term() {
      int lhs = parse_unary();
      for (;;) {
        skip_ws();
        if (s.compare(pos, 2, "**") == 0) return lhs;  // handled in parse_power
        if (accept("*")) lhs = push({Op::Mul, 0, -1, lhs, parse_unary()});
        else if (accept("/")) lhs = push({Op::Div, 0, -1, lhs, parse_unary()});
        else return lhs;
      }
    }
    int parse_unary() {
      if (accept("-")) return push({Op::Neg, 0, -1, parse_unary(), -1});
      if (accept("+")) return parse_unary();
      return parse_power();
    }
    int parse_power() {
      int base = parse_atom();
      if (accept("**") || accept("^")) return push({Op::Pow, 0, -1, base, parse_unary()});
      return base;
    }
    int parse_atom() {
      skip_ws();
      if (pos >= s.size()) fail("unexpected end");
      const char c = s[pos];
      if (c == '(' || c == '{') {
        ++pos;
        int inner = parse_expr();
        if (!accept(c == '(' ? ")" : "}")) fail("unbalanced bracket");
        return inner;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(s.substr(pos), &used);
        } catch (const std::exception&) {
          fail("bad number");
        }
        pos += used;
        return push({Op::Num, v, -1, -1, -1});
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
          ++pos;
        std::string name = s.substr(start, pos - start);
        skip_ws();
        if (pos < s.size() && s[pos] == '(') {
          // Compound symbol such as Dr(4): resolved as a single name.
          std::size_t close = s.find(')', pos);
          if (close == std::string::npos) fail("unbalanced call");
          std::string arg = s.substr(pos + 1, close - pos - 1);
          std::string key = name + "(";
          for (char ch : arg)
            if (!std::isspace(static_cast<unsigned char>(ch))) key += ch;
          key += ")";
          auto slot = resolve(key);
          if (slot) {
            pos = close + 1;
            return push({Op::Slot, 0, *slot, -1, -1});
          }
        }
        auto slot = resolve(name);
        if (!slot) fail("unknown symbol '" + name + "'");
        return push({Op::Slot, 0, *slot, -1, -1});
      }
      fail("unexpected character");
    }
  };

  double eval_node(int i, std::span<const double> x) const {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    switch (n.op) {
      case Op::Num: return n.value;
      case Op::Slot:
        if (static_cast<std::size_t>(n.slot) >= x.size())
          throw ExpressionError("slot out of range in: " + src_);
        return x[static_cast<std::size_t>(n.slot)];
      case Op::Neg: return -eval_node(n.lhs, x);
      case Op::Add: return eval_node(n.lhs, x) + eval_node(n.rhs, x);
      case Op::Sub: return eval_node(n.lhs, x) - eval_node(n.rhs, x);
      case Op::Mul: return eval_node(n.lhs, x) * eval_node(n.rhs, x);
      case Op::Div: return eval_node(n.lhs, x) / eval_node(n.rhs, x);
      case Op::Pow: return std::pow(eval_node(n.lhs, x), eval_node(n.rhs, x));
    }
    return 0.0;
  }

  std::string src_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Ordered symbol list; the slot of a name is its position.
class SymbolTable {
 public:
  SymbolTable() = default;
  explicit SymbolTable(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) index_[names_[i]] = static_cast<int>(i);
  }

  int add(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    names_.push_back(name);
    const int i = static_cast<int>(names_.size()) - 1;
    index_[name] = i;
    return i;
  }

  std::optional<int> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  Expression compile(std::string_view src) const {
    return Expression::compile(src, [this](const std::string& n) { return find(n); });
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace ebcv
