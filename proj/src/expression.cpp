#include "ckahler/expression.hpp"

#include <cctype>
#include <limits>

namespace ckahler {

Expression Expression::literal(Rational value, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Literal;
  n->value = std::move(value);
  n->span = span;
  return Expression(std::move(n));
}

Expression Expression::coordinate(int index, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Coordinate;
  n->index = index;
  n->span = span;
  return Expression(std::move(n));
}

Expression Expression::parameter(int index, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Parameter;
  n->index = index;
  n->span = span;
  return Expression(std::move(n));
}

Expression Expression::negate(Expression operand, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negate;
  n->has_division = operand.has_division();
  n->children.push_back(std::move(operand));
  n->span = span;
  return Expression(std::move(n));
}

Expression Expression::binary(Kind kind, Expression lhs, Expression rhs, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->has_division = kind == Kind::Div || lhs.has_division() || rhs.has_division();
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  n->span = span;
  return Expression(std::move(n));
}

Expression Expression::power(Expression base, unsigned exponent, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->exponent = exponent;
  n->has_division = base.has_division();
  n->children.push_back(std::move(base));
  n->span = span;
  return Expression(std::move(n));
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.value == y.value && x.index == y.index && x.exponent == y.exponent &&
         x.children == y.children;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Identifiers& ids, const ParseOptions& opt)
      : text_(text), ids_(ids), opt_(opt) {}

  Expression parse() {
    skip_space();
    if (pos_ >= text_.size()) fail("empty expression");
    Expression e = expr();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what, ErrorCode code = ErrorCode::SyntaxError) const {
    throw Error(code, what + " at line " + std::to_string(opt_.line) + ", column " + std::to_string(pos_ + 1));
  }

  SourceSpan span_from(std::size_t start) const {
    return {opt_.line, static_cast<int>(start) + 1, static_cast<int>(pos_ - start)};
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression expr() {
    const std::size_t start = pos_;
    Expression lhs = term();
    while (true) {
      skip_space();
      if (accept('+')) {
        lhs = Expression::binary(Expression::Kind::Add, lhs, term(), span_from(start));
      } else if (accept('-')) {
        lhs = Expression::binary(Expression::Kind::Sub, lhs, term(), span_from(start));
      } else {
        return lhs;
      }
    }
  }

  Expression term() {
    skip_space();
    const std::size_t start = pos_;
    Expression lhs = factor();
    while (true) {
      if (accept('*')) {
        lhs = Expression::binary(Expression::Kind::Mul, lhs, factor(), span_from(start));
      } else if (accept('/')) {
        lhs = Expression::binary(Expression::Kind::Div, lhs, factor(), span_from(start));
      } else {
        return lhs;
      }
    }
  }

  Expression factor() {
    skip_space();
    const std::size_t start = pos_;
    Expression b = base();
    if (accept('^')) {
      skip_space();
      const std::size_t digits = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (digits == pos_) fail("expected a non-negative integer exponent");
      const std::string_view ds = text_.substr(digits, pos_ - digits);
      if (ds.size() > 4) fail("exponent too large");
      return Expression::power(b, static_cast<unsigned>(std::stoul(std::string(ds))), span_from(start));
    }
    return b;
  }

  Expression base() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const std::size_t start = pos_;
    const char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      return Expression::negate(base(), span_from(start));
    }
    if (c == '(') {
      ++pos_;
      Expression e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  Expression number() {
    const std::size_t start = pos_;
    std::string_view whole = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      if (!opt_.allow_decimals) fail("decimal literals are only accepted by the float backend");
      ++pos_;
      std::string_view frac = digits();
      if (whole.empty() && frac.empty()) fail("malformed number");
      std::string num = std::string(whole) + std::string(frac);
      std::string den = "1" + std::string(frac.size(), '0');
      return Expression::literal(Rational::parse(num + "/" + den), span_from(start));
    }
    if (pos_ + 1 < text_.size() && text_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      std::string_view den = digits();
      if (std::string(den).find_first_not_of('0') == std::string::npos) {
        pos_ = start;
        fail("zero denominator in rational literal");
      }
      return Expression::literal(Rational::parse(std::string(whole) + "/" + std::string(den)), span_from(start));
    }
    return Expression::literal(Rational::parse(whole), span_from(start));
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    for (std::size_t i = 0; i < ids_.coordinates.size(); ++i) {
      if (ids_.coordinates[i] == name) return Expression::coordinate(static_cast<int>(i), span_from(start));
    }
    for (std::size_t i = 0; i < ids_.parameters.size(); ++i) {
      if (ids_.parameters[i] == name) return Expression::parameter(static_cast<int>(i), span_from(start));
    }
    pos_ = start;
    fail("undeclared identifier '" + name + "'", ErrorCode::UndeclaredIdentifier);
  }

  std::string_view text_;
  const Identifiers& ids_;
  const ParseOptions& opt_;
  std::size_t pos_ = 0;
};

// Binding strength: sums 1, products 2, powers 3, atoms and negation 4.
int precedence(const Expression& e) {
  switch (e.kind()) {
    case Expression::Kind::Add:
    case Expression::Kind::Sub:
      return 1;
    case Expression::Kind::Mul:
    case Expression::Kind::Div:
      return 2;
    case Expression::Kind::Pow:
      return 3;
    default:
      return 4;
  }
}

void print(const Expression& e, const Identifiers& ids, std::string& out);

void print_wrapped(const Expression& e, const Identifiers& ids, std::string& out, bool wrap) {
  if (wrap) out += '(';
  print(e, ids, out);
  if (wrap) out += ')';
}

void print(const Expression& e, const Identifiers& ids, std::string& out) {
  using K = Expression::Kind;
  switch (e.kind()) {
    case K::Literal:
      out += e.value().to_string();
      return;
    case K::Coordinate:
      out += ids.coordinates.at(static_cast<std::size_t>(e.index()));
      return;
    case K::Parameter:
      out += ids.parameters.at(static_cast<std::size_t>(e.index()));
      return;
    case K::Negate:
      out += '-';
      print_wrapped(e.lhs(), ids, out, precedence(e.lhs()) < 4);
      return;
    case K::Pow:
      print_wrapped(e.lhs(), ids, out, precedence(e.lhs()) < 4);
      out += '^';
      out += std::to_string(e.exponent());
      return;
    default:
      break;
  }
  const int p = precedence(e);
  const char* op = e.kind() == K::Add ? " + " : e.kind() == K::Sub ? " - " : e.kind() == K::Mul ? " * " : " / ";
  print_wrapped(e.lhs(), ids, out, precedence(e.lhs()) < p);
  out += op;
  print_wrapped(e.rhs(), ids, out, precedence(e.rhs()) <= p);
}

}  // namespace

Expression parse_expression(std::string_view text, const Identifiers& ids, const ParseOptions& options) {
  return Parser(text, ids, options).parse();
}

std::string to_string(const Expression& e, const Identifiers& ids) {
  std::string out;
  print(e, ids, out);
  return out;
}

template <class S>
Jet<S> to_jet(const Expression& e, const JetSpacePtr& space, int order, std::span<const S> parameters) {
  using K = Expression::Kind;
  switch (e.kind()) {
    case K::Literal:
      return Jet<S>::constant(space, order, e.value());
    case K::Coordinate:
      return Jet<S>::coordinate(space, order, e.index());
    case K::Parameter:
      if (static_cast<std::size_t>(e.index()) >= parameters.size()) {
        throw Error(ErrorCode::SchemaError, "no value supplied for parameter " + std::to_string(e.index()));
      }
      return Jet<S>::constant(space, order, parameters[static_cast<std::size_t>(e.index())]);
    case K::Negate:
      return -to_jet(e.lhs(), space, order, parameters);
    case K::Pow:
      return to_jet(e.lhs(), space, order, parameters).pow(e.exponent());
    case K::Add:
      return to_jet(e.lhs(), space, order, parameters) + to_jet(e.rhs(), space, order, parameters);
    case K::Sub:
      return to_jet(e.lhs(), space, order, parameters) - to_jet(e.rhs(), space, order, parameters);
    case K::Mul:
      return to_jet(e.lhs(), space, order, parameters) * to_jet(e.rhs(), space, order, parameters);
    case K::Div:
      return to_jet(e.lhs(), space, order, parameters) / to_jet(e.rhs(), space, order, parameters);
  }
  throw Error(ErrorCode::InvariantViolation, "unknown expression node");
}

template Jet<ParamPoly> to_jet(const Expression&, const JetSpacePtr&, int, std::span<const ParamPoly>);
template Jet<double> to_jet(const Expression&, const JetSpacePtr&, int, std::span<const double>);

}  // namespace ckahler
