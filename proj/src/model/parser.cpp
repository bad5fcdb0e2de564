#include "srnsens/model/parser.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>

#include "srnsens/error.hpp"

namespace srn {

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      t.kind = Tok::Number;
      t.text = std::string(src.substr(i, j - i));
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (ec != std::errc() || ptr != t.text.data() + t.text.size())
        throw ParseError("malformed number '" + t.text + "'", line, col);
      advance(j - i);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      t.kind = Tok::Punct;
      t.text = "->";
      advance(2);
    } else if (std::string_view(";:,=@()+-*/^").find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

struct Symbols {
  std::vector<std::string> species;
  std::vector<std::string> params;
  std::map<std::string, std::size_t, std::less<>> species_index;
  std::map<std::string, std::size_t, std::less<>> param_index;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, Symbols& symbols) : toks_(std::move(tokens)), sym_(symbols) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_end() const { return peek().kind == Tok::End; }

  [[noreturn]] void fail(const std::string& msg, const Token& t) const { throw ParseError(msg, t.line, t.column); }

  bool is_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }

  const Token& expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "'" + found(), peek());
    return next();
  }

  const Token& expect_ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier" + found(), peek());
    return next();
  }

  std::string found() const {
    if (peek().kind == Tok::End) return " but reached end of input";
    return " but found '" + peek().text + "'";
  }

  void skip_statement() {
    while (!at_end() && !is_punct(";")) next();
    if (!at_end()) next();
  }

  // ---- expressions ----

  Expr parse_expr(const std::vector<Consumption>* reactants, bool allow_params) {
    reactants_ = reactants;
    allow_params_ = allow_params;
    return additive();
  }

  Expr additive() {
    Expr lhs = multiplicative();
    while (is_punct("+") || is_punct("-")) {
      const bool plus = next().text == "+";
      Expr rhs = multiplicative();
      lhs = plus ? raw(Op::Add, lhs, rhs) : raw(Op::Sub, lhs, rhs);
    }
    return lhs;
  }

  Expr multiplicative() {
    Expr lhs = unary();
    while (is_punct("*") || is_punct("/")) {
      const bool mul = next().text == "*";
      Expr rhs = unary();
      lhs = mul ? raw(Op::Mul, lhs, rhs) : raw(Op::Div, lhs, rhs);
    }
    return lhs;
  }

  // '^' binds tighter than unary minus: -x^2 == -(x^2).
  Expr unary() {
    if (is_punct("-")) {
      next();
      return -unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (is_punct("^")) {
      next();
      Expr exponent = unary();  // right-associative, allows x^-1
      return Expr::pow(base, exponent);
    }
    return base;
  }

  Expr primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      return Expr::constant(t.number);
    }
    if (t.kind == Tok::Ident) {
      next();
      if (t.text == "mass_action") {
        if (!reactants_) fail("mass_action() is only valid as a reaction propensity", t);
        expect_punct("(");
        const auto* saved = reactants_;
        Expr rate = additive();
        reactants_ = saved;
        expect_punct(")");
        if (rate.depends_on_species()) fail("mass_action() rate may not depend on species", t);
        std::vector<std::string> names;
        for (const auto& c : *reactants_) names.push_back(sym_.species[c.species]);
        return Expr::mass_action(rate, *reactants_, std::move(names));
      }
      if (auto it = sym_.species_index.find(t.text); it != sym_.species_index.end())
        return Expr::species(it->second, t.text);
      if (auto it = sym_.param_index.find(t.text); it != sym_.param_index.end()) {
        if (!allow_params_) fail("parameter '" + t.text + "' not allowed here", t);
        return Expr::param(it->second, t.text);
      }
      fail("unknown identifier '" + t.text + "'", t);
    }
    if (is_punct("(")) {
      next();
      Expr e = additive();
      expect_punct(")");
      return e;
    }
    fail("expected expression" + found(), t);
  }

  // Binary nodes built without algebraic simplification beyond constant
  // folding so the printed form stays close to the source.
  static Expr raw(Op op, const Expr& a, const Expr& b) {
    switch (op) {
      case Op::Add: return a + b;
      case Op::Sub: return a - b;
      case Op::Mul: return a * b;
      default: return a / b;
    }
  }

  // ---- statements ----

  void declarations_pass() {
    while (!at_end()) {
      const Token& kw = peek();
      if (kw.kind != Tok::Ident) fail("expected a statement keyword" + found(), kw);
      if (kw.text == "species") {
        next();
        if (peek().kind != Tok::Ident) fail("expected at least one species name" + found(), peek());
        while (!is_punct(";")) {
          if (is_punct(",")) {
            next();
            continue;
          }
          const Token& id = expect_ident();
          declare(id, true);
        }
        next();
      } else if (kw.text == "param") {
        next();
        const Token& id = expect_ident();
        declare(id, false);
        skip_statement();
      } else if (kw.text == "init" || kw.text == "reaction") {
        skip_statement();
      } else {
        fail("unknown statement '" + kw.text + "'", kw);
      }
    }
  }

  void declare(const Token& id, bool species) {
    if (id.text == "mass_action") fail("'mass_action' is reserved", id);
    if (sym_.species_index.count(id.text) || sym_.param_index.count(id.text))
      fail("duplicate identifier '" + id.text + "'", id);
    if (species) {
      sym_.species_index[id.text] = sym_.species.size();
      sym_.species.push_back(id.text);
    } else {
      sym_.param_index[id.text] = sym_.params.size();
      sym_.params.push_back(id.text);
    }
  }

  double signed_number() {
    double sign = 1.0;
    if (is_punct("-")) {
      next();
      sign = -1.0;
    }
    if (peek().kind != Tok::Number) fail("expected a number" + found(), peek());
    return sign * next().number;
  }

  std::vector<Consumption> side(std::vector<int>& stoich, int direction) {
    std::vector<Consumption> terms;
    if (peek().kind == Tok::Number && peek().number == 0.0) {
      next();
      return terms;
    }
    if (is_punct("->") || is_punct("@")) return terms;
    while (true) {
      int count = 1;
      if (peek().kind == Tok::Number) {
        const Token& n = next();
        if (n.number < 1 || n.number != static_cast<int>(n.number)) fail("stoichiometric coefficient must be a positive integer", n);
        count = static_cast<int>(n.number);
      }
      const Token& id = expect_ident();
      auto it = sym_.species_index.find(id.text);
      if (it == sym_.species_index.end()) fail("unknown species '" + id.text + "'", id);
      bool merged = false;
      for (auto& c : terms)
        if (c.species == it->second) {
          c.count += count;
          merged = true;
        }
      if (!merged) terms.push_back({it->second, count});
      stoich[it->second] += direction * count;
      if (!is_punct("+")) break;
      next();
    }
    return terms;
  }

  struct Parsed {
    std::vector<double> param_values;
    std::vector<bool> param_set;
    State initial;
    std::vector<Reaction> reactions;
    std::map<std::string, Token> reaction_tokens;
  };

  Parsed full_pass() {
    Parsed out;
    out.param_values.assign(sym_.params.size(), 0.0);
    out.param_set.assign(sym_.params.size(), false);
    out.initial.assign(sym_.species.size(), 0);
    std::map<std::string, bool, std::less<>> init_seen;
    while (!at_end()) {
      const Token kw = next();
      if (kw.text == "species") {
        skip_statement();
      } else if (kw.text == "param") {
        const Token& id = expect_ident();
        const std::size_t idx = sym_.param_index.at(id.text);
        expect_punct("=");
        out.param_values[idx] = signed_number();
        out.param_set[idx] = true;
        expect_punct(";");
      } else if (kw.text == "init") {
        while (true) {
          const Token& id = expect_ident();
          auto it = sym_.species_index.find(id.text);
          if (it == sym_.species_index.end()) fail("unknown species '" + id.text + "'", id);
          if (init_seen[id.text]) fail("initial count of '" + id.text + "' given twice", id);
          init_seen[id.text] = true;
          expect_punct("=");
          const Token& n = peek();
          if (n.kind != Tok::Number || n.number < 0 || n.number != static_cast<double>(static_cast<Count>(n.number)))
            fail("initial count must be a non-negative integer", n);
          out.initial[it->second] = static_cast<Count>(next().number);
          if (!is_punct(",")) break;
          next();
        }
        expect_punct(";");
      } else {  // reaction
        const Token id = expect_ident();
        if (out.reaction_tokens.count(id.text)) fail("duplicate reaction name '" + id.text + "'", id);
        out.reaction_tokens[id.text] = id;
        expect_punct(":");
        Reaction r;
        r.name = id.text;
        r.stoich.assign(sym_.species.size(), 0);
        r.reactants = side(r.stoich, -1);
        expect_punct("->");
        r.products = side(r.stoich, +1);
        expect_punct("@");
        r.mass_action_sugar = peek().kind == Tok::Ident && peek().text == "mass_action";
        r.propensity = parse_expr(&r.reactants, true);
        if (r.mass_action_sugar && r.propensity.op() != Op::MassAction && !r.propensity.is_zero())
          r.mass_action_sugar = false;
        expect_punct(";");
        out.reactions.push_back(std::move(r));
      }
    }
    for (std::size_t i = 0; i < sym_.params.size(); ++i)
      if (!out.param_set[i]) fail("parameter '" + sym_.params[i] + "' has no value", toks_.back());
    return out;
  }

  const Token& last() const { return toks_.back(); }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Symbols& sym_;
  const std::vector<Consumption>* reactants_ = nullptr;
  bool allow_params_ = true;
};

Symbols symbols_of(const ReactionNetwork& net) {
  Symbols s;
  s.species = net.species_names();
  s.params = net.param_names();
  for (std::size_t i = 0; i < s.species.size(); ++i) s.species_index[s.species[i]] = i;
  for (std::size_t i = 0; i < s.params.size(); ++i) s.param_index[s.params[i]] = i;
  return s;
}

std::string number_text(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string side_text(const std::vector<Consumption>& terms, const std::vector<std::string>& names) {
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += " + ";
    if (terms[i].count != 1) out += std::to_string(terms[i].count) + " ";
    out += names[terms[i].species];
  }
  return out;
}

}  // namespace

ReactionNetwork parse_model(std::string_view text) {
  Symbols sym;
  Parser first(tokenize(text), sym);
  first.declarations_pass();
  if (sym.species.empty()) throw ParseError("model declares no species", 1, 1);

  Parser second(tokenize(text), sym);
  auto parsed = second.full_pass();
  if (parsed.reactions.empty())
    throw ParseError("model needs at least one reaction", second.last().line, second.last().column);

  try {
    return ReactionNetwork(sym.species, sym.params, std::move(parsed.param_values), std::move(parsed.reactions),
                           std::move(parsed.initial));
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    for (const auto& [name, tok] : parsed.reaction_tokens)
      if (msg.rfind("reaction '" + name + "'", 0) == 0) throw ParseError(msg, tok.line, tok.column);
    throw ParseError(msg, 1, 1);
  }
}

Expr parse_expression(std::string_view text, const ReactionNetwork& network) {
  Symbols sym = symbols_of(network);
  Parser p(tokenize(text), sym);
  Expr e = p.parse_expr(nullptr, true);
  if (!p.at_end()) p.fail("unexpected trailing input '" + p.peek().text + "'", p.peek());
  return e;
}

OutputFunction parse_output(std::string_view text, const ReactionNetwork& network) {
  Symbols sym = symbols_of(network);
  Parser p(tokenize(text), sym);
  Expr e = p.parse_expr(nullptr, false);
  if (!p.at_end()) p.fail("unexpected trailing input '" + p.peek().text + "'", p.peek());
  return OutputFunction(std::move(e));
}

std::string print_model(const ReactionNetwork& net) {
  std::ostringstream out;
  const auto& species = net.species_names();
  out << "species";
  for (const auto& s : species) out << ' ' << s;
  out << ";\n\n";
  for (std::size_t i = 0; i < net.param_count(); ++i)
    out << "param " << net.param_names()[i] << " = " << number_text(net.param_values()[i]) << ";\n";
  if (net.param_count()) out << '\n';
  out << "init ";
  for (std::size_t i = 0; i < species.size(); ++i)
    out << (i ? ", " : "") << species[i] << " = " << net.initial_state()[i];
  out << ";\n\n";
  for (const auto& r : net.reactions()) {
    out << "reaction " << r.name << ": " << side_text(r.reactants, species) << " -> "
        << side_text(r.products, species) << " @ " << r.propensity.to_string() << ";\n";
  }
  return out.str();
}

}  // namespace srn
