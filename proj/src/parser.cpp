#include "coforce/parser.hpp"

#include <cctype>
#include <sstream>

namespace coforce {

std::string Diagnostic::render() const {
  std::ostringstream os;
  os << "line " << line << ", col " << col << ": " << message;
  if (!expected.empty()) {
    os << " (expected ";
    for (size_t i = 0; i < expected.size(); ++i) {
      if (i) os << " or ";
      os << expected[i];
    }
    os << ")";
  }
  return os.str();
}

const Formula* TheoryFile::find_goal(const std::string& name) const {
  for (const auto& [n, f] : goals)
    if (n == name) return &f;
  return nullptr;
}

namespace {

struct Token {
  enum class Kind {
    Ident, LParen, RParen, Comma, Dot, Colon, Slash, Bar, Amp, Arrow, FatArrow, Equals,
    Newline, End
  };
  Kind kind;
  std::string text;
  int line;
  int col;
};

const char* kind_name(Token::Kind k) {
  switch (k) {
    case Token::Kind::Ident: return "identifier";
    case Token::Kind::LParen: return "'('";
    case Token::Kind::RParen: return "')'";
    case Token::Kind::Comma: return "','";
    case Token::Kind::Dot: return "'.'";
    case Token::Kind::Colon: return "':'";
    case Token::Kind::Slash: return "'/'";
    case Token::Kind::Bar: return "'|'";
    case Token::Kind::Amp: return "'&'";
    case Token::Kind::Arrow: return "'->'";
    case Token::Kind::FatArrow: return "'=>'";
    case Token::Kind::Equals: return "'='";
    case Token::Kind::Newline: return "end of line";
    case Token::Kind::End: return "end of input";
  }
  return "?";
}

struct ParseError {
  Diagnostic diag;
};

[[noreturn]] void err(const Token& at, std::string msg, std::vector<std::string> expected = {}) {
  throw ParseError{Diagnostic{at.line, at.col, std::move(msg), std::move(expected)}};
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Token::Kind k, std::string s, int l, int c) {
    out.push_back(Token{k, std::move(s), l, c});
  };
  while (i < text.size()) {
    char ch = text[i];
    if (ch == '\n') {
      push(Token::Kind::Newline, "\n", line, col);
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (ch == '#') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      ++col;
      continue;
    }
    int l = line, c = col;
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string word;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        word += text[i++];
        ++col;
      }
      push(Token::Kind::Ident, std::move(word), l, c);
      continue;
    }
    switch (ch) {
      case '(': push(Token::Kind::LParen, "(", l, c); break;
      case ')': push(Token::Kind::RParen, ")", l, c); break;
      case ',': push(Token::Kind::Comma, ",", l, c); break;
      case '.': push(Token::Kind::Dot, ".", l, c); break;
      case ':': push(Token::Kind::Colon, ":", l, c); break;
      case '/': push(Token::Kind::Slash, "/", l, c); break;
      case '|': push(Token::Kind::Bar, "|", l, c); break;
      case '&': push(Token::Kind::Amp, "&", l, c); break;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          push(Token::Kind::Arrow, "->", l, c);
          ++i;
          ++col;
          break;
        }
        throw ParseError{Diagnostic{l, c, "stray '-'", {"'->'"}}};
      case '=':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          push(Token::Kind::FatArrow, "=>", l, c);
          ++i;
          ++col;
          break;
        }
        push(Token::Kind::Equals, "=", l, c);
        break;
      default:
        throw ParseError{Diagnostic{l, c, std::string("unexpected character '") + ch + "'", {}}};
    }
    ++i;
    ++col;
  }
  out.push_back(Token{Token::Kind::End, "", line, col});
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
  bool at(Token::Kind k) const { return peek().kind == k; }
  bool at_word(const std::string& w) const {
    return peek().kind == Token::Kind::Ident && peek().text == w;
  }
  const Token& expect(Token::Kind k) {
    if (!at(k)) err(peek(), "unexpected " + describe(peek()), {kind_name(k)});
    return next();
  }
  void skip_newlines() {
    while (at(Token::Kind::Newline)) next();
  }
  static std::string describe(const Token& t) {
    if (t.kind == Token::Kind::Ident) return "'" + t.text + "'";
    return kind_name(t.kind);
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

bool is_keyword(const std::string& w) {
  return w == "pred" || w == "fun" || w == "equality" || w == "axiom" || w == "goal" ||
         w == "forall" || w == "exists" || w == "true" || w == "false" || w == "on" ||
         w == "off";
}

Term parse_term_at(Cursor& cur, const Signature& sig);

std::vector<Term> parse_args(Cursor& cur, const Signature& sig) {
  std::vector<Term> args;
  cur.expect(Token::Kind::LParen);
  if (!cur.at(Token::Kind::RParen)) {
    args.push_back(parse_term_at(cur, sig));
    while (cur.at(Token::Kind::Comma)) {
      cur.next();
      args.push_back(parse_term_at(cur, sig));
    }
  }
  cur.expect(Token::Kind::RParen);
  return args;
}

Term parse_term_at(Cursor& cur, const Signature& sig) {
  const Token& t = cur.peek();
  if (t.kind != Token::Kind::Ident || is_keyword(t.text))
    err(t, "unexpected " + Cursor::describe(t), {"term"});
  std::string name = cur.next().text;
  if (cur.at(Token::Kind::LParen)) {
    auto args = parse_args(cur, sig);
    auto ar = sig.function_arity(name);
    if (!ar) err(t, "'" + name + "' is not a declared function");
    if (static_cast<size_t>(*ar) != args.size())
      err(t, "'" + name + "' expects " + std::to_string(*ar) + " arguments, got " +
                 std::to_string(args.size()));
    return Term::app(name, std::move(args));
  }
  if (auto ar = sig.function_arity(name)) {
    if (*ar != 0) err(t, "function '" + name + "' needs arguments");
    return Term::app(name);
  }
  return Term::var(name);
}

Atom parse_atom_at(Cursor& cur, const Signature& sig) {
  const Token& t = cur.peek();
  if (t.kind != Token::Kind::Ident || is_keyword(t.text))
    err(t, "unexpected " + Cursor::describe(t), {"atom"});
  // predicate atom or equality between terms
  if (sig.predicate_arity(t.text)) {
    std::string name = cur.next().text;
    int ar = *sig.predicate_arity(name);
    std::vector<Term> args;
    if (cur.at(Token::Kind::LParen)) args = parse_args(cur, sig);
    if (static_cast<int>(args.size()) != ar)
      err(t, "'" + name + "' expects " + std::to_string(ar) + " arguments, got " +
                 std::to_string(args.size()));
    return Atom{name, std::move(args)};
  }
  Term lhs = parse_term_at(cur, sig);
  if (!cur.at(Token::Kind::Equals))
    err(cur.peek(), "'" + t.text + "' is not a declared predicate", {"'='"});
  if (!sig.with_equality) err(cur.peek(), "equality used but not enabled (equality on)");
  cur.next();
  Term rhs = parse_term_at(cur, sig);
  return eq_atom(std::move(lhs), std::move(rhs));
}

Formula parse_formula_at(Cursor& cur, const Signature& sig);

Formula parse_primary(Cursor& cur, const Signature& sig) {
  const Token& t = cur.peek();
  if (t.kind == Token::Kind::LParen) {
    cur.next();
    Formula f = parse_formula_at(cur, sig);
    cur.expect(Token::Kind::RParen);
    return f;
  }
  if (cur.at_word("true")) {
    cur.next();
    return Formula::top();
  }
  if (cur.at_word("false")) {
    cur.next();
    return Formula::bot();
  }
  if (cur.at_word("forall") || cur.at_word("exists")) {
    bool uni = t.text == "forall";
    cur.next();
    std::vector<std::string> vars;
    while (cur.at(Token::Kind::Ident) && !is_keyword(cur.peek().text))
      vars.push_back(cur.next().text);
    if (vars.empty()) err(cur.peek(), "quantifier needs at least one variable", {"identifier"});
    cur.expect(Token::Kind::Dot);
    Formula body = parse_formula_at(cur, sig);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      body = uni ? Formula::forall(*it, std::move(body)) : Formula::exists(*it, std::move(body));
    return body;
  }
  return Formula::atom(parse_atom_at(cur, sig));
}

Formula parse_conj(Cursor& cur, const Signature& sig) {
  std::vector<Formula> parts{parse_primary(cur, sig)};
  while (cur.at(Token::Kind::Amp)) {
    cur.next();
    parts.push_back(parse_primary(cur, sig));
  }
  return Formula::conj(std::move(parts));
}

Formula parse_disj(Cursor& cur, const Signature& sig) {
  std::vector<Formula> parts{parse_conj(cur, sig)};
  while (cur.at(Token::Kind::Bar)) {
    cur.next();
    parts.push_back(parse_conj(cur, sig));
  }
  return Formula::disj(std::move(parts));
}

Formula parse_formula_at(Cursor& cur, const Signature& sig) {
  Formula lhs = parse_disj(cur, sig);
  if (cur.at(Token::Kind::Arrow)) {
    cur.next();
    Formula rhs = parse_formula_at(cur, sig);  // right associative
    return Formula::implies(std::move(lhs), std::move(rhs));
  }
  return lhs;
}

std::vector<Atom> parse_atom_list(Cursor& cur, const Signature& sig) {
  if (cur.at_word("true")) {
    cur.next();
    return {};
  }
  std::vector<Atom> atoms{parse_atom_at(cur, sig)};
  while (cur.at(Token::Kind::Comma)) {
    cur.next();
    atoms.push_back(parse_atom_at(cur, sig));
  }
  return atoms;
}

CoherentAxiom parse_axiom_body(Cursor& cur, const Signature& sig) {
  CoherentAxiom ax;
  if (cur.at_word("forall")) {
    cur.next();
    while (cur.at(Token::Kind::Ident) && !is_keyword(cur.peek().text))
      ax.vars.push_back(cur.next().text);
    if (ax.vars.empty())
      err(cur.peek(), "forall prefix needs at least one variable", {"identifier"});
    cur.expect(Token::Kind::Dot);
  }
  if (!cur.at(Token::Kind::FatArrow)) ax.antecedent = parse_atom_list(cur, sig);
  cur.expect(Token::Kind::FatArrow);
  if (cur.at_word("false")) {
    cur.next();
    return ax;  // empty disjunct list
  }
  while (true) {
    Disjunct d;
    if (cur.at_word("exists")) {
      cur.next();
      while (cur.at(Token::Kind::Ident) && !is_keyword(cur.peek().text))
        d.fresh_vars.push_back(cur.next().text);
      if (d.fresh_vars.empty())
        err(cur.peek(), "exists prefix needs at least one variable", {"identifier"});
      cur.expect(Token::Kind::Dot);
    }
    d.atoms = parse_atom_list(cur, sig);
    ax.disjuncts.push_back(std::move(d));
    if (!cur.at(Token::Kind::Bar)) break;
    cur.next();
  }
  return ax;
}

}  // namespace

ParseResult parse_theory(const std::string& text) {
  ParseResult out;
  TheoryFile tf;
  try {
    Cursor cur(lex(text));
    cur.skip_newlines();
    while (!cur.at(Token::Kind::End)) {
      const Token& t = cur.peek();
      if (t.kind != Token::Kind::Ident)
        err(t, "unexpected " + Cursor::describe(t),
            {"'pred'", "'fun'", "'equality'", "'axiom'", "'goal'"});
      if (t.text == "pred" || t.text == "fun") {
        bool is_pred = t.text == "pred";
        cur.next();
        const Token& nt = cur.peek();
        if (nt.kind != Token::Kind::Ident || is_keyword(nt.text))
          err(nt, "expected a symbol name", {"identifier"});
        std::string name = cur.next().text;
        cur.expect(Token::Kind::Slash);
        const Token& at = cur.peek();
        if (at.kind != Token::Kind::Ident) err(at, "expected an arity", {"number"});
        std::string digits = cur.next().text;
        for (char c : digits)
          if (!std::isdigit(static_cast<unsigned char>(c)))
            err(at, "arity must be a number", {"number"});
        int ar = std::stoi(digits);
        if (is_pred)
          tf.theory.sig.predicates.emplace_back(name, ar);
        else
          tf.theory.sig.functions.emplace_back(name, ar);
        tf.theory.sig.validate();
      } else if (t.text == "equality") {
        cur.next();
        if (cur.at_word("on")) {
          cur.next();
          tf.theory.sig.with_equality = true;
        } else if (cur.at_word("off")) {
          cur.next();
          tf.theory.sig.with_equality = false;
        } else {
          err(cur.peek(), "expected on or off", {"'on'", "'off'"});
        }
      } else if (t.text == "axiom") {
        cur.next();
        CoherentAxiom ax = parse_axiom_body(cur, tf.theory.sig);
        const Token& here = cur.peek();
        try {
          ax.validate(tf.theory.sig);
        } catch (const std::exception& e) {
          err(here, e.what());
        }
        tf.theory.axioms.push_back(std::move(ax));
      } else if (t.text == "goal") {
        cur.next();
        const Token& nt = cur.peek();
        if (nt.kind != Token::Kind::Ident || is_keyword(nt.text))
          err(nt, "expected a goal name", {"identifier"});
        std::string name = cur.next().text;
        cur.expect(Token::Kind::Colon);
        Formula f = parse_formula_at(cur, tf.theory.sig);
        tf.goals.emplace_back(std::move(name), std::move(f));
      } else {
        err(t, "unknown declaration '" + t.text + "'",
            {"'pred'", "'fun'", "'equality'", "'axiom'", "'goal'"});
      }
      if (!cur.at(Token::Kind::End)) cur.expect(Token::Kind::Newline);
      cur.skip_newlines();
    }
  } catch (const ParseError& pe) {
    out.diagnostics.push_back(pe.diag);
    return out;
  }
  out.file = std::move(tf);
  return out;
}

Condition parse_condition(const std::string& text, const Signature& sig) {
  try {
    Cursor cur(lex(text));
    cur.skip_newlines();
    std::vector<std::string> vars;
    std::vector<Atom> atoms;
    if (cur.at(Token::Kind::Ident)) {
      vars.push_back(cur.next().text);
      while (cur.at(Token::Kind::Comma)) {
        cur.next();
        const Token& t = cur.peek();
        if (t.kind != Token::Kind::Ident) err(t, "expected a variable", {"identifier"});
        vars.push_back(cur.next().text);
      }
    }
    if (cur.at(Token::Kind::Colon)) {
      cur.next();
      cur.skip_newlines();
      if (cur.at(Token::Kind::Ident)) {
        atoms.push_back(parse_atom_at(cur, sig));
        while (cur.at(Token::Kind::Comma)) {
          cur.next();
          atoms.push_back(parse_atom_at(cur, sig));
        }
      }
    }
    cur.skip_newlines();
    if (!cur.at(Token::Kind::End))
      err(cur.peek(), "trailing input after the condition", {"end of input"});
    return Condition::make(std::move(vars), std::move(atoms));
  } catch (const ParseError& pe) {
    throw std::invalid_argument("condition: " + pe.diag.render());
  }
}

Formula parse_formula(const std::string& text, const Signature& sig) {
  try {
    Cursor cur(lex(text));
    cur.skip_newlines();
    Formula f = parse_formula_at(cur, sig);
    cur.skip_newlines();
    if (!cur.at(Token::Kind::End))
      err(cur.peek(), "trailing input after the formula", {"end of input"});
    return f;
  } catch (const ParseError& pe) {
    throw std::invalid_argument("formula: " + pe.diag.render());
  }
}

Term parse_term(const std::string& text, const Signature& sig) {
  try {
    Cursor cur(lex(text));
    cur.skip_newlines();
    Term t = parse_term_at(cur, sig);
    cur.skip_newlines();
    if (!cur.at(Token::Kind::End))
      err(cur.peek(), "trailing input after the term", {"end of input"});
    return t;
  } catch (const ParseError& pe) {
    throw std::invalid_argument("term: " + pe.diag.render());
  }
}

namespace {

Term parse_term_lenient_at(Cursor& cur) {
  const Token& t = cur.peek();
  if (t.kind != Token::Kind::Ident || is_keyword(t.text))
    err(t, "unexpected " + Cursor::describe(t), {"term"});
  std::string name = cur.next().text;
  if (!cur.at(Token::Kind::LParen)) return Term::var(name);
  std::vector<Term> args;
  cur.next();
  if (!cur.at(Token::Kind::RParen)) {
    args.push_back(parse_term_lenient_at(cur));
    while (cur.at(Token::Kind::Comma)) {
      cur.next();
      args.push_back(parse_term_lenient_at(cur));
    }
  }
  cur.expect(Token::Kind::RParen);
  return Term::app(name, std::move(args));
}

}  // namespace

Term parse_term_lenient(const std::string& text) {
  try {
    Cursor cur(lex(text));
    cur.skip_newlines();
    Term t = parse_term_lenient_at(cur);
    cur.skip_newlines();
    if (!cur.at(Token::Kind::End))
      err(cur.peek(), "trailing input after the term", {"end of input"});
    return t;
  } catch (const ParseError& pe) {
    throw std::invalid_argument("term: " + pe.diag.render());
  }
}

std::string print_theory(const TheoryFile& tf) {
  std::ostringstream os;
  for (const auto& [n, k] : tf.theory.sig.predicates) os << "pred " << n << "/" << k << "\n";
  for (const auto& [n, k] : tf.theory.sig.functions) os << "fun " << n << "/" << k << "\n";
  if (tf.theory.sig.with_equality) os << "equality on\n";
  for (const auto& ax : tf.theory.axioms) os << to_string(ax) << "\n";
  for (const auto& [name, f] : tf.goals) os << "goal " << name << " : " << to_string(f) << "\n";
  return os.str();
}

}  // namespace coforce
