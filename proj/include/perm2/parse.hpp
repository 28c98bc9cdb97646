#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "perm2/kernel.hpp"
#include "perm2/reduction.hpp"
#include "perm2/signature.hpp"

namespace perm2 {

// ---------------------------------------------------------------------------
// Lexer. Identifiers are [A-Za-z_][A-Za-z0-9_']*; '#' starts a line comment.
// ---------------------------------------------------------------------------

struct Lexer {
  std::string src;
  size_t pos = 0;

  explicit Lexer(std::string s) : src(std::move(s)) {}

  void skip_ws() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }
  bool eof() {
    skip_ws();
    return pos >= src.size();
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  bool try_eat(const std::string& tok) {
    skip_ws();
    if (src.compare(pos, tok.size(), tok) == 0) {
      // Keep identifiers atomic: "fst" must not match "fstx".
      if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
        size_t end = pos + tok.size();
        if (end < src.size() &&
            (std::isalnum(static_cast<unsigned char>(src[end])) ||
             src[end] == '_' || src[end] == '\''))
          return false;
      }
      pos += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!try_eat(tok))
      throw Error(Errc::ParseError,
                  "expected '" + tok + "' at offset " + std::to_string(pos) +
                      " near '" + src.substr(pos, 12) + "'");
  }
  bool ident_ahead() {
    skip_ws();
    return pos < src.size() &&
           (std::isalpha(static_cast<unsigned char>(src[pos])) || src[pos] == '_');
  }
  std::string ident() {
    skip_ws();
    if (!ident_ahead())
      throw Error(Errc::ParseError,
                  "expected identifier at offset " + std::to_string(pos));
    size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) ||
            src[pos] == '_' || src[pos] == '\''))
      ++pos;
    return src.substr(start, pos - start);
  }
};

// ---------------------------------------------------------------------------
// Types:  type := prod ('^' type)?   [B ^ A is the exponential with domain A]
//         prod := atom ('*' prod)?
//         atom := '1' | sort | '(' type ')'
// ---------------------------------------------------------------------------

inline TypePtr parse_type_rec(Lexer& lx, const Signature1& sig);

inline TypePtr parse_type_atom(Lexer& lx, const Signature1& sig) {
  if (lx.try_eat("1")) return Type::mk_unit();
  if (lx.try_eat("(")) {
    TypePtr t = parse_type_rec(lx, sig);
    lx.expect(")");
    return t;
  }
  std::string name = lx.ident();
  return Type::mk_sort(sig.sort_id(name));
}

inline TypePtr parse_type_prod(Lexer& lx, const Signature1& sig) {
  TypePtr l = parse_type_atom(lx, sig);
  if (lx.try_eat("*")) {
    TypePtr r = parse_type_prod(lx, sig);
    return Type::mk_product(l, r);
  }
  return l;
}

inline TypePtr parse_type_rec(Lexer& lx, const Signature1& sig) {
  TypePtr cod = parse_type_prod(lx, sig);
  if (lx.try_eat("^")) {
    TypePtr dom = parse_type_rec(lx, sig);
    return Type::mk_exp(dom, cod);
  }
  return cod;
}

inline TypePtr parse_type(const std::string& s, const Signature1& sig) {
  Lexer lx(s);
  TypePtr t = parse_type_rec(lx, sig);
  if (!lx.eof()) throw Error(Errc::ParseError, "trailing input after type");
  return t;
}

// ---------------------------------------------------------------------------
// Terms.
//   term := '\' x ':' type '.' term | app
//   app  := atom { atom }
//   atom := '()' | '(' term [',' term] ')' | 'fst' atom | 'snd' atom
//         | op '(' terms ')' | var
// ---------------------------------------------------------------------------

inline TermPtr parse_term_rec(Lexer& lx, const Signature1& sig,
                              std::vector<std::string>& names);

inline TermPtr parse_term_atom(Lexer& lx, const Signature1& sig,
                               std::vector<std::string>& names) {
  if (lx.try_eat("fst"))
    return Term::proj1(parse_term_atom(lx, sig, names));
  if (lx.try_eat("snd"))
    return Term::proj2(parse_term_atom(lx, sig, names));
  if (lx.try_eat("(")) {
    if (lx.try_eat(")")) return Term::unit();
    TermPtr t = parse_term_rec(lx, sig, names);
    if (lx.try_eat(",")) {
      TermPtr u = parse_term_rec(lx, sig, names);
      lx.expect(")");
      return Term::pair(t, u);
    }
    lx.expect(")");
    return t;
  }
  std::string name = lx.ident();
  auto op = sig.op_ids.find(name);
  if (op != sig.op_ids.end()) {
    lx.expect("(");
    std::vector<TermPtr> args;
    if (!lx.try_eat(")")) {
      do {
        args.push_back(parse_term_rec(lx, sig, names));
      } while (lx.try_eat(","));
      lx.expect(")");
    }
    return Term::cst(op->second, std::move(args));
  }
  for (size_t i = 0; i < names.size(); ++i)
    if (names[names.size() - 1 - i] == name)
      return Term::var(static_cast<int>(i));
  throw Error(Errc::UnboundVariable, "unknown variable or operation " + name);
}

inline bool term_atom_ahead(Lexer& lx) {
  char c = lx.peek();
  return c == '(' || lx.ident_ahead();
}

inline TermPtr parse_term_rec(Lexer& lx, const Signature1& sig,
                              std::vector<std::string>& names) {
  if (lx.try_eat("\\")) {
    std::string x = lx.ident();
    lx.expect(":");
    TypePtr ty = parse_type_rec(lx, sig);
    lx.expect(".");
    names.push_back(x);
    TermPtr body = parse_term_rec(lx, sig, names);
    names.pop_back();
    return Term::lam(ty, body, x);
  }
  TermPtr t = parse_term_atom(lx, sig, names);
  while (term_atom_ahead(lx)) t = Term::app(t, parse_term_atom(lx, sig, names));
  return t;
}

inline TermPtr parse_term(const std::string& s, const Signature1& sig,
                          const Context& ctx) {
  Lexer lx(s);
  std::vector<std::string> names;
  for (auto& v : ctx.vars) names.push_back(v.first);
  TermPtr t = parse_term_rec(lx, sig, names);
  if (!lx.eof()) throw Error(Errc::ParseError, "trailing input after term");
  return t;
}

// Context syntax: 'x1:type, x2:type'  (optionally wrapped in [ ]).
inline Context parse_context(const std::string& s, const Signature1& sig) {
  Lexer lx(s);
  Context ctx;
  bool bracket = lx.try_eat("[");
  if (!lx.eof() && !(bracket && lx.peek() == ']')) {
    do {
      std::string x = lx.ident();
      lx.expect(":");
      TypePtr ty = parse_type_rec(lx, sig);
      ctx = ctx.extended(x, ty);
    } while (lx.try_eat(","));
  }
  if (bracket) lx.expect("]");
  if (!lx.eof()) throw Error(Errc::ParseError, "trailing input after context");
  return ctx;
}

// ---------------------------------------------------------------------------
// Proofs. Bare terms denote identity reductions; rule applications use
// angle brackets; vertical composition 'P ; Q' is left-associative, its
// middle is inferred during elaboration and checked by the typechecker.
// ---------------------------------------------------------------------------

inline RedPtr parse_red_rec(Lexer& lx, const Signature2& sig, Context& ctx);

inline RedPtr parse_red_atom(Lexer& lx, const Signature2& sig, Context& ctx) {
  if (lx.try_eat("fst"))
    return Reduction::proj1(parse_red_atom(lx, sig, ctx));
  if (lx.try_eat("snd"))
    return Reduction::proj2(parse_red_atom(lx, sig, ctx));
  if (lx.try_eat("(")) {
    if (lx.try_eat(")")) return Reduction::unit();
    RedPtr p = parse_red_rec(lx, sig, ctx);
    if (lx.try_eat(",")) {
      RedPtr q = parse_red_rec(lx, sig, ctx);
      lx.expect(")");
      return Reduction::pair(p, q);
    }
    lx.expect(")");
    return p;
  }
  std::string name = lx.ident();
  auto rule = sig.rule_ids.find(name);
  if (rule != sig.rule_ids.end() && lx.peek() == '<') {
    lx.expect("<");
    std::vector<RedPtr> args;
    if (!lx.try_eat(">")) {
      do {
        args.push_back(parse_red_rec(lx, sig, ctx));
      } while (lx.try_eat(","));
      lx.expect(">");
    }
    return Reduction::rule_app(rule->second, std::move(args));
  }
  auto op = sig.base.op_ids.find(name);
  if (op != sig.base.op_ids.end()) {
    lx.expect("(");
    std::vector<RedPtr> args;
    if (!lx.try_eat(")")) {
      do {
        args.push_back(parse_red_rec(lx, sig, ctx));
      } while (lx.try_eat(","));
      lx.expect(")");
    }
    return Reduction::cst(op->second, std::move(args));
  }
  int idx = ctx.index_of(name);
  if (idx < 0)
    throw Error(Errc::UnboundVariable, "unknown variable, operation or rule " + name);
  return Reduction::var(idx);
}

inline bool red_atom_ahead(Lexer& lx) {
  char c = lx.peek();
  return c == '(' || lx.ident_ahead();
}

inline RedPtr parse_red_app(Lexer& lx, const Signature2& sig, Context& ctx) {
  if (lx.try_eat("\\")) {
    std::string x = lx.ident();
    lx.expect(":");
    TypePtr ty = parse_type_rec(lx, sig.base);
    lx.expect(".");
    Context c2 = ctx.extended(x, ty);
    RedPtr body = parse_red_app(lx, sig, c2);
    return Reduction::lam(ty, body, x);
  }
  RedPtr p = parse_red_atom(lx, sig, ctx);
  while (red_atom_ahead(lx)) p = Reduction::app(p, parse_red_atom(lx, sig, ctx));
  return p;
}

inline RedPtr parse_red_rec(Lexer& lx, const Signature2& sig, Context& ctx) {
  RedPtr p = parse_red_app(lx, sig, ctx);
  while (lx.try_eat(";")) {
    RedPtr q = parse_red_app(lx, sig, ctx);
    // The shared middle is the left side's target.
    Triple t = typecheck_reduction(ctx, p, sig);
    p = Reduction::vcomp(p, t.target, q);
  }
  return p;
}

inline RedPtr parse_reduction(const std::string& s, const Signature2& sig,
                              const Context& ctx) {
  Lexer lx(s);
  Context c = ctx;
  RedPtr p = parse_red_rec(lx, sig, c);
  if (!lx.eof()) throw Error(Errc::ParseError, "trailing input after proof");
  return p;
}

// ---------------------------------------------------------------------------
// Signature files.
//   sort <name>
//   op <name> : (<type>,...) -> <type>
//   rule <name> : [x1:<type>, ...] <term> => <term> : <type>
// '#' comments; order-insensitive except that sorts must be declared before
// textual use. Rule sides are stored beta-eta-normal.
// ---------------------------------------------------------------------------

inline Signature2 parse_signature(const std::string& text) {
  struct RuleLine {
    std::string body;
    size_t sorts_seen;
    size_t line_no;
  };
  Signature2 sig;
  std::vector<RuleLine> rule_lines;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    Lexer lx(line);
    if (lx.eof()) continue;
    if (lx.try_eat("sort")) {
      std::string name = lx.ident();
      if (sig.base.sort_ids.count(name))
        throw Error(Errc::ParseError,
                    "line " + std::to_string(line_no) + ": duplicate sort " + name);
      sig.base.add_sort(name);
      if (!lx.eof())
        throw Error(Errc::ParseError,
                    "line " + std::to_string(line_no) + ": trailing input");
    } else if (lx.try_eat("op")) {
      std::string name = lx.ident();
      lx.expect(":");
      lx.expect("(");
      Sequent sq;
      if (!lx.try_eat(")")) {
        do {
          sq.premises.push_back(parse_type_rec(lx, sig.base));
        } while (lx.try_eat(","));
        lx.expect(")");
      }
      lx.expect("->");
      sq.conclusion = parse_type_rec(lx, sig.base);
      if (!lx.eof())
        throw Error(Errc::ParseError,
                    "line " + std::to_string(line_no) + ": trailing input");
      if (sig.base.op_ids.count(name))
        throw Error(Errc::ParseError,
                    "line " + std::to_string(line_no) + ": duplicate op " + name);
      sig.base.add_op(name, std::move(sq));
    } else if (lx.try_eat("rule")) {
      rule_lines.push_back({line.substr(lx.pos - 4), sig.base.sort_names.size(),
                            line_no});
    } else {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) +
                                        ": expected sort, op or rule");
    }
  }
  // Rules may reference operations declared later in the file, so they are
  // elaborated after all sorts and ops are known.
  for (const RuleLine& rl : rule_lines) {
    Lexer lx(rl.body);
    lx.expect("rule");
    std::string name = lx.ident();
    lx.expect(":");
    lx.expect("[");
    Context ctx;
    if (!lx.try_eat("]")) {
      do {
        std::string x = lx.ident();
        lx.expect(":");
        TypePtr ty = parse_type_rec(lx, sig.base);
        ctx = ctx.extended(x, ty);
      } while (lx.try_eat(","));
      lx.expect("]");
    }
    std::vector<std::string> names;
    for (auto& v : ctx.vars) names.push_back(v.first);
    TermPtr lhs = parse_term_rec(lx, sig.base, names);
    lx.expect("=>");
    TermPtr rhs = parse_term_rec(lx, sig.base, names);
    lx.expect(":");
    TypePtr ty = parse_type_rec(lx, sig.base);
    if (!lx.eof())
      throw Error(Errc::ParseError,
                  "line " + std::to_string(rl.line_no) + ": trailing input");
    if (sig.rule_ids.count(name))
      throw Error(Errc::ParseError, "line " + std::to_string(rl.line_no) +
                                        ": duplicate rule " + name);
    // sorts-before-use also applies to rules
    auto check_sorts = [&](const TypePtr& t, auto&& self) -> void {
      if (t->kind == Type::Kind::Sort) {
        if (static_cast<size_t>(t->sort) >= rl.sorts_seen)
          throw Error(Errc::UnknownSort,
                      "line " + std::to_string(rl.line_no) +
                          ": sort used before its declaration");
      } else if (t->kind == Type::Kind::Product ||
                 t->kind == Type::Kind::Exponential) {
        self(t->a, self);
        self(t->b, self);
      }
    };
    for (auto& v : ctx.vars) check_sorts(v.second, check_sorts);
    check_sorts(ty, check_sorts);
    RewriteRule r{name, ctx, lhs, rhs, ty};
    // Normalize the stored sides when they typecheck; validation reports
    // ill-typed rules later instead of failing the parse.
    try {
      TypePtr lt = typecheck_term(ctx, lhs, sig);
      if (type_equal(lt, ty)) r.lhs = beta_eta_normalize(sig, ctx, lhs, ty);
      TypePtr rt = typecheck_term(ctx, rhs, sig);
      if (type_equal(rt, ty)) r.rhs = beta_eta_normalize(sig, ctx, rhs, ty);
    } catch (const Error&) {
    }
    sig.add_rule(std::move(r));
  }
  return sig;
}

inline std::string print_signature(const Signature2& sig) {
  std::ostringstream os;
  for (auto& s : sig.base.sort_names) os << "sort " << s << "\n";
  for (size_t i = 0; i < sig.base.op_names.size(); ++i) {
    const Sequent& sq = sig.base.op_sequents[i];
    os << "op " << sig.base.op_names[i] << " : (";
    for (size_t j = 0; j < sq.premises.size(); ++j) {
      if (j) os << ", ";
      os << print_type(sq.premises[j], sig.base);
    }
    os << ") -> " << print_type(sq.conclusion, sig.base) << "\n";
  }
  for (const RewriteRule& r : sig.rules) {
    os << "rule " << r.name << " : [";
    for (size_t i = 0; i < r.ctx.size(); ++i) {
      if (i) os << ", ";
      os << r.ctx.vars[i].first << ":" << print_type(r.ctx.vars[i].second, sig.base);
    }
    os << "] " << print_term(r.lhs, sig.base, r.ctx) << " => "
       << print_term(r.rhs, sig.base, r.ctx) << " : "
       << print_type(r.type, sig.base) << "\n";
  }
  return os.str();
}

}  // namespace perm2
