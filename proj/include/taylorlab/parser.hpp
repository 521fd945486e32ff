// Surface syntax for λ⊥-terms, contexts and `let rec` systems.
#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "syntax.hpp"

namespace taylorlab {

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : Error("parse error at offset " + std::to_string(pos) + ": " + msg), position(pos) {}
  std::size_t position;
};

class GuardednessError : public Error {
 public:
  explicit GuardednessError(std::vector<std::string> c)
      : Error("unguarded recursion: " + describe(c)), cycle(std::move(c)) {}
  std::vector<std::string> cycle;

 private:
  static std::string describe(const std::vector<std::string>& c) {
    std::string out;
    for (const std::string& n : c) out += n + " -> ";
    return out + (c.empty() ? std::string() : c.front()) + " crosses no argument edge";
  }
};

namespace detail {

enum class Tok { Ident, Lambda, Dot, LParen, RParen, Bottom, Hole, Cut, Equals, Let, Rec, And, In, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view lit) { return s.substr(i, lit.size()) == lit; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    std::size_t at = i;
    if (starts("_|_")) { out.push_back({Tok::Bottom, "_|_", at}); i += 3; continue; }
    if (starts("\xE2\x8A\xA5")) { out.push_back({Tok::Bottom, "_|_", at}); i += 3; continue; }   // ⊥
    if (starts("\xCE\xBB")) { out.push_back({Tok::Lambda, "\\", at}); i += 2; continue; }        // λ
    if (starts("\xE2\x97\xBB") || starts("\xE2\x97\xBD")) {                                 // ◻
      out.push_back({Tok::Cut, "?", at}); i += 3; continue;
    }
    switch (c) {
      case '\\': out.push_back({Tok::Lambda, "\\", at}); ++i; continue;
      case '.': out.push_back({Tok::Dot, ".", at}); ++i; continue;
      case '(': out.push_back({Tok::LParen, "(", at}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", at}); ++i; continue;
      case '*': out.push_back({Tok::Hole, "*", at}); ++i; continue;
      case '?': out.push_back({Tok::Cut, "?", at}); ++i; continue;
      case '=': out.push_back({Tok::Equals, "=", at}); ++i; continue;
      default: break;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string word(s.substr(i, j - i));
      Tok k = word == "let" ? Tok::Let : word == "rec" ? Tok::Rec : word == "and" ? Tok::And
            : word == "in" ? Tok::In : Tok::Ident;
      out.push_back({k, std::move(word), at});
      i = j;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", at);
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

// Named syntax tree produced by the parser before lowering.
struct Ast {
  enum class K { Var, Lam, App, Bottom, Hole, Cut } kind;
  std::string name;
  std::shared_ptr<const Ast> a, b;
  std::size_t pos = 0;
};
using AstPtr = std::shared_ptr<const Ast>;

class AstParser {
 public:
  explicit AstParser(std::string_view text) : toks_(tokenize(text)) {}

  struct Program {
    std::vector<std::pair<std::string, AstPtr>> equations;
    AstPtr root;
  };

  Program program() {
    Program p;
    if (peek().kind == Tok::Let) {
      next();
      expect(Tok::Rec, "'rec'");
      do {
        const Token& name = expect(Tok::Ident, "equation name");
        expect(Tok::Equals, "'='");
        p.equations.emplace_back(name.text, term());
      } while (accept(Tok::And));
      expect(Tok::In, "'in'");
    }
    p.root = term();
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return p;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++i_;
    return true;
  }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k)
      throw ParseError(std::string("expected ") + what + (peek().kind == Tok::End ? " before end of input" : ", found '" + peek().text + "'"), peek().pos);
    return next();
  }

  static AstPtr node(Ast::K k, std::size_t pos, std::string name = {}, AstPtr a = {}, AstPtr b = {}) {
    return std::make_shared<const Ast>(Ast{k, std::move(name), std::move(a), std::move(b), pos});
  }

  AstPtr term() {
    if (peek().kind == Tok::Lambda) return lambda();
    AstPtr t = atom();
    for (;;) {
      Tok k = peek().kind;
      if (k == Tok::Lambda) return node(Ast::K::App, t->pos, {}, t, lambda());
      if (!starts_atom(k)) return t;
      t = node(Ast::K::App, t->pos, {}, t, atom());
    }
  }

  AstPtr lambda() {
    std::size_t pos = next().pos;
    std::vector<std::string> names;
    do names.push_back(expect(Tok::Ident, "binder name").text);
    while (peek().kind == Tok::Ident);
    expect(Tok::Dot, "'.'");
    AstPtr body = term();
    for (std::size_t k = names.size(); k-- > 0;) body = node(Ast::K::Lam, pos, names[k], body);
    return body;
  }

  static bool starts_atom(Tok k) {
    return k == Tok::Ident || k == Tok::LParen || k == Tok::Bottom || k == Tok::Hole || k == Tok::Cut;
  }

  AstPtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: next(); return node(Ast::K::Var, t.pos, t.text);
      case Tok::Bottom: next(); return node(Ast::K::Bottom, t.pos);
      case Tok::Hole: next(); return node(Ast::K::Hole, t.pos);
      case Tok::Cut: next(); return node(Ast::K::Cut, t.pos);
      case Tok::LParen: {
        next();
        AstPtr inner = term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        throw ParseError(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

// Lowers named syntax into nameless terms.
class Lowering {
 public:
  using Program = AstParser::Program;

  explicit Lowering(const Program& p) : prog_(p) {
    for (std::size_t i = 0; i < p.equations.size(); ++i) {
      if (!index_.emplace(p.equations[i].first, static_cast<std::uint32_t>(i)).second)
        throw ParseError("equation '" + p.equations[i].first + "' defined twice", p.equations[i].second->pos);
    }
  }

  Term run() {
    if (prog_.equations.empty()) return lower(prog_.root, nullptr);
    compute_params();
    check_guarded();
    auto defs = std::make_shared<RecDefs>();
    for (std::size_t i = 0; i < prog_.equations.size(); ++i) {
      Equation eq;
      eq.name = prog_.equations[i].first;
      eq.params = params_[i];
      current_ = static_cast<int>(i);
      eq.body = lower(prog_.equations[i].second, nullptr);
      defs->equations.push_back(std::move(eq));
    }
    current_ = -1;
    std::shared_ptr<const RecDefs> shared = defs;
    return lower(prog_.root, &shared);
  }

 private:
  struct Use {
    std::uint32_t target;
    std::set<std::string> bound;  // binders in scope at the reference
    std::size_t depth;            // applicative depth of the reference
  };

  void scan(const AstPtr& t, std::vector<std::string>& scope, std::size_t depth, std::set<std::string>& fv,
            std::vector<Use>& uses) const {
    switch (t->kind) {
      case Ast::K::Var: {
        if (std::find(scope.begin(), scope.end(), t->name) != scope.end()) return;
        auto it = index_.find(t->name);
        if (it != index_.end()) uses.push_back({it->second, std::set<std::string>(scope.begin(), scope.end()), depth});
        else fv.insert(t->name);
        return;
      }
      case Ast::K::Lam:
        scope.push_back(t->name);
        scan(t->a, scope, depth, fv, uses);
        scope.pop_back();
        return;
      case Ast::K::App:
        scan(t->a, scope, depth, fv, uses);
        scan(t->b, scope, depth + 1, fv, uses);
        return;
      default: return;
    }
  }

  void compute_params() {
    std::size_t n = prog_.equations.size();
    std::vector<std::set<std::string>> fv(n);
    uses_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> scope;
      scan(prog_.equations[i].second, scope, 0, fv[i], uses_[i]);
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < n; ++i)
        for (const Use& u : uses_[i])
          for (const std::string& p : fv[u.target])
            if (!u.bound.count(p) && fv[i].insert(p).second) changed = true;
    }
    params_.clear();
    for (auto& s : fv) params_.emplace_back(s.begin(), s.end());
  }

  // Every cycle must cross an argument edge: the unguarded edges form a DAG.
  void check_guarded() const {
    std::size_t n = prog_.equations.size();
    for (std::size_t i = 0; i < n; ++i) {
      const AstPtr& body = prog_.equations[i].second;
      if (body->kind == Ast::K::Var && index_.count(body->name))
        throw GuardednessError({prog_.equations[i].first, body->name});
    }
    std::vector<int> state(n, 0);
    std::vector<std::uint32_t> stack;
    std::function<void(std::uint32_t)> dfs = [&](std::uint32_t v) {
      state[v] = 1;
      stack.push_back(v);
      for (const Use& u : uses_[v]) {
        if (u.depth > 0) continue;
        if (state[u.target] == 1) {
          std::vector<std::string> cycle;
          auto it = std::find(stack.begin(), stack.end(), u.target);
          for (; it != stack.end(); ++it) cycle.push_back(prog_.equations[*it].first);
          throw GuardednessError(cycle);
        }
        if (state[u.target] == 0) dfs(u.target);
      }
      stack.pop_back();
      state[v] = 2;
    };
    for (std::uint32_t v = 0; v < n; ++v)
      if (state[v] == 0) dfs(v);
  }

  // Resolves a name at a site under `scope` (innermost binder last).
  Term resolve(const std::string& name, const std::vector<std::string>& scope, std::size_t pos) const {
    for (std::size_t k = scope.size(); k-- > 0;)
      if (scope[k] == name) return make::bound(static_cast<std::uint32_t>(scope.size() - 1 - k));
    if (current_ >= 0) {
      const auto& ps = params_[static_cast<std::size_t>(current_)];
      auto it = std::find(ps.begin(), ps.end(), name);
      if (it == ps.end()) throw ParseError("internal: unresolved name '" + name + "'", pos);
      return make::bound(static_cast<std::uint32_t>(scope.size() + static_cast<std::size_t>(it - ps.begin())));
    }
    return make::var(name);
  }

  Term lower(const AstPtr& t, const std::shared_ptr<const RecDefs>* defs) {
    std::vector<std::string> scope;
    std::function<Term(const AstPtr&)> go = [&](const AstPtr& u) -> Term {
      switch (u->kind) {
        case Ast::K::Var: {
          bool bound_here = std::find(scope.begin(), scope.end(), u->name) != scope.end();
          auto it = index_.find(u->name);
          if (!bound_here && it != index_.end()) {
            std::vector<Term> args;
            for (const std::string& p : params_[it->second]) args.push_back(resolve(p, scope, u->pos));
            return make::ref(defs ? *defs : nullptr, it->second, std::move(args));
          }
          return resolve(u->name, scope, u->pos);
        }
        case Ast::K::Lam: {
          scope.push_back(u->name);
          Term b = go(u->a);
          scope.pop_back();
          return make::lam(u->name, std::move(b));
        }
        case Ast::K::App: return make::app(go(u->a), go(u->b));
        case Ast::K::Bottom: return make::bottom();
        case Ast::K::Hole: return make::hole();
        case Ast::K::Cut: return make::cut();
      }
      return make::bottom();
    };
    return go(t);
  }

  const Program& prog_;
  std::map<std::string, std::uint32_t> index_;
  std::vector<std::vector<std::string>> params_;
  std::vector<std::vector<Use>> uses_;
  int current_ = -1;
};

}  // namespace detail

/// Parses a term, a context (holes allowed) or a `let rec` system.
inline Term parse_term(std::string_view text) {
  detail::AstParser parser(text);
  auto prog = parser.program();
  return detail::Lowering(prog).run();
}

}  // namespace taylorlab
