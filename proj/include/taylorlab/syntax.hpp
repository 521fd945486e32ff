// Finite λ⊥-terms, contexts and rational (guarded recursive) terms.
//
// Terms are nameless: bound variables are de Bruijn indices, free variables
// carry a name, and binders keep their surface name only as a printing hint.
// A rational term is represented lazily: a `Ref` node points at an equation of
// a shared `RecDefs` table together with the actual parameters that close the
// equation body at the reference site, and is unfolded on demand by `expose`.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace taylorlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TermKind : std::uint8_t { Bound, Free, Lam, App, Bottom, Hole, Cut, Ref };

struct TermNode;
struct RecDefs;

namespace detail {
inline std::size_t mix(std::size_t seed, std::size_t v) {
  // 64-bit variant of boost::hash_combine
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4));
}
}  // namespace detail

/// Immutable, shared handle on a term node.
class Term {
 public:
  Term() = default;
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}

  const TermNode& operator*() const { return *node_; }
  const TermNode* operator->() const { return node_.get(); }
  const TermNode* get() const { return node_.get(); }
  explicit operator bool() const { return static_cast<bool>(node_); }

  inline TermKind kind() const;
  inline std::size_t hash() const;

 private:
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermKind kind = TermKind::Bottom;
  std::uint32_t index = 0;  // Bound: de Bruijn index; Ref: equation index
  std::string name;         // Free: variable name; Lam: binder hint
  Term left;                // Lam: body; App: function
  Term right;               // App: argument
  std::vector<Term> args;   // Ref: actual parameters, relative to the reference site
  std::shared_ptr<const RecDefs> defs;  // Ref: owning table (null inside equation bodies)
  std::size_t hash = 0;
  std::uint32_t loose = 0;  // 1 + largest loose de Bruijn index, 0 when none
  bool self_refs = false;   // contains a Ref whose table is still unresolved
};

inline TermKind Term::kind() const { return node_->kind; }
inline std::size_t Term::hash() const { return node_->hash; }

/// One recursive equation `name = body`; the body is open in `params.size()`
/// de Bruijn indices standing for the free names of the equation, index i
/// (counted at the body root) denoting `params[i]`.
struct Equation {
  std::string name;
  std::vector<std::string> params;
  Term body;
};

struct RecDefs {
  std::vector<Equation> equations;
};

// ---------------------------------------------------------------------------
// Construction

namespace make {

inline Term node(TermNode n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 0x100000001b3ULL;
  switch (n.kind) {
    case TermKind::Bound:
      h = detail::mix(h, n.index);
      n.loose = n.index + 1;
      break;
    case TermKind::Free:
      h = detail::mix(h, std::hash<std::string>{}(n.name));
      break;
    case TermKind::Lam:
      h = detail::mix(h, n.left.hash());
      n.loose = n.left->loose > 0 ? n.left->loose - 1 : 0;
      n.self_refs = n.left->self_refs;
      break;
    case TermKind::App:
      h = detail::mix(detail::mix(h, n.left.hash()), n.right.hash());
      n.loose = std::max(n.left->loose, n.right->loose);
      n.self_refs = n.left->self_refs || n.right->self_refs;
      break;
    case TermKind::Ref:
      h = detail::mix(h, n.index);
      h = detail::mix(h, reinterpret_cast<std::uintptr_t>(n.defs.get()));
      n.self_refs = !n.defs;
      for (const Term& a : n.args) {
        h = detail::mix(h, a.hash());
        n.loose = std::max(n.loose, a->loose);
        n.self_refs = n.self_refs || a->self_refs;
      }
      break;
    case TermKind::Bottom:
    case TermKind::Hole:
    case TermKind::Cut:
      break;
  }
  n.hash = h;
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

inline Term bound(std::uint32_t index) {
  TermNode n;
  n.kind = TermKind::Bound;
  n.index = index;
  return node(std::move(n));
}

inline Term var(std::string name) {
  TermNode n;
  n.kind = TermKind::Free;
  n.name = std::move(name);
  return node(std::move(n));
}

inline Term lam(std::string hint, Term body) {
  TermNode n;
  n.kind = TermKind::Lam;
  n.name = std::move(hint);
  n.left = std::move(body);
  return node(std::move(n));
}

inline Term app(Term fun, Term arg) {
  TermNode n;
  n.kind = TermKind::App;
  n.left = std::move(fun);
  n.right = std::move(arg);
  return node(std::move(n));
}

inline Term leaf(TermKind k) {
  static const Term bottom_ = [] { TermNode n; n.kind = TermKind::Bottom; return node(std::move(n)); }();
  static const Term hole_ = [] { TermNode n; n.kind = TermKind::Hole; return node(std::move(n)); }();
  static const Term cut_ = [] { TermNode n; n.kind = TermKind::Cut; return node(std::move(n)); }();
  switch (k) {
    case TermKind::Bottom: return bottom_;
    case TermKind::Hole: return hole_;
    case TermKind::Cut: return cut_;
    default: throw Error("make::leaf: not a leaf kind");
  }
}

inline Term bottom() { return leaf(TermKind::Bottom); }
inline Term hole() { return leaf(TermKind::Hole); }
inline Term cut() { return leaf(TermKind::Cut); }

inline Term ref(std::shared_ptr<const RecDefs> defs, std::uint32_t index, std::vector<Term> args) {
  TermNode n;
  n.kind = TermKind::Ref;
  n.index = index;
  n.defs = std::move(defs);
  n.args = std::move(args);
  return node(std::move(n));
}

/// Left-nested application M N ... N with k copies of N.
inline Term power_apply(Term m, const Term& n, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i) m = app(std::move(m), n);
  return m;
}

/// Right-nested (N)(N)...N with k occurrences of N, k >= 1.
inline Term power_tail(const Term& n, std::size_t k) {
  if (k == 0) throw Error("power_tail: k must be at least 1");
  Term t = n;
  for (std::size_t i = 1; i < k; ++i) t = app(n, std::move(t));
  return t;
}

}  // namespace make

// ---------------------------------------------------------------------------
// Structural equality (α-equivalence on the nameless form)

inline bool alpha_eq(const Term& a, const Term& b) {
  if (a.get() == b.get()) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Bound: return a->index == b->index;
    case TermKind::Free: return a->name == b->name;
    case TermKind::Lam: return alpha_eq(a->left, b->left);
    case TermKind::App: return alpha_eq(a->left, b->left) && alpha_eq(a->right, b->right);
    case TermKind::Ref:
      if (a->defs != b->defs || a->index != b->index || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!alpha_eq(a->args[i], b->args[i])) return false;
      return true;
    default: return true;
  }
}

inline bool operator==(const Term& a, const Term& b) { return alpha_eq(a, b); }

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};
struct TermEq {
  bool operator()(const Term& a, const Term& b) const { return alpha_eq(a, b); }
};

// ---------------------------------------------------------------------------
// Index manipulation

/// Adds `delta` to every de Bruijn index >= cutoff.
inline Term shift(const Term& t, int delta, std::uint32_t cutoff = 0) {
  if (delta == 0 || t->loose <= cutoff) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      return make::bound(static_cast<std::uint32_t>(static_cast<int>(t->index) + delta));
    case TermKind::Lam:
      return make::lam(t->name, shift(t->left, delta, cutoff + 1));
    case TermKind::App:
      return make::app(shift(t->left, delta, cutoff), shift(t->right, delta, cutoff));
    case TermKind::Ref: {
      std::vector<Term> args;
      args.reserve(t->args.size());
      for (const Term& a : t->args) args.push_back(shift(a, delta, cutoff));
      return make::ref(t->defs, t->index, std::move(args));
    }
    default: return t;
  }
}

namespace detail {

// Replaces index `target` (seen at depth 0) by `value`, decrementing the
// indices above it: the contraction step of (λ.body) value.
inline Term subst_top(const Term& t, std::uint32_t depth, const Term& value) {
  if (t->loose <= depth) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      if (t->index == depth) return shift(value, static_cast<int>(depth));
      return make::bound(t->index - 1);
    case TermKind::Lam:
      return make::lam(t->name, subst_top(t->left, depth + 1, value));
    case TermKind::App:
      return make::app(subst_top(t->left, depth, value), subst_top(t->right, depth, value));
    case TermKind::Ref: {
      std::vector<Term> args;
      args.reserve(t->args.size());
      for (const Term& a : t->args) args.push_back(subst_top(a, depth, value));
      return make::ref(t->defs, t->index, std::move(args));
    }
    default: return t;
  }
}

inline Term instantiate(const Term& t, std::uint32_t depth, const std::vector<Term>& actuals,
                        const std::shared_ptr<const RecDefs>& owner) {
  if (t->loose <= depth && !t->self_refs) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      if (t->index < depth) return t;
      return shift(actuals.at(t->index - depth), static_cast<int>(depth));
    case TermKind::Lam:
      return make::lam(t->name, instantiate(t->left, depth + 1, actuals, owner));
    case TermKind::App:
      return make::app(instantiate(t->left, depth, actuals, owner), instantiate(t->right, depth, actuals, owner));
    case TermKind::Ref: {
      std::vector<Term> args;
      args.reserve(t->args.size());
      for (const Term& a : t->args) args.push_back(instantiate(a, depth, actuals, owner));
      return make::ref(t->defs ? t->defs : owner, t->index, std::move(args));
    }
    default: return t;
  }
}

}  // namespace detail

/// Contracts (λ.body) arg.
inline Term beta_contract(const Term& body, const Term& arg) { return detail::subst_top(body, 0, arg); }

/// Unfolds Ref nodes at the root until the root is a proper constructor.
inline Term expose(Term t) {
  while (t.kind() == TermKind::Ref) {
    const Equation& eq = t->defs->equations.at(t->index);
    t = detail::instantiate(eq.body, 0, t->args, t->defs);
  }
  return t;
}

/// Capture-avoiding substitution M[N/x] of the free variable named x.
inline Term subst(const Term& m, std::string_view x, const Term& n) {
  std::function<Term(const Term&, std::uint32_t)> go = [&](const Term& t, std::uint32_t depth) -> Term {
    switch (t.kind()) {
      case TermKind::Free:
        return t->name == x ? shift(n, static_cast<int>(depth)) : t;
      case TermKind::Lam: {
        Term b = go(t->left, depth + 1);
        return b.get() == t->left.get() ? t : make::lam(t->name, std::move(b));
      }
      case TermKind::App: {
        Term f = go(t->left, depth), a = go(t->right, depth);
        return f.get() == t->left.get() && a.get() == t->right.get() ? t : make::app(std::move(f), std::move(a));
      }
      case TermKind::Ref: {
        std::vector<Term> args;
        for (const Term& a : t->args) args.push_back(go(a, depth));
        return make::ref(t->defs, t->index, std::move(args));
      }
      default: return t;
    }
  };
  return go(m, 0);
}

/// Grafts a (name-carrying) term under a stack of binder hints: free names
/// matching an enclosing binder become bound to the innermost such binder.
inline Term graft(const Term& m, const std::vector<std::string>& binders) {
  if (binders.empty()) return m;
  std::function<Term(const Term&, std::uint32_t)> go = [&](const Term& t, std::uint32_t depth) -> Term {
    switch (t.kind()) {
      case TermKind::Bound:
        return t->index >= depth ? make::bound(t->index + static_cast<std::uint32_t>(binders.size())) : t;
      case TermKind::Free:
        for (std::size_t i = binders.size(); i-- > 0;)
          if (binders[i] == t->name) return make::bound(depth + static_cast<std::uint32_t>(binders.size() - 1 - i));
        return t;
      case TermKind::Lam: return make::lam(t->name, go(t->left, depth + 1));
      case TermKind::App: return make::app(go(t->left, depth), go(t->right, depth));
      case TermKind::Ref: {
        std::vector<Term> args;
        for (const Term& a : t->args) args.push_back(go(a, depth));
        return make::ref(t->defs, t->index, std::move(args));
      }
      default: return t;
    }
  };
  return go(m, 0);
}

/// C⟨M⟩: every hole replaced by M, literally (binders above a hole capture
/// the free names of M).
inline Term context_fill(const Term& c, const Term& m) {
  std::vector<std::string> binders;
  std::function<Term(const Term&)> go = [&](const Term& t) -> Term {
    switch (t.kind()) {
      case TermKind::Hole: return graft(m, binders);
      case TermKind::Lam: {
        binders.push_back(t->name);
        Term b = go(t->left);
        binders.pop_back();
        return make::lam(t->name, std::move(b));
      }
      case TermKind::App: return make::app(go(t->left), go(t->right));
      default: return t;
    }
  };
  return go(c);
}

inline bool has_hole(const Term& t) {
  switch (t.kind()) {
    case TermKind::Hole: return true;
    case TermKind::Lam: return has_hole(t->left);
    case TermKind::App: return has_hole(t->left) || has_hole(t->right);
    case TermKind::Ref:
      for (const Term& a : t->args)
        if (has_hole(a)) return true;
      return false;
    default: return false;
  }
}

inline bool contains_kind(const Term& t, TermKind k) {
  if (t.kind() == k) return true;
  switch (t.kind()) {
    case TermKind::Lam: return contains_kind(t->left, k);
    case TermKind::App: return contains_kind(t->left, k) || contains_kind(t->right, k);
    default: return false;
  }
}

/// `FV(M)`, the names of the free variables; Ref parameters are followed.
inline std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  std::function<void(const Term&)> go = [&](const Term& u) {
    switch (u.kind()) {
      case TermKind::Free: out.insert(u->name); break;
      case TermKind::Lam: go(u->left); break;
      case TermKind::App: go(u->left); go(u->right); break;
      case TermKind::Ref: for (const Term& a : u->args) go(a); break;
      default: break;
    }
  };
  go(t);
  return out;
}

/// Number of constructors of a finite term (Refs count as one node).
inline std::size_t term_size(const Term& t) {
  switch (t.kind()) {
    case TermKind::Lam: return 1 + term_size(t->left);
    case TermKind::App: return 1 + term_size(t->left) + term_size(t->right);
    default: return 1;
  }
}

// ---------------------------------------------------------------------------
// Positions

enum class Step : std::uint8_t { Body, Fun, Arg };
using Position = std::vector<Step>;

/// Applicative depth: the number of argument edges on the path.
inline std::size_t applicative_depth(const Position& p) {
  std::size_t d = 0;
  for (Step s : p) d += s == Step::Arg;
  return d;
}

inline std::string to_string(const Position& p) {
  std::string out;
  for (Step s : p) {
    if (!out.empty()) out += '.';
    out += s == Step::Body ? "body" : s == Step::Fun ? "fun" : "arg";
  }
  return out;
}

inline Position parse_position(std::string_view text) {
  Position p;
  if (text.empty() || text == "root") return p;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t dot = text.find('.', start);
    std::string_view part = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (part == "body") p.push_back(Step::Body);
    else if (part == "fun") p.push_back(Step::Fun);
    else if (part == "arg") p.push_back(Step::Arg);
    else throw Error("invalid position component '" + std::string(part) + "'");
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return p;
}

/// The subterm at a position; Ref nodes on the way are unfolded.
inline Term subterm_at(Term t, const Position& p) {
  for (Step s : p) {
    t = expose(t);
    if (s == Step::Body && t.kind() == TermKind::Lam) t = t->left;
    else if (s == Step::Fun && t.kind() == TermKind::App) t = t->left;
    else if (s == Step::Arg && t.kind() == TermKind::App) t = t->right;
    else throw Error("position " + to_string(p) + " does not exist in term");
  }
  return t;
}

/// Rebuilds `t` with the subterm at `p` replaced by `f(subterm)`.
inline Term replace_at(const Term& t, const Position& p, const std::function<Term(const Term&)>& f,
                       std::size_t from = 0) {
  if (from == p.size()) return f(t);
  Term u = expose(t);
  Step s = p[from];
  if (s == Step::Body && u.kind() == TermKind::Lam) return make::lam(u->name, replace_at(u->left, p, f, from + 1));
  if (s == Step::Fun && u.kind() == TermKind::App) return make::app(replace_at(u->left, p, f, from + 1), u->right);
  if (s == Step::Arg && u.kind() == TermKind::App) return make::app(u->left, replace_at(u->right, p, f, from + 1));
  throw Error("position " + to_string(p) + " does not exist in term");
}

// ---------------------------------------------------------------------------
// Rational terms

/// Finite prefix of a (possibly rational) term: subterms at applicative
/// depth >= `depth` are replaced by the Cut marker.
inline Term unfold(const Term& t, std::size_t depth) {
  if (depth == 0) return make::cut();
  Term u = expose(t);
  switch (u.kind()) {
    case TermKind::Lam: return make::lam(u->name, unfold(u->left, depth));
    case TermKind::App: return make::app(unfold(u->left, depth), unfold(u->right, depth - 1));
    default: return u;
  }
}

/// Node-wise agreement of two terms above a given applicative depth.
inline bool agree_above(const Term& a, const Term& b, std::size_t depth) {
  return alpha_eq(unfold(a, depth), unfold(b, depth));
}

inline bool is_rational(const Term& t) {
  switch (t.kind()) {
    case TermKind::Ref: return true;
    case TermKind::Lam: return is_rational(t->left);
    case TermKind::App: return is_rational(t->left) || is_rational(t->right);
    default: return false;
  }
}

}  // namespace taylorlab
