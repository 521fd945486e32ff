// Taylor approximation, bounded slices of Taylor expansions and the
// constructive converse: finding a Taylor ancestor of a given normal form.
#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "beta.hpp"
#include "resource.hpp"
#include "resource_reduction.hpp"
#include "syntax.hpp"

namespace taylorlab {

enum class Tri { False, Unknown, True };

inline Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

inline const char* to_string(Tri t) {
  return t == Tri::True ? "true" : t == Tri::False ? "false" : "unknown";
}

// ---------------------------------------------------------------------------
// The approximation relation

namespace detail {
inline Tri approx3(const RTerm& s, const Term& m0) {
  Term m = expose(m0);
  if (m.kind() == TermKind::Cut) return Tri::Unknown;
  switch (s.kind()) {
    case RKind::Bound: return m.kind() == TermKind::Bound && m->index == s->index ? Tri::True : Tri::False;
    case RKind::Free: return m.kind() == TermKind::Free && m->name == s->name ? Tri::True : Tri::False;
    case RKind::Hole: return m.kind() == TermKind::Hole ? Tri::True : Tri::False;
    case RKind::Lam: return m.kind() == TermKind::Lam ? approx3(s->left, m->left) : Tri::False;
    case RKind::App: {
      if (m.kind() != TermKind::App) return Tri::False;
      Tri r = approx3(s->left, m->left);
      for (const RTerm& t : s->bag) {
        if (r == Tri::False) return r;
        r = tri_and(r, approx3(t, m->right));
      }
      return r;
    }
  }
  return Tri::False;
}
}  // namespace detail

/// s ⋉ M; Cut nodes of M admit no approximant.
inline bool approximates(const RTerm& s, const Term& m) { return detail::approx3(s, m) == Tri::True; }

/// s ⋉ B for a Böhm prefix B, three-valued: Cut nodes yield Unknown when
/// the decision depends on them.
inline Tri approximates3(const RTerm& s, const Term& b) { return detail::approx3(s, b); }

// ---------------------------------------------------------------------------
// Slices

/// Enumerates {s ⋉ M : |s| ≤ n}, memoized on (subterm, budget).
class TaylorEnumerator {
 public:
  const Sum& slice(const Term& m, std::size_t n) {
    Key k{m, n};
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    Sum result = compute(m, n);
    return memo_.emplace(std::move(k), std::move(result)).first->second;
  }

  /// Set when a Cut node was reached with budget left, i.e. the slice of
  /// the truncated term may miss approximants of the full term.
  bool hit_cut() const { return hit_cut_; }

 private:
  struct Key {
    Term term;
    std::size_t budget;
    friend bool operator==(const Key& a, const Key& b) { return a.budget == b.budget && alpha_eq(a.term, b.term); }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return detail::mix(k.term.hash(), k.budget); }
  };

  Sum compute(const Term& m, std::size_t n) {
    if (n == 0) return {};
    switch (m.kind()) {
      case TermKind::Bound: return Sum(rmake::bound(m->index));
      case TermKind::Free: return Sum(rmake::var(m->name));
      case TermKind::Hole: return Sum(rmake::hole());
      case TermKind::Bottom: return {};
      case TermKind::Cut: hit_cut_ = true; return {};
      case TermKind::Ref: return slice(expose(m), n);
      case TermKind::Lam: {
        std::vector<RTerm> out;
        for (const RTerm& s : slice(m->left, n - 1)) out.push_back(rmake::lam(m->name, s));
        return Sum::from(std::move(out));
      }
      case TermKind::App: {
        if (n < 2) return {};
        std::vector<RTerm> out;
        const Sum funs = slice(m->left, n - 1);
        const Sum args = n >= 3 ? slice(m->right, n - 2) : Sum();
        Monomial bag;
        for (const RTerm& f : funs) {
          std::size_t budget = n - f->size - 1;  // for the elements of the bag
          bag.clear();
          bags(f, args, 0, budget, bag, out);
        }
        return Sum::from(std::move(out));
      }
    }
    return {};
  }

  static void bags(const RTerm& f, const Sum& args, std::size_t from, std::size_t budget, Monomial& bag,
                   std::vector<RTerm>& out) {
    out.push_back(rmake::app(f, bag));
    for (std::size_t i = from; i < args.size(); ++i) {
      if (args[i]->size > budget) continue;
      bag.push_back(args[i]);
      bags(f, args, i, budget - args[i]->size, bag, out);
      bag.pop_back();
    }
  }

  std::unordered_map<Key, Sum, KeyHash> memo_;
  bool hit_cut_ = false;
};

/// The approximants of M of size at most n, and of height below `depth`
/// when given.
inline Sum enumerate_taylor(const Term& m, std::size_t n, std::optional<std::size_t> depth = std::nullopt) {
  TaylorEnumerator e;
  Sum s = e.slice(m, n);
  if (!depth) return s;
  std::vector<RTerm> kept;
  for (const RTerm& t : s)
    if (t->height < *depth) kept.push_back(t);
  return Sum::from(std::move(kept));
}

/// Approximants of a context; each hole is approximated by the resource hole.
inline Sum enumerate_taylor_context(const Term& c, std::size_t n) { return enumerate_taylor(c, n); }

/// Whether T(M) = 0.
inline bool taylor_zero(const Term& m0) {
  Term m = expose(m0);
  switch (m.kind()) {
    case TermKind::Bottom: return true;
    case TermKind::Lam: return taylor_zero(m->left);
    case TermKind::App: return taylor_zero(m->left);
    default: return false;
  }
}

/// Decides t ⋉ BT(M) on the Böhm prefix of depth h(t)+1.
inline Tri member_of_bohm(const RTerm& t, const Term& m, std::size_t fuel) {
  return approximates3(t, bohm_tree(m, t->height + 1, fuel));
}

/// The d-positive approximant of M with singleton monomials above depth d
/// and empty ones at depth d; none when a ⊥ or Cut is in the way.
inline std::optional<RTerm> canonical_positive(const Term& m0, std::size_t d) {
  Term m = expose(m0);
  switch (m.kind()) {
    case TermKind::Bound: return rmake::bound(m->index);
    case TermKind::Free: return rmake::var(m->name);
    case TermKind::Hole: return rmake::hole();
    case TermKind::Lam: {
      auto b = canonical_positive(m->left, d);
      if (!b) return std::nullopt;
      return rmake::lam(m->name, *b);
    }
    case TermKind::App: {
      auto f = canonical_positive(m->left, d);
      if (!f) return std::nullopt;
      if (d == 0) return rmake::app(*f, {});
      auto a = canonical_positive(m->right, d - 1);
      if (!a) return std::nullopt;
      return rmake::app(*f, {*a});
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Taylor ancestors

namespace detail {

// Given u ⋉ N[P/z] (z bound at index `depth` of N), builds s0 ⋉ N and
// elements p̄ with each p ⋉ P such that u is an addend of s0⟨p̄/z⟩.
inline std::optional<RTerm> subst_pullback(const RTerm& u, const Term& n0, std::uint32_t depth, Monomial& ps) {
  Term n = expose(n0);
  switch (n.kind()) {
    case TermKind::Bound:
      if (n->index == depth) {
        ps.push_back(r_shift(u, -static_cast<int>(depth)));
        return rmake::bound(depth);
      }
      if (n->index > depth) {
        if (u.kind() != RKind::Bound || u->index != n->index - 1) return std::nullopt;
        return rmake::bound(n->index);
      }
      if (u.kind() != RKind::Bound || u->index != n->index) return std::nullopt;
      return u;
    case TermKind::Free:
      if (u.kind() != RKind::Free || u->name != n->name) return std::nullopt;
      return u;
    case TermKind::Hole:
      if (u.kind() != RKind::Hole) return std::nullopt;
      return u;
    case TermKind::Lam: {
      if (u.kind() != RKind::Lam) return std::nullopt;
      auto b = subst_pullback(u->left, n->left, depth + 1, ps);
      if (!b) return std::nullopt;
      return rmake::lam(n->name, *b);
    }
    case TermKind::App: {
      if (u.kind() != RKind::App) return std::nullopt;
      auto f = subst_pullback(u->left, n->left, depth, ps);
      if (!f) return std::nullopt;
      Monomial bag;
      for (const RTerm& e : u->bag) {
        auto w = subst_pullback(e, n->right, depth, ps);
        if (!w) return std::nullopt;
        bag.push_back(*w);
      }
      return rmake::app(*f, std::move(bag));
    }
    default: return std::nullopt;
  }
}

// Splits s as λ^m.⟨…⟨core⟩b̄₁…⟩b̄ₙ.
inline bool peel(const RTerm& s, std::size_t m, std::size_t n, RTerm& core, std::vector<Monomial>& bags,
                 std::vector<std::string>& hints) {
  RTerm t = s;
  for (std::size_t i = 0; i < m; ++i) {
    if (t.kind() != RKind::Lam) return false;
    hints.push_back(t->name);
    t = t->left;
  }
  bags.assign(n, {});
  for (std::size_t i = n; i-- > 0;) {
    if (t.kind() != RKind::App) return false;
    bags[i] = t->bag;
    t = t->left;
  }
  core = t;
  return true;
}

inline RTerm wrap(RTerm core, const std::vector<Monomial>& bags, const std::vector<std::string>& hints) {
  for (const Monomial& b : bags) core = rmake::app(std::move(core), b);
  for (std::size_t k = hints.size(); k-- > 0;) core = rmake::lam(hints[k], std::move(core));
  return core;
}

}  // namespace detail

/// Given u ⋉ N[P/z], a pair (s0 ⋉ N, p̄ ⋉! P) with u ∈ s0⟨p̄/z⟩;
/// here N is the body of an abstraction whose binder z is index 0.
inline std::optional<std::pair<RTerm, Monomial>> substitution_pullback(const RTerm& u, const Term& body) {
  Monomial ps;
  auto s0 = detail::subst_pullback(u, body, 0, ps);
  if (!s0) return std::nullopt;
  std::sort(ps.begin(), ps.end(), RLess{});
  return std::make_pair(*s0, ps);
}

/// Given s' ⋉ H(M) for M with a head redex, some s ⋉ M whose head step
/// produces s' as an addend.
inline std::optional<RTerm> head_step_pullback(const Term& m, const RTerm& s_next) {
  HeadForm hf = head_form(m);
  if (hf.kind != HeadKind::Redex) return std::nullopt;
  RTerm core;
  std::vector<Monomial> bags;
  std::vector<std::string> hints;
  if (!detail::peel(s_next, hf.binders.size(), hf.args.size(), core, bags, hints)) return std::nullopt;
  auto pb = substitution_pullback(core, hf.head->left);
  if (!pb) return std::nullopt;
  RTerm redex = rmake::app(rmake::lam(hf.head->name, pb->first), pb->second);
  return detail::wrap(redex, bags, hints);
}

/// Given t ⋉ BT(M), some s ⋉ M with t ∈ nf_r(s); follows the head
/// reductions of M level by level.
inline std::optional<RTerm> bohm_pullback(const Term& m, const RTerm& t, std::size_t fuel) {
  HeadResult hr = head_normalize(m, fuel, true);
  if (!hr.verdict.solvable) return std::nullopt;
  HeadForm hf = head_form(hr.term);
  RTerm core;
  std::vector<Monomial> bags;
  std::vector<std::string> hints;
  if (!detail::peel(t, hf.binders.size(), hf.args.size(), core, bags, hints)) return std::nullopt;
  const Term& h = hf.head;
  bool head_ok = (h.kind() == TermKind::Bound && core.kind() == RKind::Bound && core->index == h->index) ||
                 (h.kind() == TermKind::Free && core.kind() == RKind::Free && core->name == h->name) ||
                 (h.kind() == TermKind::Hole && core.kind() == RKind::Hole);
  if (!head_ok) return std::nullopt;
  for (std::size_t i = 0; i < bags.size(); ++i) {
    Monomial pulled;
    for (const RTerm& e : bags[i]) {
      auto p = bohm_pullback(hf.args[i], e, fuel);
      if (!p) return std::nullopt;
      pulled.push_back(*p);
    }
    bags[i] = std::move(pulled);
  }
  RTerm s = detail::wrap(core, bags, hints);
  for (std::size_t j = hr.trace.size() - 1; j-- > 0;) {
    auto prev = head_step_pullback(hr.trace[j], s);
    if (!prev) return std::nullopt;
    s = *prev;
  }
  return s;
}

}  // namespace taylorlab
