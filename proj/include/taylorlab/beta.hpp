// Finitary β and β⊥ reduction, head reduction and Böhm-tree prefixes.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "syntax.hpp"

namespace taylorlab {

class StepError : public Error {
 public:
  enum class Kind { NotARedex, NotABottomRedex, OracleUnknown, DepthTooShallow, EmptyChoice, Mismatch };
  StepError(Kind k, const std::string& msg) : Error(msg), kind(k) {}
  Kind kind;
};

inline bool is_beta_redex(const Term& t) {
  return t.kind() == TermKind::App && expose(t->left).kind() == TermKind::Lam;
}

inline Term contract(const Term& redex) {
  Term f = expose(redex->left);
  return beta_contract(f->left, redex->right);
}

/// Fires the β-redex at position `at`.
inline Term beta_step(const Term& m, const Position& at) {
  return replace_at(m, at, [&](const Term& sub) {
    Term r = expose(sub);
    if (!is_beta_redex(r)) throw StepError(StepError::Kind::NotARedex, "no beta-redex at " + to_string(at));
    return contract(r);
  });
}

/// Fires a β-step at a position of applicative depth at least d.
inline Term min_depth_step(const Term& m, std::size_t d, const Position& at) {
  if (applicative_depth(at) < d)
    throw StepError(StepError::Kind::DepthTooShallow,
                    "position " + to_string(at) + " has depth " + std::to_string(applicative_depth(at)) + " < " +
                        std::to_string(d));
  return beta_step(m, at);
}

// ---------------------------------------------------------------------------
// Head forms

enum class HeadKind { Variable, Redex, Bottom, Cut, Hole };

/// λx₁…x_m.(…((head)Q₁)…)Q_n; for a redex head, `head` is the abstraction
/// and `redex_arg` its argument.
struct HeadForm {
  std::vector<std::string> binders;
  HeadKind kind = HeadKind::Variable;
  Term head;
  Term redex_arg;
  std::vector<Term> args;
};

inline HeadForm head_form(const Term& m) {
  HeadForm hf;
  Term t = expose(m);
  while (t.kind() == TermKind::Lam) {
    hf.binders.push_back(t->name);
    t = expose(t->left);
  }
  std::vector<Term> spine;
  while (t.kind() == TermKind::App) {
    spine.push_back(t->right);
    t = expose(t->left);
  }
  std::reverse(spine.begin(), spine.end());
  hf.head = t;
  switch (t.kind()) {
    case TermKind::Lam:
      hf.kind = HeadKind::Redex;
      hf.redex_arg = spine.front();
      hf.args.assign(spine.begin() + 1, spine.end());
      return hf;
    case TermKind::Bottom: hf.kind = HeadKind::Bottom; break;
    case TermKind::Cut: hf.kind = HeadKind::Cut; break;
    case TermKind::Hole: hf.kind = HeadKind::Hole; break;
    default: hf.kind = HeadKind::Variable; break;
  }
  hf.args = std::move(spine);
  return hf;
}

inline Term assemble(const std::vector<std::string>& binders, Term head, const std::vector<Term>& args) {
  for (const Term& a : args) head = make::app(std::move(head), a);
  for (std::size_t k = binders.size(); k-- > 0;) head = make::lam(binders[k], std::move(head));
  return head;
}

inline Term reassemble(const HeadForm& hf) {
  Term h = hf.kind == HeadKind::Redex ? make::app(hf.head, hf.redex_arg) : hf.head;
  return assemble(hf.binders, std::move(h), hf.args);
}

inline bool is_hnf(const Term& m) {
  HeadKind k = head_form(m).kind;
  return k == HeadKind::Variable || k == HeadKind::Hole;
}

/// Position of the head redex inside `m` (binders, then function edges).
inline std::optional<Position> head_redex_position(const Term& m) {
  HeadForm hf = head_form(m);
  if (hf.kind != HeadKind::Redex) return std::nullopt;
  Position p(hf.binders.size(), Step::Body);
  p.insert(p.end(), hf.args.size(), Step::Fun);
  return p;
}

/// The head-reduction operator: fires the head redex, identity otherwise.
inline Term head_step(const Term& m) {
  HeadForm hf = head_form(m);
  if (hf.kind != HeadKind::Redex) return m;
  return assemble(hf.binders, beta_contract(hf.head->left, hf.redex_arg), hf.args);
}

// ---------------------------------------------------------------------------
// Verdicts

enum class UnknownReason { Fuel, Loop, BottomHead, CutHead };

struct Verdict {
  bool solvable = false;
  std::size_t steps = 0;  // head steps performed
  UnknownReason reason = UnknownReason::Fuel;

  /// Unsolvability backed by a certificate: a head-reduction cycle or a ⊥ head.
  bool certified_unsolvable() const {
    return !solvable && (reason == UnknownReason::Loop || reason == UnknownReason::BottomHead);
  }
};

inline std::string to_string(const Verdict& v) {
  if (v.solvable) return "Solvable(" + std::to_string(v.steps) + ")";
  switch (v.reason) {
    case UnknownReason::Fuel: return "Unknown(fuel)";
    case UnknownReason::Loop: return "Unknown(loop)";
    case UnknownReason::BottomHead: return "Unknown(bottom head)";
    case UnknownReason::CutHead: return "Unknown(cut head)";
  }
  return "Unknown";
}

struct HeadResult {
  Term term;
  Verdict verdict;
  std::vector<Term> trace;  // M, H(M), …, the last term reached (when requested)
};

inline HeadResult head_normalize(const Term& m, std::size_t fuel, bool keep_trace = false) {
  HeadResult r;
  std::unordered_set<Term, TermHash, TermEq> seen;
  Term t = m;
  for (std::size_t k = 0;; ++k) {
    if (keep_trace) r.trace.push_back(t);
    HeadForm hf = head_form(t);
    r.term = t;
    r.verdict.steps = k;
    switch (hf.kind) {
      case HeadKind::Variable:
      case HeadKind::Hole: r.verdict.solvable = true; return r;
      case HeadKind::Bottom: r.verdict.reason = UnknownReason::BottomHead; return r;
      case HeadKind::Cut: r.verdict.reason = UnknownReason::CutHead; return r;
      case HeadKind::Redex: break;
    }
    if (!seen.insert(t).second) {
      r.verdict.reason = UnknownReason::Loop;
      return r;
    }
    if (k == fuel) {
      r.verdict.reason = UnknownReason::Fuel;
      return r;
    }
    t = assemble(hf.binders, beta_contract(hf.head->left, hf.redex_arg), hf.args);
  }
}

inline Verdict solvable(const Term& m, std::size_t fuel) { return head_normalize(m, fuel).verdict; }

/// Oracle deciding which subterms may be collapsed to ⊥.
using UnsolvabilityOracle = std::function<Verdict(const Term&)>;

inline UnsolvabilityOracle loop_oracle(std::size_t fuel) {
  return [fuel](const Term& t) { return solvable(t, fuel); };
}

/// β⊥-step: λx.⊥ → ⊥, (⊥)N → ⊥, or M → ⊥ for M certified unsolvable.
inline Term bot_step(const Term& m, const Position& at, const UnsolvabilityOracle& oracle) {
  return replace_at(m, at, [&](const Term& sub) {
    Term t = expose(sub);
    if (t.kind() == TermKind::Bottom)
      throw StepError(StepError::Kind::NotABottomRedex, "subterm at " + to_string(at) + " is already bottom");
    if (t.kind() == TermKind::Lam && expose(t->left).kind() == TermKind::Bottom) return make::bottom();
    if (t.kind() == TermKind::App && expose(t->left).kind() == TermKind::Bottom) return make::bottom();
    if (!oracle) throw StepError(StepError::Kind::NotABottomRedex, "no bottom-redex at " + to_string(at));
    Verdict v = oracle(t);
    if (v.solvable) throw StepError(StepError::Kind::NotABottomRedex, "subterm at " + to_string(at) + " is solvable");
    if (!v.certified_unsolvable())
      throw StepError(StepError::Kind::OracleUnknown, "oracle cannot certify unsolvability at " + to_string(at));
    return make::bottom();
  });
}

/// Leftmost-outermost β-redex, if any (Refs are unfolded on the way).
inline std::optional<Position> leftmost_outermost_redex(const Term& m) {
  Position p;
  std::function<bool(const Term&)> go = [&](const Term& t0) -> bool {
    Term t = expose(t0);
    if (is_beta_redex(t)) return true;
    if (t.kind() == TermKind::Lam) {
      p.push_back(Step::Body);
      if (go(t->left)) return true;
      p.pop_back();
    } else if (t.kind() == TermKind::App) {
      p.push_back(Step::Fun);
      if (go(t->left)) return true;
      p.back() = Step::Arg;
      if (go(t->right)) return true;
      p.pop_back();
    }
    return false;
  };
  if (is_rational(m)) return std::nullopt;
  if (go(m)) return p;
  return std::nullopt;
}

struct NormalizeResult {
  Term term;
  std::vector<Position> steps;
  bool normal = false;
};

/// Normal-order reduction of a finite term, at most `fuel` steps.
inline NormalizeResult beta_normalize(const Term& m, std::size_t fuel) {
  NormalizeResult r{m, {}, false};
  for (;;) {
    auto p = leftmost_outermost_redex(r.term);
    if (!p) {
      r.normal = !is_rational(r.term);
      return r;
    }
    if (r.steps.size() == fuel) return r;
    r.term = beta_step(r.term, *p);
    r.steps.push_back(*p);
  }
}

// ---------------------------------------------------------------------------
// Böhm trees

/// Depth-d prefix of BT(M): nodes are head normal forms, ⊥ where
/// unsolvability is certified and Cut where depth or fuel ran out.
inline Term bohm_tree(const Term& m, std::size_t depth, std::size_t fuel) {
  if (depth == 0) return make::cut();
  HeadResult r = head_normalize(m, fuel);
  if (!r.verdict.solvable) return r.verdict.certified_unsolvable() ? make::bottom() : make::cut();
  HeadForm hf = head_form(r.term);
  std::vector<Term> kids;
  kids.reserve(hf.args.size());
  for (const Term& a : hf.args) kids.push_back(bohm_tree(a, depth - 1, fuel));
  return assemble(hf.binders, hf.head, kids);
}

/// Whether a finite term contains no β-redex, no λx.⊥ and no (⊥)N.
inline bool is_beta_bot_normal(const Term& t) {
  switch (t.kind()) {
    case TermKind::Lam:
      return t->left.kind() != TermKind::Bottom && is_beta_bot_normal(t->left);
    case TermKind::App:
      if (t->left.kind() == TermKind::Lam || t->left.kind() == TermKind::Bottom) return false;
      return is_beta_bot_normal(t->left) && is_beta_bot_normal(t->right);
    case TermKind::Ref: return false;
    default: return true;
  }
}

// ---------------------------------------------------------------------------
// Stratification

struct StratifyResult {
  std::vector<Term> levels;                   // M_0 … M_k
  std::vector<std::vector<Position>> steps;   // steps[d] takes levels[d] to levels[d+1]
  std::optional<std::string> diagnostic;      // set when fuel ran out
};

namespace detail {
// Positions of the maximal subterms at applicative depth exactly d
// (the root for d = 0, otherwise argument-edge endpoints).
inline void frontier(const Term& t0, std::size_t d, Position& p, std::vector<Position>& out) {
  if (applicative_depth(p) == d) {
    out.push_back(p);
    return;
  }
  Term t = expose(t0);
  if (t.kind() == TermKind::Lam) {
    p.push_back(Step::Body);
    frontier(t->left, d, p, out);
    p.pop_back();
  } else if (t.kind() == TermKind::App) {
    p.push_back(Step::Fun);
    frontier(t->left, d, p, out);
    p.back() = Step::Arg;
    frontier(t->right, d, p, out);
    p.pop_back();
  }
}
}  // namespace detail

/// M_{d+1} is M_d with every subterm at depth exactly d head-normalized;
/// each head step is recorded by its absolute position.
inline StratifyResult stratify(const Term& m, std::size_t depth, std::size_t fuel) {
  StratifyResult r;
  r.levels.push_back(m);
  for (std::size_t d = 0; d < depth; ++d) {
    Term cur = r.levels.back();
    std::vector<Position> sites;
    Position p;
    detail::frontier(cur, d, p, sites);
    std::vector<Position> fired;
    for (const Position& site : sites) {
      Term sub = subterm_at(cur, site);
      HeadResult hr = head_normalize(sub, fuel, true);
      if (!hr.verdict.solvable) {
        r.diagnostic = "level " + std::to_string(d) + ": subterm at " + (site.empty() ? "root" : to_string(site)) +
                       " not head-normalizable within fuel (" + to_string(hr.verdict) + ")";
        return r;
      }
      for (std::size_t k = 0; k + 1 < hr.trace.size(); ++k) {
        Position q = site;
        Position h = *head_redex_position(hr.trace[k]);
        q.insert(q.end(), h.begin(), h.end());
        fired.push_back(std::move(q));
      }
      cur = replace_at(cur, site, [&](const Term&) { return hr.term; });
    }
    r.levels.push_back(cur);
    r.steps.push_back(std::move(fired));
  }
  return r;
}

}  // namespace taylorlab
