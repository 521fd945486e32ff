// Executable checks of the simulation, commutation, characterization and
// genericity results on bounded slices.
#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "beta.hpp"
#include "print.hpp"
#include "resource.hpp"
#include "resource_reduction.hpp"
#include "syntax.hpp"
#include "taylor.hpp"

namespace taylorlab {

using json = nlohmann::ordered_json;

enum class Outcome { Pass, Fail, Inconclusive };

inline const char* to_string(Outcome o) {
  return o == Outcome::Pass ? "Pass" : o == Outcome::Fail ? "Fail" : "Inconclusive";
}

struct CheckReport {
  std::string theorem;
  json inputs = json::object();
  Outcome verdict = Outcome::Pass;
  std::string reason;
  json witness;  // null unless a counterexample or evidence is recorded
  json stats = json::object();
  double seconds = 0;  // wall time, reported in text output only

  json to_json() const {
    json j;
    j["theorem"] = theorem;
    j["inputs"] = inputs;
    j["verdict"] = to_string(verdict);
    if (!reason.empty()) j["reason"] = reason;
    if (!witness.is_null()) j["witness"] = witness;
    j["stats"] = stats;
    return j;
  }

  int exit_code() const { return verdict == Outcome::Pass ? 0 : verdict == Outcome::Fail ? 1 : 2; }

  void fail(std::string why, json w) {
    verdict = Outcome::Fail;
    reason = std::move(why);
    witness = std::move(w);
  }
  void inconclusive(std::string why) {
    if (verdict == Outcome::Pass) {
      verdict = Outcome::Inconclusive;
      reason = std::move(why);
    }
  }
};

/// Source text of a term; rational terms print as `let rec` programs.
inline std::string term_text(const Term& t) { return is_rational(t) ? to_program(t) : to_string(t); }

namespace detail {
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline json sum_json(const Sum& s) {
  json a = json::array();
  for (const RTerm& t : s) a.push_back(to_string(t));
  return a;
}

// ⊥ and Cut occurrences among the nodes of applicative depth ≤ d.
struct PrefixStatus {
  bool bottom = false;
  bool cut = false;
};

inline void prefix_status(const Term& t, std::size_t d, PrefixStatus& st) {
  switch (t.kind()) {
    case TermKind::Bottom: st.bottom = true; return;
    case TermKind::Cut: st.cut = true; return;
    case TermKind::Lam: prefix_status(t->left, d, st); return;
    case TermKind::App:
      prefix_status(t->left, d, st);
      if (d > 0) prefix_status(t->right, d - 1, st);
      return;
    default: return;
  }
}
}  // namespace detail

/// Whether s →r* S has a witness: equal normal forms.
inline bool same_normal_form(RNormalizer& nf, const RTerm& s, const Sum& S) { return nf(s) == nf(S); }

// ---------------------------------------------------------------------------
// Simulation

/// Pushes s ⋉ M forward along the β-step of M at p; every addend of the
/// result approximates the reduct.
inline Sum push_forward(const RTerm& s, const Term& m, const Position& p) {
  if (!approximates(s, m))
    throw StepError(StepError::Kind::Mismatch, to_string(s) + " does not approximate " + to_string(m));
  std::function<Sum(const RTerm&, const Term&, std::size_t)> go = [&](const RTerm& t, const Term& n0,
                                                                       std::size_t i) -> Sum {
    Term n = expose(n0);
    if (i == p.size()) {
      if (!is_beta_redex(n) || !is_r_redex(t))
        throw StepError(StepError::Kind::NotARedex, "no beta-redex at " + to_string(p));
      return r_contract(t->left->left, t->bag);
    }
    std::vector<RTerm> out;
    switch (p[i]) {
      case Step::Body:
        for (const RTerm& u : go(t->left, n->left, i + 1)) out.push_back(rmake::lam(t->name, u));
        break;
      case Step::Fun:
        for (const RTerm& u : go(t->left, n->left, i + 1)) out.push_back(rmake::app(u, t->bag));
        break;
      case Step::Arg: {
        std::vector<Sum> parts;
        for (const RTerm& e : t->bag) parts.push_back(go(e, n->right, i + 1));
        Monomial bag;
        std::function<void(std::size_t)> product = [&](std::size_t k) {
          if (k == parts.size()) {
            out.push_back(rmake::app(t->left, bag));
            return;
          }
          for (const RTerm& u : parts[k]) {
            bag.push_back(u);
            product(k + 1);
            bag.pop_back();
          }
        };
        product(0);
        break;
      }
    }
    return Sum::from(std::move(out));
  };
  return go(s, m, 0);
}

using PushForward = std::function<Sum(const RTerm&, const Term&, const Position&)>;

inline CheckReport check_simulation(const Term& m, const std::vector<Position>& steps, std::size_t size_bound,
                                    const PushForward& pf = push_forward) {
  detail::Stopwatch clock;
  CheckReport r;
  r.theorem = "simulation";
  r.inputs = {{"term", term_text(m)}, {"steps", json::array()}, {"size", size_bound}};
  for (const Position& p : steps) r.inputs["steps"].push_back(p.empty() ? "root" : to_string(p));
  std::vector<Term> terms{m};
  for (const Position& p : steps) terms.push_back(beta_step(terms.back(), p));
  Sum slice = enumerate_taylor(m, size_bound);
  RNormalizer nf;
  std::size_t produced = 0;
  for (const RTerm& s : slice) {
    Sum cur(s);
    for (std::size_t k = 0; k < steps.size() && r.verdict == Outcome::Pass; ++k) {
      Sum next;
      for (const RTerm& t : cur) next += pf(t, terms[k], steps[k]);
      for (const RTerm& a : next) {
        if (!approximates(a, terms[k + 1])) {
          r.fail("pushed-forward addend does not approximate the reduct",
                 {{"approximant", to_string(s)}, {"step", k}, {"addend", to_string(a)}, {"target", to_string(terms[k + 1])}});
          break;
        }
      }
      if (r.verdict == Outcome::Pass && nf(cur) != nf(next))
        r.fail("pushed-forward sum is not a resource reduct",
               {{"approximant", to_string(s)}, {"step", k}, {"sum", detail::sum_json(next)}});
      cur = std::move(next);
      produced += cur.size();
    }
    if (r.verdict != Outcome::Pass) break;
  }
  r.stats = {{"approximants", slice.size()}, {"addends", produced}, {"reduction_steps", nf.steps()}};
  r.seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------
// Commutation

inline CheckReport check_commutation(const Term& m, std::size_t size_bound, std::size_t fuel,
                                     std::optional<std::size_t> backstop = std::nullopt) {
  detail::Stopwatch clock;
  std::size_t limit = backstop.value_or(size_bound + 8);
  CheckReport r;
  r.theorem = "commutation";
  r.inputs = {{"term", term_text(m)}, {"size", size_bound}, {"fuel", fuel}, {"backstop", limit}};

  Term bt = bohm_tree(m, size_bound + 1, fuel);
  RNormalizer nf;
  Sum slice = enumerate_taylor(m, size_bound);
  Sum normal;
  std::size_t unknown = 0;
  for (const RTerm& s : slice) {
    for (const RTerm& t : nf(s)) {
      normal += t;
      Tri in = approximates3(t, bt);
      if (in == Tri::False) {
        r.fail("normal form of an approximant is not in the Taylor expansion of the Boehm tree",
               {{"approximant", to_string(s)}, {"normal_form", to_string(t)}, {"bohm", to_string(bt)}});
        break;
      }
      if (in == Tri::Unknown) ++unknown;
    }
    if (r.verdict == Outcome::Fail) break;
  }
  if (unknown) r.inconclusive(std::to_string(unknown) + " normal forms reach a Cut of the Boehm prefix");

  std::size_t via_pullback = 0, via_search = 0, missing = 0;
  TaylorEnumerator be;
  Sum targets = be.slice(bt, size_bound);
  if (be.hit_cut()) r.inconclusive("Boehm prefix contains a fuel cut within the size bound");
  std::optional<Sum> wide;
  for (const RTerm& t : targets) {
    if (r.verdict == Outcome::Fail) break;
    if (auto s = bohm_pullback(m, t, fuel); s && approximates(*s, m) && nf(*s).contains(t)) {
      ++via_pullback;
      continue;
    }
    if (!wide) wide = enumerate_taylor(m, limit);
    bool found = false;
    for (const RTerm& s : *wide)
      if (nf(s).contains(t)) {
        found = true;
        break;
      }
    if (found) ++via_search;
    else ++missing;
  }
  if (missing) r.inconclusive(std::to_string(missing) + " Boehm approximants have no ancestor up to size " + std::to_string(limit));

  r.stats = {{"approximants", slice.size()},
             {"normal_forms", normal.size()},
             {"bohm_approximants", targets.size()},
             {"ancestors_constructed", via_pullback},
             {"ancestors_searched", via_search},
             {"reduction_steps", nf.steps()}};
  r.seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------
// Head normalizability

inline CheckReport check_head_charac(const Term& m, std::size_t size_bound, std::size_t fuel) {
  detail::Stopwatch clock;
  CheckReport r;
  r.theorem = "head";
  r.inputs = {{"term", term_text(m)}, {"size", size_bound}, {"fuel", fuel}};
  HeadResult hr = head_normalize(m, fuel);
  RNormalizer nf;
  Sum slice = enumerate_taylor(m, size_bound);
  std::optional<RTerm> witness;
  for (const RTerm& s : slice)
    if (!nf(s).empty()) {
      witness = s;
      break;
    }
  std::string source = "slice";
  if (!witness && hr.verdict.solvable) {
    if (auto t = canonical_positive(bohm_tree(m, 1, fuel), 0)) {
      auto s = bohm_pullback(m, *t, fuel);
      if (s && approximates(*s, m) && nf(*s).contains(*t)) {
        witness = s;
        source = "constructed";
      }
    }
  }
  json w = json::object();
  w["head"] = to_string(hr.verdict);
  if (witness) {
    w["approximant"] = to_string(*witness);
    w["normal_form"] = detail::sum_json(nf(*witness));
    w["source"] = source;
  }
  r.witness = w;
  if (hr.verdict.solvable) {
    if (!witness) r.fail("head normalizable but no approximant has a nonzero normal form", w);
  } else if (hr.verdict.certified_unsolvable()) {
    if (witness) r.fail("certified unsolvable but an approximant has a nonzero normal form", w);
    else r.inconclusive("unsolvable and no nonzero normal form within the slice (consistent)");
  } else {
    r.inconclusive(witness ? "head reduction ran out of fuel; a nonzero normal form exists"
                           : "head reduction ran out of fuel and no witness within the slice");
  }
  r.stats = {{"approximants", slice.size()}, {"head_steps", hr.verdict.steps}, {"reduction_steps", nf.steps()}};
  r.seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------
// Normalizability via d-positive normal forms

inline CheckReport check_norm_charac(const Term& m, std::size_t d_max, std::size_t size_bound, std::size_t fuel) {
  detail::Stopwatch clock;
  CheckReport r;
  r.theorem = "norm";
  r.inputs = {{"term", term_text(m)}, {"dmax", d_max}, {"size", size_bound}, {"fuel", fuel}};
  RNormalizer nf;
  Sum slice = enumerate_taylor(m, size_bound);
  json levels = json::array();
  for (std::size_t d = 0; d <= d_max; ++d) {
    Term bt = bohm_tree(m, d + 1, fuel);
    detail::PrefixStatus st;
    detail::prefix_status(bt, d, st);
    std::string predicted = st.bottom ? "negative" : st.cut ? "unknown" : "positive";
    std::optional<RTerm> ws, wt;
    for (const RTerm& s : slice) {
      for (const RTerm& t : nf(s))
        if (is_d_positive(t, d)) {
          ws = s;
          wt = t;
          break;
        }
      if (ws) break;
    }
    std::string source = "slice";
    if (!ws && predicted == "positive") {
      if (auto t = canonical_positive(bt, d)) {
        auto s = bohm_pullback(m, *t, fuel);
        if (s && approximates(*s, m) && nf(*s).contains(*t) && is_d_positive(*t, d)) {
          ws = s;
          wt = t;
          source = "constructed";
        }
      }
    }
    json lv = {{"d", d}, {"bohm", to_string(bt)}, {"predicted", predicted}, {"witness_found", ws.has_value()}};
    if (ws) {
      lv["approximant"] = to_string(*ws);
      lv["positive_normal_form"] = to_string(*wt);
      lv["source"] = source;
    }
    std::string agreement;
    if (predicted == "unknown") agreement = "unknown";
    else if (predicted == "positive") agreement = ws ? "agree" : "no witness within bounds";
    else agreement = ws ? "disagree" : "agree";
    lv["agreement"] = agreement;
    levels.push_back(lv);
    if (agreement == "disagree") r.fail("d-positive normal form exists although the Boehm prefix has a bottom", lv);
    else if (agreement != "agree") r.inconclusive("level " + std::to_string(d) + ": " + agreement);
  }
  r.stats = {{"approximants", slice.size()}, {"levels", levels}, {"reduction_steps", nf.steps()}};
  r.seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------
// Equality through common d-positive approximants

inline CheckReport terms_equal_via_taylor(const Term& m, const Term& n, std::size_t d_max, std::size_t size_bound) {
  detail::Stopwatch clock;
  CheckReport r;
  r.theorem = "equal";
  r.inputs = {{"left", term_text(m)}, {"right", term_text(n)}, {"dmax", d_max}, {"size", size_bound}};
  Sum sm = enumerate_taylor(m, size_bound);
  Sum sn = enumerate_taylor(n, size_bound);
  json evidence = json::array();
  for (std::size_t d = 0; d <= d_max; ++d) {
    std::optional<RTerm> common;
    for (const RTerm& s : sm)
      if (is_d_positive(s, d) && sn.contains(s)) {
        common = s;
        break;
      }
    if (!common) {
      auto t = canonical_positive(m, d);
      if (t && approximates(*t, n)) common = t;
    }
    if (common) {
      evidence.push_back({{"d", d}, {"approximant", to_string(*common)}});
      continue;
    }
    Term pm = unfold(m, d + 1), pn = unfold(n, d + 1);
    if (alpha_eq(pm, pn)) {
      r.inconclusive("level " + std::to_string(d) + ": identical prefixes without d-positive approximants");
      break;
    }
    r.fail("no common d-positive approximant",
           {{"d", d}, {"left_prefix", to_string(pm)}, {"right_prefix", to_string(pn)}, {"evidence", evidence}});
    break;
  }
  if (r.verdict != Outcome::Fail) r.witness = {{"evidence", evidence}};
  r.stats = {{"left_approximants", sm.size()}, {"right_approximants", sn.size()}, {"levels_checked", evidence.size()}};
  r.seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------
// Genericity

inline CheckReport check_genericity(const Term& c, const Term& m, const std::vector<Term>& ns, std::size_t size_bound,
                                    std::size_t fuel, std::size_t depth) {
  detail::Stopwatch clock;
  CheckReport r;
  r.theorem = "genericity";
  r.inputs = {{"context", term_text(c)}, {"unsolvable", term_text(m)}, {"terms", json::array()},
              {"size", size_bound}, {"fuel", fuel}, {"depth", depth}};
  for (const Term& n : ns) r.inputs["terms"].push_back(term_text(n));

  Verdict v = solvable(m, fuel);
  if (!v.certified_unsolvable()) {
    r.inconclusive("hypothesis unmet: " + to_string(m) + " is not certified unsolvable (" + to_string(v) + ")");
    r.seconds = clock.seconds();
    return r;
  }
  Term star = bohm_tree(context_fill(c, m), depth, fuel);
  detail::PrefixStatus st;
  if (depth > 0) detail::prefix_status(star, depth - 1, st);
  if (st.bottom || st.cut) {
    r.inconclusive("hypothesis unmet: the Boehm prefix of C<M> is " + to_string(star) + ", not a normal form prefix");
    r.witness = {{"bohm", to_string(star)}};
    r.seconds = clock.seconds();
    return r;
  }

  RNormalizer nf;
  Sum contexts = enumerate_taylor_context(c, size_bound);
  Sum fillers = enumerate_taylor(m, size_bound);
  std::size_t filled = 0, with_holes = 0;
  for (const RTerm& cx : contexts) {
    std::size_t k = deg_hole(cx);
    if (k == 0) continue;
    ++with_holes;
    if (cx->size > size_bound) continue;
    // element budget: the filled term has size |c| - k + Σ|t_i| ≤ size_bound
    std::size_t budget = size_bound + k - cx->size;
    Monomial bag;
    bool bad = false;
    std::function<void(std::size_t, std::size_t)> go = [&](std::size_t from, std::size_t left) {
      if (bad) return;
      if (bag.size() == k) {
        ++filled;
        Sum out = nf(r_context_fill(cx, bag));
        if (!out.empty()) {
          bad = true;
          r.fail("a context approximant using the hole has a nonzero normal form",
                 {{"context_approximant", to_string(cx)}, {"filler", to_string(bag)}, {"normal_form", detail::sum_json(out)}});
        }
        return;
      }
      for (std::size_t i = from; i < fillers.size(); ++i) {
        if (fillers[i]->size > left) continue;
        bag.push_back(fillers[i]);
        go(i, left - fillers[i]->size);
        bag.pop_back();
      }
    };
    go(0, budget);
    if (bad) break;
  }

  json compared = json::array();
  for (const Term& n : ns) {
    if (r.verdict == Outcome::Fail) break;
    Term bn = bohm_tree(context_fill(c, n), depth, fuel);
    compared.push_back({{"term", to_string(n)}, {"bohm", to_string(bn)}});
    if (!alpha_eq(bn, star))
      r.fail("Boehm prefix differs from the normal form of C<M>",
             {{"term", to_string(n)}, {"bohm", to_string(bn)}, {"expected", to_string(star)}});
  }
  if (r.verdict == Outcome::Pass) r.witness = {{"normal_form", to_string(star)}, {"compared", compared}};
  r.stats = {{"context_approximants", contexts.size()},
             {"hole_approximants", with_holes},
             {"fillings", filled},
             {"reduction_steps", nf.steps()}};
  r.seconds = clock.seconds();
  return r;
}

}  // namespace taylorlab
