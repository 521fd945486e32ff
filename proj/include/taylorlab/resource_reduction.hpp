// Resource reduction: simple steps, sums, normal forms, head reduction and
// the confluence diamond.
#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "beta.hpp"
#include "resource.hpp"

namespace taylorlab {

struct RStep {
  enum class Kind : std::uint8_t { Body, Fun, Arg } kind;
  std::uint32_t index = 0;  // Arg: element of the monomial
  friend bool operator==(const RStep& a, const RStep& b) { return a.kind == b.kind && a.index == b.index; }
};

/// Path to a ⟨λx.s⟩t̄ pattern.
using RSite = std::vector<RStep>;

inline std::size_t multiset_depth(const RSite& p) {
  std::size_t d = 0;
  for (const RStep& s : p) d += s.kind == RStep::Kind::Arg;
  return d;
}

inline std::string to_string(const RSite& p) {
  if (p.empty()) return "root";
  std::string out;
  for (const RStep& s : p) {
    if (!out.empty()) out += '.';
    switch (s.kind) {
      case RStep::Kind::Body: out += "body"; break;
      case RStep::Kind::Fun: out += "fun"; break;
      case RStep::Kind::Arg: out += "arg[" + std::to_string(s.index) + "]"; break;
    }
  }
  return out;
}

inline RSite parse_rsite(std::string_view text) {
  RSite p;
  if (text.empty() || text == "root") return p;
  std::size_t start = 0;
  for (;;) {
    std::size_t dot = text.find('.', start);
    std::string_view part = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (part == "body") p.push_back({RStep::Kind::Body, 0});
    else if (part == "fun") p.push_back({RStep::Kind::Fun, 0});
    else if (part.substr(0, 4) == "arg[" && part.size() > 5 && part.back() == ']') {
      std::string_view digits = part.substr(4, part.size() - 5);
      std::uint32_t k = 0;
      auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
      if (ec != std::errc() || end != digits.data() + digits.size())
        throw Error("invalid bag index in '" + std::string(part) + "'");
      p.push_back({RStep::Kind::Arg, k});
    } else throw Error("invalid resource site component '" + std::string(part) + "'");
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return p;
}

inline bool is_r_redex(const RTerm& t) { return t.kind() == RKind::App && t->left.kind() == RKind::Lam; }

/// All redex sites, leftmost-outermost first.
inline std::vector<RSite> redex_sites(const RTerm& s) {
  std::vector<RSite> out;
  RSite p;
  std::function<void(const RTerm&)> go = [&](const RTerm& t) {
    if (is_r_redex(t)) out.push_back(p);
    if (t.kind() == RKind::Lam) {
      p.push_back({RStep::Kind::Body, 0});
      go(t->left);
      p.pop_back();
    } else if (t.kind() == RKind::App) {
      p.push_back({RStep::Kind::Fun, 0});
      go(t->left);
      p.pop_back();
      for (std::uint32_t i = 0; i < t->bag.size(); ++i) {
        p.push_back({RStep::Kind::Arg, i});
        go(t->bag[i]);
        p.pop_back();
      }
    }
  };
  go(s);
  return out;
}

inline const RTerm& rsubterm_at(const RTerm& s, const RSite& p) {
  const RTerm* t = &s;
  for (const RStep& st : p) {
    if (st.kind == RStep::Kind::Body && (*t).kind() == RKind::Lam) t = &(*t)->left;
    else if (st.kind == RStep::Kind::Fun && (*t).kind() == RKind::App) t = &(*t)->left;
    else if (st.kind == RStep::Kind::Arg && (*t).kind() == RKind::App && st.index < (*t)->bag.size())
      t = &(*t)->bag[st.index];
    else throw StepError(StepError::Kind::NotARedex, "resource site " + to_string(p) + " does not exist");
  }
  return *t;
}

namespace detail {
inline Sum r_step_from(const RTerm& t, const RSite& p, std::size_t i) {
  if (i == p.size()) {
    if (!is_r_redex(t)) throw StepError(StepError::Kind::NotARedex, "no resource redex at " + to_string(p));
    return r_contract(t->left->left, t->bag);
  }
  const RStep& st = p[i];
  std::vector<RTerm> out;
  if (st.kind == RStep::Kind::Body && t.kind() == RKind::Lam) {
    for (const RTerm& u : r_step_from(t->left, p, i + 1)) out.push_back(rmake::lam(t->name, u));
  } else if (st.kind == RStep::Kind::Fun && t.kind() == RKind::App) {
    for (const RTerm& u : r_step_from(t->left, p, i + 1)) out.push_back(rmake::app(u, t->bag));
  } else if (st.kind == RStep::Kind::Arg && t.kind() == RKind::App && st.index < t->bag.size()) {
    for (const RTerm& u : r_step_from(t->bag[st.index], p, i + 1)) {
      Monomial bag = t->bag;
      bag[st.index] = u;
      out.push_back(rmake::app(t->left, std::move(bag)));
    }
  } else {
    throw StepError(StepError::Kind::NotARedex, "resource site " + to_string(p) + " does not exist");
  }
  return Sum::from(std::move(out));
}
}  // namespace detail

/// s ↦r S at the given site, extended linearly through the context.
inline Sum r_step(const RTerm& s, const RSite& at) { return detail::r_step_from(s, at, 0); }

inline Sum r_min_depth_step(const RTerm& s, std::size_t d, const RSite& at) {
  if (multiset_depth(at) < d)
    throw StepError(StepError::Kind::DepthTooShallow, "site " + to_string(at) + " has multiset depth " +
                                                          std::to_string(multiset_depth(at)) + " < " + std::to_string(d));
  return r_step(s, at);
}

inline std::vector<RSite> min_depth_sites(const RTerm& s, std::size_t d) {
  std::vector<RSite> out;
  for (RSite& p : redex_sites(s))
    if (multiset_depth(p) >= d) out.push_back(std::move(p));
  return out;
}

/// One step of rule Σ_r: each listed (addend, site) pair fires, listed
/// addends with no site stay, unlisted addends are kept. An addend may be
/// listed several times since s = s + s.
inline Sum r_step_sum(const Sum& s, const std::vector<std::pair<RTerm, std::optional<RSite>>>& choices) {
  bool fired = false;
  Sum out;
  std::vector<RTerm> mentioned;
  for (const auto& [t, site] : choices) {
    if (!s.contains(t)) throw StepError(StepError::Kind::Mismatch, "choice " + to_string(t) + " is not an addend");
    mentioned.push_back(t);
    if (site) {
      out += r_step(t, *site);
      fired = true;
    } else {
      out += t;
    }
  }
  if (!fired) throw StepError(StepError::Kind::EmptyChoice, "no addend fires");
  Sum m = Sum::from(std::move(mentioned));
  for (const RTerm& t : s)
    if (!m.contains(t)) out += t;
  return out;
}

// ---------------------------------------------------------------------------
// Normal forms

enum class Strategy { LeftmostOutermost, RightmostInnermost };

inline std::optional<RSite> rightmost_innermost_site(const RTerm& s) {
  RSite p;
  std::function<bool(const RTerm&)> go = [&](const RTerm& t) -> bool {
    if (t.kind() == RKind::Lam) {
      p.push_back({RStep::Kind::Body, 0});
      if (go(t->left)) return true;
      p.pop_back();
    } else if (t.kind() == RKind::App) {
      for (std::uint32_t i = static_cast<std::uint32_t>(t->bag.size()); i-- > 0;) {
        p.push_back({RStep::Kind::Arg, i});
        if (go(t->bag[i])) return true;
        p.pop_back();
      }
      p.push_back({RStep::Kind::Fun, 0});
      if (go(t->left)) return true;
      p.pop_back();
    }
    return is_r_redex(t);
  };
  if (go(s)) return p;
  return std::nullopt;
}

inline std::optional<RSite> leftmost_outermost_site(const RTerm& s) {
  RSite p;
  std::function<bool(const RTerm&)> go = [&](const RTerm& t) -> bool {
    if (is_r_redex(t)) return true;
    if (t.kind() == RKind::Lam) {
      p.push_back({RStep::Kind::Body, 0});
      if (go(t->left)) return true;
      p.pop_back();
    } else if (t.kind() == RKind::App) {
      p.push_back({RStep::Kind::Fun, 0});
      if (go(t->left)) return true;
      p.pop_back();
      for (std::uint32_t i = 0; i < t->bag.size(); ++i) {
        p.push_back({RStep::Kind::Arg, i});
        if (go(t->bag[i])) return true;
        p.pop_back();
      }
    }
    return false;
  };
  if (go(s)) return p;
  return std::nullopt;
}

inline bool is_r_normal(const RTerm& s) { return !leftmost_outermost_site(s); }

/// Memoizing normalizer; reuse one instance to share work across terms.
class RNormalizer {
 public:
  explicit RNormalizer(Strategy st = Strategy::LeftmostOutermost) : strategy_(st) {}

  const Sum& operator()(const RTerm& s) {
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    auto site = strategy_ == Strategy::LeftmostOutermost ? leftmost_outermost_site(s) : rightmost_innermost_site(s);
    Sum result;
    if (!site) {
      result = Sum(s);
    } else {
      ++steps_;
      for (const RTerm& t : r_step(s, *site)) result += (*this)(t);
    }
    return memo_.emplace(s, std::move(result)).first->second;
  }

  Sum operator()(const Sum& s) {
    Sum out;
    for (const RTerm& t : s) out += (*this)(t);
    return out;
  }

  std::size_t steps() const { return steps_; }

 private:
  Strategy strategy_;
  std::unordered_map<RTerm, Sum, RHash, REq> memo_;
  std::size_t steps_ = 0;
};

inline Sum r_normalize(const RTerm& s, Strategy st = Strategy::LeftmostOutermost) { return RNormalizer(st)(s); }
inline Sum r_normalize(const Sum& s, Strategy st = Strategy::LeftmostOutermost) { return RNormalizer(st)(s); }

// ---------------------------------------------------------------------------
// Head reduction

inline std::optional<RSite> r_head_redex_site(const RTerm& s) {
  RSite p;
  const RTerm* t = &s;
  while ((*t).kind() == RKind::Lam) {
    p.push_back({RStep::Kind::Body, 0});
    t = &(*t)->left;
  }
  std::size_t fun_edges = 0;
  const RTerm* h = t;
  while ((*h).kind() == RKind::App) {
    h = &(*h)->left;
    ++fun_edges;
  }
  if ((*h).kind() != RKind::Lam || fun_edges == 0) return std::nullopt;
  p.insert(p.end(), fun_edges - 1, RStep{RStep::Kind::Fun, 0});
  return p;
}

inline bool is_r_hnf(const RTerm& s) { return !r_head_redex_site(s); }

/// H_r: fires the head redex, identity on head normal forms.
inline Sum hr_step(const RTerm& s) {
  auto site = r_head_redex_site(s);
  return site ? r_step(s, *site) : Sum(s);
}

inline Sum hr_step(const Sum& s) {
  Sum out;
  for (const RTerm& t : s) out += hr_step(t);
  return out;
}

inline std::pair<Sum, std::size_t> hr_to_hnf(Sum s) {
  std::size_t k = 0;
  for (;;) {
    bool done = std::all_of(s.begin(), s.end(), [](const RTerm& t) { return is_r_hnf(t); });
    if (done) return {s, k};
    s = hr_step(s);
    ++k;
  }
}

// ---------------------------------------------------------------------------
// Termination measure

/// ‖S‖: the multiset of addend sizes, listed in decreasing order.
inline std::vector<std::size_t> dm_measure(const Sum& s) {
  std::vector<std::size_t> out;
  for (const RTerm& t : s) out.push_back(t->size);
  std::sort(out.rbegin(), out.rend());
  return out;
}

/// Dershowitz–Manna ordering on finite multisets of naturals: a ≺ b.
inline bool dm_less(std::vector<std::size_t> a, std::vector<std::size_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a == b) return false;
  // remove the common part; then every leftover of a must be dominated by a leftover of b
  std::vector<std::size_t> ra, rb;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(ra));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(rb));
  if (rb.empty()) return false;
  std::size_t top = rb.back();
  return std::all_of(ra.begin(), ra.end(), [&](std::size_t x) { return x < top; });
}

// ---------------------------------------------------------------------------
// Strong confluence

/// Whether U is reachable from T in at most one Σ_r step.
inline bool reaches_in_one(const Sum& t, const Sum& u) {
  if (t == u) return true;
  Sum covered;
  bool fired = false;
  for (const RTerm& a : t) {
    bool has_option = false;
    if (u.contains(a)) {
      covered += a;
      has_option = true;
    }
    for (const RSite& p : redex_sites(a)) {
      Sum r = r_step(a, p);
      if (r.subset_of(u)) {
        covered += r;
        has_option = true;
        fired = true;
      }
    }
    if (!has_option) return false;
  }
  return fired && covered == u;
}

namespace detail {

inline const std::string& residual_mark() {
  static const std::string m = "\x01";
  return m;
}

inline RTerm mark_redex(const RTerm& s, const RSite& p, std::size_t i = 0) {
  if (i == p.size()) return rmake::app(rmake::lam(residual_mark(), s->left->left), s->bag);
  const RStep& st = p[i];
  if (st.kind == RStep::Kind::Body) return rmake::lam(s->name, mark_redex(s->left, p, i + 1));
  if (st.kind == RStep::Kind::Fun) return rmake::app(mark_redex(s->left, p, i + 1), s->bag);
  Monomial bag = s->bag;
  bag[st.index] = mark_redex(bag[st.index], p, i + 1);
  return rmake::app(s->left, std::move(bag));
}

inline std::optional<RSite> marked_site(const RTerm& s) {
  for (RSite& p : redex_sites(s))
    if (rsubterm_at(s, p)->left->name == residual_mark()) return p;
  return std::nullopt;
}

// Fires site p, then in every addend the residual of site q.
inline Sum fire_then_residual(const RTerm& s, const RSite& p, const RSite& q) {
  Sum out;
  for (const RTerm& a : r_step(mark_redex(s, q), p)) {
    auto site = marked_site(a);
    if (site) out += r_step(a, *site);
    else out += a;
  }
  return out;
}

}  // namespace detail

struct DiamondResult {
  bool ok = true;
  std::size_t pairs = 0;
  std::optional<std::pair<RSite, RSite>> failure;
};

/// For every pair of one-step reducts of {s}, looks for a common reduct
/// reachable in at most one Σ_r step from each.
inline DiamondResult check_diamond_detailed(const RTerm& s) {
  DiamondResult res;
  std::vector<RSite> sites = redex_sites(s);
  std::vector<Sum> reducts;
  for (const RSite& p : sites) reducts.push_back(r_step(s, p));
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      ++res.pairs;
      const Sum& t1 = reducts[i];
      const Sum& t2 = reducts[j];
      if (t1 == t2) continue;
      Sum u1 = detail::fire_then_residual(s, sites[i], sites[j]);
      if (reaches_in_one(t1, u1) && reaches_in_one(t2, u1)) continue;
      Sum u2 = detail::fire_then_residual(s, sites[j], sites[i]);
      if (reaches_in_one(t1, u2) && reaches_in_one(t2, u2)) continue;
      res.ok = false;
      res.failure = std::make_pair(sites[i], sites[j]);
      return res;
    }
  }
  return res;
}

inline bool check_diamond(const RTerm& s) { return check_diamond_detailed(s).ok; }

}  // namespace taylorlab
