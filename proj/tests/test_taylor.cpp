#include <gtest/gtest.h>

#include <map>

#include "corpus.hpp"

using namespace taylorlab;
using corpus::r;
using corpus::sum;
using corpus::t;

namespace {

// Every resource term of exactly `size` over the given free names.
class Universe {
 public:
  explicit Universe(std::vector<std::string> names, bool hole = false) : names_(std::move(names)), hole_(hole) {}

  const std::vector<RTerm>& exact(std::size_t size, std::uint32_t depth) {
    auto key = std::make_pair(size, depth);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<RTerm> out;
    if (size == 1) {
      for (const std::string& n : names_) out.push_back(rmake::var(n));
      for (std::uint32_t i = 0; i < depth; ++i) out.push_back(rmake::bound(i));
      if (hole_) out.push_back(rmake::hole());
    } else if (size > 1) {
      for (const RTerm& b : exact(size - 1, depth + 1)) out.push_back(rmake::lam("x", b));
      for (std::size_t f = 1; f < size; ++f) {
        std::size_t rest = size - 1 - f;
        std::vector<RTerm> pool;
        for (std::size_t k = 1; k <= rest; ++k)
          for (const RTerm& e : exact(k, depth)) pool.push_back(e);
        std::vector<Monomial> bags;
        Monomial cur;
        collect(pool, 0, rest, cur, bags);
        for (const RTerm& fun : exact(f, depth))
          for (const Monomial& m : bags) out.push_back(rmake::app(fun, m));
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

  std::vector<RTerm> upto(std::size_t n) {
    std::vector<RTerm> out;
    for (std::size_t k = 1; k <= n; ++k)
      for (const RTerm& s : exact(k, 0)) out.push_back(s);
    return out;
  }

 private:
  static void collect(const std::vector<RTerm>& pool, std::size_t from, std::size_t rest, Monomial& cur,
                      std::vector<Monomial>& out) {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = from; i < pool.size(); ++i) {
      if (pool[i]->size > rest) continue;
      cur.push_back(pool[i]);
      collect(pool, i, rest - pool[i]->size, cur, out);
      cur.pop_back();
    }
  }

  std::vector<std::string> names_;
  bool hole_;
  std::map<std::pair<std::size_t, std::uint32_t>, std::vector<RTerm>> memo_;
};

// Reference reading of the approximation rules on finite λ-terms.
bool ref_approx(const RTerm& s, const Term& m) {
  switch (s.kind()) {
    case RKind::Bound: return m.kind() == TermKind::Bound && m->index == s->index;
    case RKind::Free: return m.kind() == TermKind::Free && m->name == s->name;
    case RKind::Hole: return m.kind() == TermKind::Hole;
    case RKind::Lam: return m.kind() == TermKind::Lam && ref_approx(s->left, m->left);
    case RKind::App:
      if (m.kind() != TermKind::App || !ref_approx(s->left, m->left)) return false;
      for (const RTerm& e : s->bag)
        if (!ref_approx(e, m->right)) return false;
      return true;
  }
  return false;
}

// All multisets over `pool` with total element size at most `budget`.
void bags_upto(const std::vector<RTerm>& pool, std::size_t from, std::size_t count, std::size_t budget, Monomial& cur,
               std::vector<Monomial>& out) {
  if (count == 0) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = from; i < pool.size(); ++i) {
    if (pool[i]->size > budget) continue;
    cur.push_back(pool[i]);
    bags_upto(pool, i, count - 1, budget - pool[i]->size, cur, out);
    cur.pop_back();
  }
}

}  // namespace

TEST(Approximates, Examples) {
  EXPECT_TRUE(approximates(r("\\x. x"), t("\\x. x")));
  EXPECT_TRUE(approximates(r("<\\x. x>1"), t(corpus::II)));
  EXPECT_TRUE(approximates(r("\\f. <f>[<f>1]"), t(corpus::Ystar)));
  EXPECT_FALSE(approximates(r("\\f. <f>[f]"), t(corpus::Ystar)));
  EXPECT_FALSE(approximates(r("<x>1"), t("y z")));
  EXPECT_EQ(approximates3(r("\\f. <f>[<f>1]"), unfold(t(corpus::Ystar), 1)), Tri::Unknown);
  EXPECT_EQ(approximates3(r("\\f. <f>1"), unfold(t(corpus::Ystar), 1)), Tri::True);
  EXPECT_EQ(approximates3(r("\\f. <g>[<f>1]"), unfold(t(corpus::Ystar), 1)), Tri::False);
}

TEST(EnumerateTaylor, Examples) {
  EXPECT_EQ(enumerate_taylor(t("\\x. x"), 5), sum("\\x. x"));
  Sum ii = enumerate_taylor(t(corpus::II), 6);
  EXPECT_EQ(ii, sum("<\\x. x>1 + <\\x. x>[\\x. x]"));
  EXPECT_EQ(to_string(ii[0]), "<\\x. x>1");
  EXPECT_EQ(r_size(ii[0]), 3u);
  EXPECT_EQ(r_size(ii[1]), 5u);
  EXPECT_EQ(r_size(r("<\\x. x>[\\x. x, \\x. x]")), 7u);
  EXPECT_TRUE(enumerate_taylor(t("_|_"), 10).empty());
  EXPECT_TRUE(enumerate_taylor(t("\\x. _|_"), 10).empty());
}

TEST(EnumerateTaylor, Contexts) {
  EXPECT_EQ(enumerate_taylor_context(t("*"), 4), sum("*"));
  // the three approximants up to size 5, plus the three-hole one at size 6
  EXPECT_EQ(enumerate_taylor_context(t("(\\y. y) *"), 5), sum("<\\y. y>1 + <\\y. y>[*] + <\\y. y>[*, *]"));
  EXPECT_EQ(enumerate_taylor_context(t("(\\y. y) *"), 6),
            sum("<\\y. y>1 + <\\y. y>[*] + <\\y. y>[*, *] + <\\y. y>[*, *, *]"));
  EXPECT_EQ(enumerate_taylor_context(t(corpus::Y), 9), enumerate_taylor(t(corpus::Y), 9));
}

TEST(EnumerateTaylor, MonotoneAndDepthFilter) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    Term m = random_term(rng, 1 + rng.below(10));
    Sum prev;
    for (std::size_t n = 0; n <= 9; ++n) {
      Sum s = enumerate_taylor(m, n);
      ASSERT_TRUE(prev.subset_of(s)) << to_string(m);
      for (std::size_t d = 0; d < 4; ++d) {
        Sum sd = enumerate_taylor(m, n, d);
        std::vector<RTerm> kept;
        for (const RTerm& a : s)
          if (r_height(a) < d) kept.push_back(a);
        ASSERT_EQ(sd, Sum::from(kept));
      }
      prev = s;
    }
  }
}

TEST(EnumerateTaylor, AgreesWithBruteForce) {
  Universe u({"a", "b"});
  std::vector<RTerm> all = u.upto(8);
  ASSERT_GT(all.size(), 1000u);
  Rng rng(2);
  for (int i = 0; i < 60; ++i) {
    Term m = random_term(rng, 1 + rng.below(9), 0, 10);
    m = subst(m, "c", t("a"));
    std::vector<RTerm> expect;
    for (const RTerm& s : all) {
      bool in = ref_approx(s, m);
      ASSERT_EQ(approximates(s, m), in) << to_string(s) << " vs " << to_string(m);
      if (in) expect.push_back(s);
    }
    ASSERT_EQ(enumerate_taylor(m, 8), Sum::from(expect)) << to_string(m);
  }
}

TEST(EnumerateTaylor, SubstitutionCompatibility) {
  Rng rng(3);
  const std::size_t n = 8;
  for (int i = 0; i < 80; ++i) {
    Term m = random_term(rng, 1 + rng.below(7), 0, 40);
    Term nn = random_term(rng, 1 + rng.below(4), 0, 20);
    Term target = subst(m, "a", nn);
    std::vector<RTerm> expect;
    Sum ns = enumerate_taylor(nn, n);
    std::vector<RTerm> pool(ns.begin(), ns.end());
    for (const RTerm& s : enumerate_taylor(m, n)) {
      std::size_t k = deg(s, "a");
      std::size_t base = r_size(s) - k;
      if (base + k > n) continue;
      std::vector<Monomial> bags;
      Monomial cur;
      bags_upto(pool, 0, k, n - base, cur, bags);
      for (const Monomial& b : bags)
        for (const RTerm& a : r_subst(s, "a", b))
          if (r_size(a) <= n) expect.push_back(a);
    }
    ASSERT_EQ(enumerate_taylor(target, n), Sum::from(expect)) << to_string(m) << " [" << to_string(nn) << "/a]";
  }
}

TEST(EnumerateTaylor, ContextCompatibility) {
  const std::size_t n = 8;
  std::vector<std::string> contexts{"(\\y. y) *", "\\x. * x", "* (\\z. z) *", "\\x. x (* x)"};
  std::vector<std::string> fillers{"y", "\\u. u", "x y", "\\u. u x"};
  for (const std::string& cs : contexts) {
    for (const std::string& ms : fillers) {
      Term c = t(cs), m = t(ms);
      std::vector<RTerm> expect;
      for (const RTerm& cx : enumerate_taylor_context(c, n)) {
        std::size_t k = deg_hole(cx);
        std::size_t base = r_size(cx) - k;
        std::vector<Monomial> bags;
        Monomial cur;
        Sum mslice = enumerate_taylor(m, n);
        std::vector<RTerm> mp(mslice.begin(), mslice.end());
        bags_upto(mp, 0, k, n - std::min(n, base), cur, bags);
        for (const Monomial& b : bags)
          for (const RTerm& a : r_context_fill(cx, b))
            if (r_size(a) <= n) expect.push_back(a);
      }
      ASSERT_EQ(enumerate_taylor(context_fill(c, m), n), Sum::from(expect)) << cs << " / " << ms;
    }
  }
}

TEST(TaylorZero, Examples) {
  EXPECT_TRUE(taylor_zero(t("_|_")));
  EXPECT_TRUE(taylor_zero(t("\\x. _|_")));
  EXPECT_TRUE(taylor_zero(t("_|_ x")));
  EXPECT_FALSE(taylor_zero(t("x _|_")));
  EXPECT_TRUE(enumerate_taylor(t("x _|_"), 3).contains(r("<x>1")));
}

TEST(TaylorZero, MatchesEmptySlice) {
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    Term m = random_term(rng, 1 + rng.below(8));
    switch (rng.below(4)) {
      case 0: m = make::app(m, make::bottom()); break;
      case 1: m = make::app(make::bottom(), m); break;
      case 2: m = make::lam("x", make::app(make::bottom(), m)); break;
      default: break;
    }
    // the approximant with every bag empty is no larger than m
    ASSERT_EQ(taylor_zero(m), enumerate_taylor(m, term_size(m)).empty()) << to_string(m);
  }
}

TEST(MemberOfBohm, Examples) {
  EXPECT_EQ(member_of_bohm(r("\\f. <f>1"), t(corpus::Y), 50), Tri::True);
  EXPECT_EQ(member_of_bohm(r("\\f. <f>[<f>[<f>1]]"), t(corpus::Y), 50), Tri::True);
  EXPECT_EQ(member_of_bohm(r("\\f. <f>[f]"), t(corpus::Y), 50), Tri::False);
  EXPECT_EQ(member_of_bohm(r("<\\x. <x>[x]>[\\x. <x>[x]]"), t(corpus::Omega), 50), Tri::False);
  EXPECT_EQ(member_of_bohm(r("x"), t(corpus::Omega), 50), Tri::False);
  EXPECT_EQ(member_of_bohm(r("x"), t("(\\x. x x x) (\\x. x x x)"), 10), Tri::Unknown);
}

TEST(CanonicalPositive, Properties) {
  for (const std::string& s : corpus::commutation()) {
    Term m = t(s);
    for (std::size_t d = 0; d < 4; ++d) {
      Term bt = bohm_tree(m, d + 1, 100);
      auto c = canonical_positive(bt, d);
      if (!c) continue;
      EXPECT_TRUE(is_d_positive(*c, d)) << s;
      EXPECT_TRUE(approximates(*c, bt));
      EXPECT_EQ(r_normalize(*c), Sum(*c));
    }
  }
  EXPECT_EQ(canonical_positive(t("\\x. x (y z)"), 1), r("\\x. <x>[<y>1]"));
  EXPECT_FALSE(canonical_positive(t("\\x. x _|_"), 1));
  EXPECT_EQ(canonical_positive(t("\\x. x _|_"), 0), r("\\x. <x>1"));
}

TEST(Pullback, Substitution) {
  // body x (x z) with x bound at index 0, argument P = \y. y
  Term body = t("\\x. x (x z)")->left;
  Term reduct = beta_contract(body, t("\\y. y"));
  for (const RTerm& u : enumerate_taylor(reduct, 9)) {
    auto pb = substitution_pullback(u, body);
    ASSERT_TRUE(pb) << to_string(u);
    EXPECT_TRUE(approximates(pb->first, body));
    for (const RTerm& p : pb->second) EXPECT_TRUE(approximates(p, t("\\y. y")));
    EXPECT_TRUE(r_contract(pb->first, pb->second).contains(u)) << to_string(u);
  }
}

TEST(Pullback, HeadStepAndBohm) {
  for (const std::string& s : corpus::commutation()) {
    Term m = t(s);
    if (head_redex_position(m)) {
      Term next = head_step(m);
      for (const RTerm& u : enumerate_taylor(next, 8)) {
        auto pb = head_step_pullback(m, u);
        ASSERT_TRUE(pb) << s << " " << to_string(u);
        EXPECT_TRUE(approximates(*pb, m));
        EXPECT_TRUE(hr_step(*pb).contains(u));
      }
    }
    Term bt = bohm_tree(m, 4, 100);
    for (const RTerm& u : enumerate_taylor(bt, 9)) {
      auto pb = bohm_pullback(m, u, 100);
      ASSERT_TRUE(pb) << s << " " << to_string(u);
      EXPECT_TRUE(approximates(*pb, m));
      EXPECT_TRUE(r_normalize(*pb).contains(u)) << s << " " << to_string(u);
    }
  }
}
