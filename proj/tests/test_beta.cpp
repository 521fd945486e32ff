#include <gtest/gtest.h>

#include "corpus.hpp"

using namespace taylorlab;
using corpus::t;

namespace {
const char* Delta = "\\x. x x";
const char* DeltaF = "\\x. f (x x)";

}  // namespace

TEST(BetaStep, Examples) {
  EXPECT_TRUE(alpha_eq(beta_step(t("(\\x. x) y"), {}), t("y")));
  Term omega = t(corpus::Omega);
  EXPECT_TRUE(alpha_eq(beta_step(omega, {}), omega));
  EXPECT_TRUE(alpha_eq(beta_step(t("(\\x. x x) (\\x. x x)"), {}), make::app(t(Delta), t(Delta))));
  EXPECT_TRUE(alpha_eq(beta_step(t("\\z. (\\x. x) z"), parse_position("body")), t("\\z. z")));
  EXPECT_THROW(beta_step(t("x y"), {}), StepError);
}

TEST(BotStep, Examples) {
  auto oracle = loop_oracle(100);
  EXPECT_EQ(bot_step(t("\\x. _|_"), {}, oracle).kind(), TermKind::Bottom);
  EXPECT_EQ(bot_step(t("_|_ y"), {}, oracle).kind(), TermKind::Bottom);
  EXPECT_EQ(bot_step(t(corpus::Omega), {}, oracle).kind(), TermKind::Bottom);
  EXPECT_TRUE(alpha_eq(bot_step(t(std::string("\\x. x (") + corpus::Omega + ")"), parse_position("body.arg"), oracle),
                       t("\\x. x _|_")));
  try {
    bot_step(t("\\x. x"), {}, oracle);
    FAIL();
  } catch (const StepError& e) {
    EXPECT_EQ(e.kind, StepError::Kind::NotABottomRedex);
  }
  // the triple self-application grows without repeating, so no certificate
  try {
    bot_step(t("\\x. (\\x. x x x) (\\x. x x x)"), parse_position("body"), loop_oracle(30));
    FAIL();
  } catch (const StepError& e) {
    EXPECT_EQ(e.kind, StepError::Kind::OracleUnknown);
  }
}

TEST(HeadForm, Examples) {
  HeadForm a = head_form(t("\\x. y x"));
  EXPECT_EQ(a.binders, std::vector<std::string>{"x"});
  EXPECT_EQ(a.kind, HeadKind::Variable);
  EXPECT_TRUE(alpha_eq(a.head, t("y")));
  ASSERT_EQ(a.args.size(), 1u);
  EXPECT_EQ(a.args[0].kind(), TermKind::Bound);

  HeadForm b = head_form(t("(\\z. z) a b"));
  EXPECT_TRUE(b.binders.empty());
  EXPECT_EQ(b.kind, HeadKind::Redex);
  EXPECT_TRUE(alpha_eq(b.head, t("\\z. z")));
  EXPECT_TRUE(alpha_eq(b.redex_arg, t("a")));
  ASSERT_EQ(b.args.size(), 1u);
  EXPECT_TRUE(alpha_eq(b.args[0], t("b")));

  HeadForm c = head_form(t(corpus::Y));
  EXPECT_EQ(c.binders, std::vector<std::string>{"f"});
  EXPECT_EQ(c.kind, HeadKind::Redex);
  EXPECT_TRUE(c.args.empty());
  EXPECT_TRUE(alpha_eq(make::lam("f", c.redex_arg), t(std::string("\\f. ") + DeltaF)));
}

TEST(HeadStep, Examples) {
  EXPECT_TRUE(alpha_eq(head_step(t("(\\x. x) y")), t("y")));
  Term hnf = t("\\x. y x");
  EXPECT_TRUE(alpha_eq(head_step(hnf), hnf));
  Term omega = t(corpus::Omega);
  EXPECT_TRUE(alpha_eq(head_step(omega), omega));
}

TEST(HeadStep, FixedPointIffVariableHead) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    Term m = random_term(rng, 1 + rng.below(12));
    bool fixed = alpha_eq(head_step(m), m);
    bool var_head = head_form(m).kind == HeadKind::Variable;
    // Ω-like redexes reproduce themselves, so only one direction is unconditional
    if (var_head) ASSERT_TRUE(fixed) << to_string(m);
    if (!fixed) ASSERT_FALSE(var_head);
    if (fixed && !var_head) ASSERT_EQ(head_form(m).kind, HeadKind::Redex) << to_string(m);
  }
}

TEST(HeadNormalize, Examples) {
  HeadResult a = head_normalize(t("(\\x. \\y. x) a b"), 10);
  EXPECT_TRUE(alpha_eq(a.term, t("a")));
  EXPECT_TRUE(a.verdict.solvable);
  EXPECT_EQ(a.verdict.steps, 2u);
  EXPECT_EQ(to_string(a.verdict), "Solvable(2)");

  HeadResult b = head_normalize(t(corpus::Omega), 100);
  EXPECT_FALSE(b.verdict.solvable);
  EXPECT_EQ(b.verdict.reason, UnknownReason::Loop);
  EXPECT_TRUE(b.verdict.certified_unsolvable());

  HeadResult c = head_normalize(t(corpus::Y), 10);
  EXPECT_TRUE(c.verdict.solvable);
  EXPECT_EQ(c.verdict.steps, 1u);
  EXPECT_TRUE(alpha_eq(c.term, t(std::string("\\f. f ((") + DeltaF + ") (" + DeltaF + "))")));

  HeadResult d = head_normalize(t("(\\x. x x x) (\\x. x x x)"), 25);
  EXPECT_FALSE(d.verdict.solvable);
  EXPECT_EQ(d.verdict.reason, UnknownReason::Fuel);
  EXPECT_FALSE(d.verdict.certified_unsolvable());

  EXPECT_EQ(head_normalize(t("_|_ x"), 10).verdict.reason, UnknownReason::BottomHead);
}

TEST(Solvable, Examples) {
  EXPECT_EQ(to_string(solvable(t("\\x. x"), 10)), "Solvable(0)");
  EXPECT_EQ(to_string(solvable(t(corpus::Omega), 10)), "Unknown(loop)");
  EXPECT_EQ(to_string(solvable(t(corpus::KIOmega), 10)), "Solvable(1)");
}

TEST(MinDepthStep, Examples) {
  EXPECT_TRUE(alpha_eq(min_depth_step(t("x ((\\y. y) z)"), 1, parse_position("arg")), t("x z")));
  try {
    min_depth_step(t("(\\y. y) z w"), 1, parse_position("fun"));
    FAIL();
  } catch (const StepError& e) {
    EXPECT_EQ(e.kind, StepError::Kind::DepthTooShallow);
  }
}

TEST(MinDepthStep, Monotone) {
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    Term m = random_term(rng, 2 + rng.below(14));
    std::vector<Position> redexes;
    std::function<void(const Term&, Position&)> walk = [&](const Term& u, Position& p) {
      if (is_beta_redex(u)) redexes.push_back(p);
      if (u.kind() == TermKind::Lam) {
        p.push_back(Step::Body);
        walk(u->left, p);
        p.pop_back();
      } else if (u.kind() == TermKind::App) {
        p.push_back(Step::Fun);
        walk(u->left, p);
        p.back() = Step::Arg;
        walk(u->right, p);
        p.pop_back();
      }
    };
    Position root;
    walk(m, root);
    for (const Position& p : redexes) {
      std::size_t d = applicative_depth(p);
      Term at_d = min_depth_step(m, d, p);
      for (std::size_t e = 0; e <= d; ++e) ASSERT_TRUE(alpha_eq(min_depth_step(m, e, p), at_d));
      ASSERT_THROW(min_depth_step(m, d + 1, p), StepError);
      ASSERT_TRUE(alpha_eq(at_d, beta_step(m, p)));
    }
  }
}

TEST(BohmTree, Examples) {
  EXPECT_EQ(to_string(bohm_tree(t(corpus::Y), 3, 50)), "\\f. f (f (f ◻))");
  EXPECT_EQ(bohm_tree(t(corpus::Omega), 5, 50).kind(), TermKind::Bottom);
  EXPECT_TRUE(alpha_eq(bohm_tree(t("\\x. x"), 5, 50), t("\\x. x")));
  EXPECT_EQ(to_string(bohm_tree(t(corpus::XOmega), 3, 50)), "\\x. x _|_");
  EXPECT_EQ(bohm_tree(t("(\\x. x x x) (\\x. x x x)"), 3, 20).kind(), TermKind::Cut);
  EXPECT_TRUE(alpha_eq(bohm_tree(t(corpus::Y), 5, 50), unfold(t(corpus::Ystar), 5)));
  EXPECT_TRUE(alpha_eq(bohm_tree(t(corpus::Ystar), 4, 50), unfold(t(corpus::Ystar), 4)));
}

TEST(BohmTree, PrefixStabilityAndNormalForm) {
  Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    Term m = random_term(rng, 1 + rng.below(14), 0, 25);
    for (std::size_t d = 0; d < 4; ++d) {
      Term a = bohm_tree(m, d, 100), b = bohm_tree(m, d + 1, 100);
      ASSERT_TRUE(agree_above(a, b, d)) << to_string(m);
      ASSERT_TRUE(is_beta_bot_normal(b)) << to_string(b);
    }
  }
}

TEST(Stratify, YLevels) {
  StratifyResult r = stratify(t(corpus::Y), 2, 50);
  ASSERT_FALSE(r.diagnostic);
  ASSERT_EQ(r.levels.size(), 3u);
  std::string dd = std::string("(") + DeltaF + ") (" + DeltaF + ")";
  EXPECT_TRUE(alpha_eq(r.levels[0], t(corpus::Y)));
  EXPECT_TRUE(alpha_eq(r.levels[1], t("\\f. f (" + dd + ")")));
  EXPECT_TRUE(alpha_eq(r.levels[2], t("\\f. f (f (" + dd + "))")));
}

TEST(Stratify, NormalTermIsConstant) {
  Term n = t("\\x. x (\\y. y x) z");
  StratifyResult r = stratify(n, 3, 50);
  ASSERT_EQ(r.levels.size(), 4u);
  for (const Term& l : r.levels) EXPECT_TRUE(alpha_eq(l, n));
}

TEST(Stratify, ReplayReproducesLevels) {
  Rng rng(23);
  std::vector<Term> terms{t(corpus::Y), t(corpus::Yg), t(corpus::XOmega)};
  for (int i = 0; i < 100; ++i) terms.push_back(random_term(rng, 2 + rng.below(12), 0, 25));
  for (const Term& m : terms) {
    StratifyResult r = stratify(m, 3, 60);
    for (std::size_t d = 0; d + 1 < r.levels.size(); ++d) {
      Term cur = r.levels[d];
      for (const Position& p : r.steps[d]) cur = min_depth_step(cur, d, p);
      ASSERT_TRUE(alpha_eq(cur, r.levels[d + 1])) << to_string(m) << " level " << d;
    }
  }
}

TEST(Stratify, UnsolvableFrontierDiagnostic) {
  StratifyResult r = stratify(t(corpus::Omega), 2, 20);
  ASSERT_TRUE(r.diagnostic);
  EXPECT_EQ(r.levels.size(), 1u);
}

TEST(BetaNormalize, NormalOrder) {
  NormalizeResult r = beta_normalize(t(std::string("(\\x. \\y. y) (") + corpus::Omega + ")"), 10);
  EXPECT_TRUE(r.normal);
  EXPECT_TRUE(alpha_eq(r.term, t("\\y. y")));
  EXPECT_FALSE(beta_normalize(t(corpus::Omega), 10).normal);
}
