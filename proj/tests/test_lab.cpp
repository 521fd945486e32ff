#include <gtest/gtest.h>

#include "corpus.hpp"

using namespace taylorlab;
using corpus::r;
using corpus::sum;
using corpus::t;

namespace {

Sum corrupted_push(const RTerm& s, const Term& m, const Position& p) {
  Sum good = push_forward(s, m, p);
  // keep the source addend next to its image; it does not approximate N
  if (good.empty()) return Sum(s);
  return good + Sum(s);
}

}  // namespace

TEST(PushForward, Examples) {
  Term m = t("(\\x. x) y");
  EXPECT_EQ(push_forward(r("<\\x. x>[y]"), m, {}), sum("y"));
  EXPECT_TRUE(push_forward(r("<\\x. x>1"), m, {}).empty());
  EXPECT_THROW(push_forward(r("<\\x. x>[z]"), m, {}), StepError);

  Term y = t(corpus::Y);
  Position head = *head_redex_position(y);
  Term next = beta_step(y, head);
  for (const RTerm& s : enumerate_taylor(y, 10)) {
    Sum out = push_forward(s, y, head);
    for (const RTerm& a : out) EXPECT_TRUE(approximates(a, next)) << to_string(s);
    EXPECT_EQ(r_normalize(out), r_normalize(s));
  }
}

TEST(PushForward, SoundOnRandomSteps) {
  Rng rng(1);
  RNormalizer nf;
  for (int i = 0; i < 150; ++i) {
    Term m = random_term(rng, 2 + rng.below(10), 0, 25);
    auto p = leftmost_outermost_redex(m);
    if (!p) continue;
    Term n = beta_step(m, *p);
    for (const RTerm& s : enumerate_taylor(m, 8)) {
      Sum out = push_forward(s, m, *p);
      for (const RTerm& a : out) ASSERT_TRUE(approximates(a, n));
      ASSERT_EQ(nf(out), nf(s));
    }
  }
}

TEST(Simulation, Examples) {
  CheckReport a = check_simulation(t(corpus::II), {Position{}}, 6);
  EXPECT_EQ(a.verdict, Outcome::Pass) << a.to_json().dump();
  EXPECT_EQ(a.stats["approximants"], 2);
  CheckReport b = check_simulation(t("\\x. x y"), {}, 6);
  EXPECT_EQ(b.verdict, Outcome::Pass);
  CheckReport c = check_simulation(t(corpus::Y), {parse_position("body"), parse_position("body.arg")}, 10);
  EXPECT_EQ(c.verdict, Outcome::Pass) << c.to_json().dump();
}

TEST(Simulation, NegativeControl) {
  CheckReport r = check_simulation(t(corpus::II), {Position{}}, 6, corrupted_push);
  EXPECT_EQ(r.verdict, Outcome::Fail);
  EXPECT_EQ(r.exit_code(), 1);
  ASSERT_FALSE(r.witness.is_null());
  EXPECT_TRUE(r.witness.contains("approximant"));
  RTerm culprit = parse_rterm(r.witness["approximant"].get<std::string>());
  EXPECT_TRUE(approximates(culprit, t(corpus::II)));
}

TEST(Commutation, Examples) {
  CheckReport ii = check_commutation(t(corpus::II), 6, 1000);
  EXPECT_EQ(ii.verdict, Outcome::Pass) << ii.to_json().dump();
  EXPECT_EQ(ii.stats["normal_forms"], 1);
  CheckReport om = check_commutation(t(corpus::Omega), 12, 1000);
  EXPECT_EQ(om.verdict, Outcome::Pass) << om.to_json().dump();
  EXPECT_EQ(om.stats["normal_forms"], 0);
  EXPECT_EQ(om.stats["bohm_approximants"], 0);
  CheckReport y = check_commutation(t(corpus::Y), 10, 1000);
  EXPECT_EQ(y.verdict, Outcome::Pass) << y.to_json().dump();
  CheckReport ys = check_commutation(t(corpus::Ystar), 10, 1000);
  EXPECT_EQ(ys.verdict, Outcome::Pass) << ys.to_json().dump();
}

TEST(Commutation, ForwardNeverFailsOnCorpus) {
  for (const std::string& s : corpus::commutation()) {
    CheckReport c = check_commutation(t(s), 10, 1000);
    EXPECT_EQ(c.verdict, Outcome::Pass) << s << " " << c.to_json().dump();
  }
}

TEST(Commutation, RandomTermsNeverFail) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    Term m = random_term(rng, 2 + rng.below(10), 0, 25);
    CheckReport c = check_commutation(m, 7, 200);
    ASSERT_NE(c.verdict, Outcome::Fail) << c.to_json().dump();
  }
}

TEST(HeadCharac, Examples) {
  CheckReport xo = check_head_charac(t(corpus::XOmega), 12, 1000);
  EXPECT_EQ(xo.verdict, Outcome::Pass);
  EXPECT_EQ(xo.witness["approximant"], "\\x. <x>1");
  CheckReport om = check_head_charac(t(corpus::Omega), 12, 1000);
  EXPECT_EQ(om.verdict, Outcome::Inconclusive);
  EXPECT_FALSE(om.witness.contains("approximant"));
  EXPECT_EQ(om.witness["head"], "Unknown(loop)");
  CheckReport i = check_head_charac(t(corpus::I), 12, 1000);
  EXPECT_EQ(i.verdict, Outcome::Pass);
  EXPECT_EQ(i.witness["head"], "Solvable(0)");
  EXPECT_EQ(i.witness["approximant"], "\\x. x");
}

TEST(NormCharac, Examples) {
  CheckReport xo = check_norm_charac(t(corpus::XOmega), 3, 12, 1000);
  EXPECT_EQ(xo.verdict, Outcome::Pass) << xo.to_json().dump();
  const json& lv = xo.stats["levels"];
  EXPECT_EQ(lv[0]["predicted"], "positive");
  EXPECT_EQ(lv[0]["witness_found"], true);
  EXPECT_EQ(lv[1]["predicted"], "negative");
  EXPECT_EQ(lv[1]["witness_found"], false);
  EXPECT_NE(lv[1]["bohm"].get<std::string>().find("_|_"), std::string::npos);

  CheckReport y = check_norm_charac(t(corpus::Y), 5, 10, 1000);
  EXPECT_EQ(y.verdict, Outcome::Pass) << y.to_json().dump();
  std::size_t last = 0;
  for (const json& l : y.stats["levels"]) {
    RTerm w = parse_rterm(l["positive_normal_form"].get<std::string>());
    EXPECT_GE(r_height(w), last);
    last = r_height(w);
  }
}

TEST(Equal, Examples) {
  CheckReport ys = terms_equal_via_taylor(t(corpus::Ystar), t(corpus::Ystar), 4, 10);
  EXPECT_EQ(ys.verdict, Outcome::Pass);
  EXPECT_EQ(ys.witness["evidence"].size(), 5u);
  EXPECT_EQ(ys.witness["evidence"][2]["approximant"], "\\f. <f>[<f>[<f>1]]");
  CheckReport ik = terms_equal_via_taylor(t("\\x. x"), t("\\x. \\y. y"), 3, 10);
  EXPECT_EQ(ik.verdict, Outcome::Fail);
  EXPECT_EQ(ik.witness["d"], 0);
  CheckReport yz = terms_equal_via_taylor(t("\\x. x y"), t("\\x. x z"), 3, 10);
  EXPECT_EQ(yz.verdict, Outcome::Fail);
  EXPECT_EQ(yz.witness["d"], 1);
  // Y itself has no d-positive approximant in common with Y*, its Boehm tree does
  CheckReport yy = terms_equal_via_taylor(bohm_tree(t(corpus::Y), 6, 50), t(corpus::Ystar), 3, 10);
  EXPECT_EQ(yy.verdict, Outcome::Pass) << yy.to_json().dump();
}

TEST(Genericity, Examples) {
  std::vector<Term> ns{t(corpus::I), t(corpus::K), t(corpus::Y), t("\\z. z z")};
  CheckReport g = check_genericity(t("(\\x. \\y. y) *"), t(corpus::Omega), ns, 10, 1000, 4);
  EXPECT_EQ(g.verdict, Outcome::Pass) << g.to_json().dump();
  CheckReport id = check_genericity(t("*"), t(corpus::Omega), ns, 10, 1000, 4);
  EXPECT_EQ(id.verdict, Outcome::Inconclusive);
  EXPECT_NE(id.reason.find("hypothesis"), std::string::npos);
  CheckReport z = check_genericity(t("(\\z. z) *"), t(corpus::Omega), ns, 10, 1000, 4);
  EXPECT_EQ(z.verdict, Outcome::Inconclusive);
  CheckReport solv = check_genericity(t("(\\x. \\y. y) *"), t(corpus::I), ns, 10, 1000, 4);
  EXPECT_EQ(solv.verdict, Outcome::Inconclusive);
}

TEST(Report, JsonShape) {
  CheckReport c = check_commutation(t(corpus::II), 6, 1000);
  json j = c.to_json();
  EXPECT_EQ(j["theorem"], "commutation");
  EXPECT_EQ(j["verdict"], "Pass");
  EXPECT_TRUE(j.contains("inputs"));
  EXPECT_TRUE(j.contains("stats"));
  EXPECT_FALSE(j.contains("reason"));
  EXPECT_EQ(c.exit_code(), 0);
  EXPECT_EQ(check_commutation(t(corpus::II), 6, 1000).to_json().dump(), j.dump());
  EXPECT_EQ(check_commutation(t(corpus::Ystar), 6, 1000).inputs["term"], "let rec F = f F in \\f. F");
}

TEST(Selftest, DeterministicAndGreen) {
  CheckReport a = selftest({42, 1});
  CheckReport b = selftest({42, 1});
  EXPECT_EQ(a.verdict, Outcome::Pass) << a.to_json().dump(2);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_NE(selftest({7, 1}).to_json().dump(), a.to_json().dump());
}
