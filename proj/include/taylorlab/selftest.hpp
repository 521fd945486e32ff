// Seeded property suite over random λ-terms and resource terms.
#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "lab.hpp"
#include "parser.hpp"
#include "random.hpp"

namespace taylorlab {

struct SelftestConfig {
  std::uint64_t seed = 42;
  std::size_t scale = 4;  // multiplies every case count
};

namespace detail {

struct Property {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  json witness;

  void record(bool ok, const std::function<json()>& w) {
    ++cases;
    if (ok) return;
    if (failures++ == 0) witness = w();
  }
  json to_json() const {
    json j = {{"name", name}, {"cases", cases}, {"failures", failures}};
    if (!witness.is_null()) j["witness"] = witness;
    return j;
  }
};

inline Term first_redex_step(const Term& m, Position& at) {
  std::optional<Position> p = leftmost_outermost_redex(m);
  if (!p) return Term();
  at = *p;
  return beta_step(m, at);
}

}  // namespace detail

inline CheckReport selftest(const SelftestConfig& cfg = {}) {
  detail::Stopwatch clock;
  CheckReport r;
  r.theorem = "selftest";
  r.inputs = {{"seed", cfg.seed}, {"scale", cfg.scale}};
  std::vector<detail::Property> props;
  const std::size_t k = cfg.scale;
  auto rng_for = [&](std::uint64_t salt) { return Rng(cfg.seed * 1000003ULL + salt); };

  {
    detail::Property p{"term_print_parse_roundtrip"};
    Rng rng = rng_for(1);
    for (std::size_t i = 0; i < 500 * k; ++i) {
      Term t = random_term(rng, 1 + rng.below(14));
      std::string s = to_string(t);
      bool ok = false;
      try {
        ok = alpha_eq(parse_term(s), t);
      } catch (const Error&) {
      }
      p.record(ok, [&] { return json{{"term", s}}; });
    }
    props.push_back(p);
  }
  {
    detail::Property p{"rterm_print_parse_roundtrip"};
    Rng rng = rng_for(2);
    for (std::size_t i = 0; i < 500 * k; ++i) {
      RTerm t = random_rterm(rng, 1 + rng.below(16));
      std::string s = to_string(t);
      bool ok = false;
      try {
        ok = parse_rterm(s) == t;
      } catch (const Error&) {
      }
      p.record(ok, [&] { return json{{"rterm", s}}; });
    }
    props.push_back(p);
  }
  {
    detail::Property size{"r_step_decreases_size"};
    detail::Property height{"height_at_most_size"};
    detail::Property empty{"no_min_depth_site_above_height"};
    Rng rng = rng_for(3);
    for (std::size_t i = 0; i < 2000 * k; ++i) {
      RTerm s = random_rterm(rng, 1 + rng.below(20));
      for (const RSite& site : redex_sites(s)) {
        Sum out = r_step(s, site);
        bool ok = true;
        for (const RTerm& a : out) ok = ok && r_size(a) < r_size(s);
        size.record(ok, [&] { return json{{"rterm", to_string(s)}, {"site", to_string(site)}}; });
      }
      height.record(r_height(s) <= r_size(s), [&] { return json{{"rterm", to_string(s)}}; });
      empty.record(min_depth_sites(s, r_height(s) + 1).empty(), [&] { return json{{"rterm", to_string(s)}}; });
    }
    props.push_back(size);
    props.push_back(height);
    props.push_back(empty);
  }
  {
    detail::Property p{"strong_confluence_diamond"};
    Rng rng = rng_for(4);
    for (std::size_t i = 0; i < 300 * k; ++i) {
      RTerm s = random_rterm(rng, 1 + rng.below(12));
      DiamondResult d = check_diamond_detailed(s);
      p.record(d.ok, [&] {
        return json{{"rterm", to_string(s)},
                    {"sites", {to_string(d.failure->first), to_string(d.failure->second)}}};
      });
    }
    props.push_back(p);
  }
  {
    detail::Property strat{"strategies_agree_on_normal_form"};
    detail::Property lin{"normal_form_distributes_over_sums"};
    detail::Property meas{"r_step_decreases_dm_measure"};
    Rng rng = rng_for(5);
    RNormalizer lo(Strategy::LeftmostOutermost), ri(Strategy::RightmostInnermost);
    for (std::size_t i = 0; i < 500 * k; ++i) {
      RTerm s = random_rterm(rng, 1 + rng.below(16));
      RTerm t = random_rterm(rng, 1 + rng.below(16));
      strat.record(lo(s) == ri(s), [&] { return json{{"rterm", to_string(s)}}; });
      Sum both = Sum::from({s, t});
      lin.record(lo(both) == lo(s) + lo(t), [&] { return json{{"sum", detail::sum_json(both)}}; });
      for (const RSite& site : redex_sites(s)) {
        Sum out = r_step(s, site);
        meas.record(dm_less(dm_measure(out), dm_measure(Sum(s))),
                    [&] { return json{{"rterm", to_string(s)}, {"site", to_string(site)}}; });
      }
    }
    props.push_back(strat);
    props.push_back(lin);
    props.push_back(meas);
  }
  {
    detail::Property slice{"slice_members_approximate"};
    detail::Property brute{"approximation_implies_slice_membership"};
    detail::Property head{"head_reduct_approximates_head_step"};
    Rng rng = rng_for(6);
    for (std::size_t i = 0; i < 150 * k; ++i) {
      Term m = random_term(rng, 1 + rng.below(8));
      const std::size_t n = 7;
      Sum sl = enumerate_taylor(m, n);
      std::optional<Term> next;
      if (head_redex_position(m)) next = head_step(m);
      for (const RTerm& s : sl) {
        slice.record(approximates(s, m), [&] { return json{{"term", to_string(m)}, {"rterm", to_string(s)}}; });
        if (next) {
          bool ok = true;
          for (const RTerm& a : hr_step(s)) ok = ok && approximates(a, *next);
          head.record(ok, [&] { return json{{"term", to_string(m)}, {"rterm", to_string(s)}}; });
        }
      }
      for (std::size_t j = 0; j < 20; ++j) {
        RTerm s = random_rterm(rng, 1 + rng.below(n));
        if (!approximates(s, m)) continue;
        brute.record(sl.contains(s) || r_size(s) > n,
                     [&] { return json{{"term", to_string(m)}, {"rterm", to_string(s)}}; });
      }
    }
    props.push_back(slice);
    props.push_back(brute);
    props.push_back(head);
  }
  {
    detail::Property prefix{"bohm_prefix_stable"};
    detail::Property sim{"simulation_on_random_terms"};
    Rng rng = rng_for(7);
    for (std::size_t i = 0; i < 100 * k; ++i) {
      Term m = random_term(rng, 1 + rng.below(10), 0, 25);
      std::size_t d = 1 + rng.below(4);
      Term a = bohm_tree(m, d, 200);
      Term b = bohm_tree(m, d + 1, 200);
      prefix.record(agree_above(a, b, d), [&] { return json{{"term", to_string(m)}, {"depth", d}}; });
      Position at;
      Term next = detail::first_redex_step(m, at);
      if (next.get()) {
        CheckReport c = check_simulation(m, {at}, 6);
        sim.record(c.verdict == Outcome::Pass, [&] { return c.to_json(); });
      }
    }
    props.push_back(prefix);
    props.push_back(sim);
  }

  json list = json::array();
  std::size_t failures = 0;
  for (const detail::Property& p : props) {
    list.push_back(p.to_json());
    failures += p.failures;
    if (p.failures > 0 && r.verdict == Outcome::Pass) r.fail("property " + p.name + " failed", p.witness);
  }
  r.stats = {{"properties", list}, {"failures", failures}};
  r.seconds = clock.seconds();
  return r;
}

}  // namespace taylorlab
