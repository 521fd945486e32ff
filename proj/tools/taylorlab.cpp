// taylorlab: command-line front end for the λ-calculus, resource calculus and
// Taylor expansion checks.
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "taylorlab/taylorlab.hpp"

using namespace taylorlab;

namespace {

struct RunConfig {
  std::size_t fuel = 1000;
  std::size_t size = 10;
  std::optional<std::size_t> depth;
  std::size_t dmax = 5;
  std::optional<std::size_t> backstop;
  bool json = false;
  std::uint64_t seed = 42;
};

struct UsageError : Error {
  using Error::Error;
};

std::string read_input(const std::string& arg) {
  if (arg != "-") return arg;
  return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
}

Term term_arg(const std::string& arg) { return parse_term(read_input(arg)); }

void emit(const RunConfig& cfg, const json& j, const std::string& text) {
  if (cfg.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

std::string lines(const json& arr) {
  std::string out;
  for (const auto& e : arr) out += e.get<std::string>() + "\n";
  return out;
}

std::string report_text(const CheckReport& r) {
  std::ostringstream os;
  os << r.theorem << ": " << to_string(r.verdict);
  if (!r.reason.empty()) os << " (" << r.reason << ")";
  os << "\n";
  if (!r.witness.is_null()) os << "witness: " << r.witness.dump() << "\n";
  os << "stats: " << r.stats.dump() << "\n";
  os << "time: " << r.seconds << "s\n";
  return os.str();
}

int report(const RunConfig& cfg, const CheckReport& r) {
  emit(cfg, r.to_json(), report_text(r));
  return r.exit_code();
}

// Graphviz rendering of a finite Böhm prefix.
void dot_node(const Term& t, std::vector<std::string>& names, std::size_t& next, std::ostringstream& os) {
  std::size_t id = next++;
  std::string label;
  HeadForm hf = head_form(t);
  if (!hf.binders.empty()) {
    label = "\\\\";
    for (std::size_t i = 0; i < hf.binders.size(); ++i) label += (i ? " " : "") + hf.binders[i];
    label += ". ";
  }
  for (const std::string& b : hf.binders) names.push_back(b);
  switch (hf.head.kind()) {
    case TermKind::Bound: label += names[names.size() - 1 - hf.head->index]; break;
    case TermKind::Free: label += hf.head->name; break;
    case TermKind::Bottom: label += "_|_"; break;
    case TermKind::Cut: label += "◻"; break;
    case TermKind::Hole: label += "*"; break;
    default: label += to_string(hf.head); break;
  }
  os << "  n" << id << " [label=\"" << label << "\"];\n";
  for (const Term& a : hf.args) {
    os << "  n" << id << " -> n" << next << ";\n";
    dot_node(a, names, next, os);
  }
  names.resize(names.size() - hf.binders.size());
}

std::string to_dot(const Term& t) {
  std::ostringstream os;
  os << "digraph bohm {\n";
  std::vector<std::string> names;
  std::size_t next = 0;
  dot_node(t, names, next, os);
  os << "}\n";
  return os.str();
}

json positions_json(const std::vector<Position>& ps) {
  json a = json::array();
  for (const Position& p : ps) a.push_back(p.empty() ? "root" : to_string(p));
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"taylorlab: Taylor expansion and Boehm trees, checked on finite slices"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--fuel", cfg.fuel, "head steps per Boehm node / step limit")->capture_default_str();
  app.add_option("--size", cfg.size, "size bound on resource approximants")->capture_default_str();
  app.add_option("--depth", cfg.depth, "depth bound");
  app.add_option("--dmax", cfg.dmax, "largest depth for norm and equal checks")->capture_default_str();
  app.add_option("--backstop", cfg.backstop, "search bound for backward commutation (default size+8)");
  app.add_flag("--json", cfg.json, "machine-readable output");
  app.add_option("--seed", cfg.seed, "seed for random suites")->capture_default_str();

  int rc = 0;
  std::string term, term2, var, bag;
  std::vector<std::string> at, rest;
  std::size_t steps = 0;
  bool dot = false, trace = false;

  auto* parse = app.add_subcommand("parse", "parse and print a term");
  parse->add_option("term", term, "term, or - for stdin")->required();
  parse->callback([&] {
    Term t = term_arg(term);
    json j = {{"term", term_text(t)}, {"rational", is_rational(t)}};
    if (!is_rational(t)) j["size"] = term_size(t);
    emit(cfg, j, term_text(t) + "\n");
  });

  auto* reduce = app.add_subcommand("reduce", "beta steps at given positions, or normal-order reduction");
  reduce->add_option("term", term)->required();
  reduce->add_option("--at", at, "position of a redex (dotted path, repeatable)");
  reduce->add_option("--steps", steps, "normal-order step limit (default --fuel)");
  reduce->callback([&] {
    Term t = term_arg(term);
    json j = {{"term", term_text(t)}, {"steps", json::array()}};
    std::string text = term_text(t) + "\n";
    auto record = [&](const Position& p, const Term& u) {
      j["steps"].push_back({{"position", p.empty() ? "root" : to_string(p)}, {"term", term_text(u)}});
      text += "-> [" + (p.empty() ? std::string("root") : to_string(p)) + "] " + term_text(u) + "\n";
    };
    if (!at.empty()) {
      for (const std::string& s : at) {
        Position p = parse_position(s);
        t = beta_step(t, p);
        record(p, t);
      }
      j["normal"] = !is_rational(t) && !leftmost_outermost_redex(t);
    } else {
      NormalizeResult nr = beta_normalize(t, steps ? steps : cfg.fuel);
      Term cur = t;
      for (const Position& p : nr.steps) {
        cur = beta_step(cur, p);
        record(p, cur);
      }
      j["normal"] = nr.normal;
      if (!nr.normal) text += is_rational(t) ? "rational term: no finite normal form\n" : "step limit reached\n";
    }
    emit(cfg, j, text);
  });

  auto* head = app.add_subcommand("head", "head reduction with solvability verdict");
  head->add_option("term", term)->required();
  head->callback([&] {
    Term t = term_arg(term);
    HeadResult hr = head_normalize(t, cfg.fuel, true);
    json tr = json::array();
    std::string text;
    for (const Term& u : hr.trace) {
      tr.push_back(term_text(u));
      text += term_text(u) + "\n";
    }
    text += to_string(hr.verdict) + "\n";
    emit(cfg, {{"term", term_text(t)}, {"verdict", to_string(hr.verdict)}, {"solvable", hr.verdict.solvable},
               {"certified_unsolvable", hr.verdict.certified_unsolvable()}, {"steps", hr.verdict.steps},
               {"trace", tr}},
         text);
  });

  auto* bohm = app.add_subcommand("bohm", "depth-bounded Boehm tree");
  bohm->add_option("term", term)->required();
  bohm->add_flag("--dot", dot, "emit Graphviz");
  bohm->callback([&] {
    Term t = term_arg(term);
    std::size_t d = cfg.depth.value_or(cfg.dmax);
    Term bt = bohm_tree(t, d, cfg.fuel);
    if (dot) {
      std::cout << to_dot(bt);
      return;
    }
    emit(cfg, {{"term", term_text(t)}, {"depth", d}, {"fuel", cfg.fuel}, {"bohm", to_string(bt)}}, to_string(bt) + "\n");
  });

  auto* taylor = app.add_subcommand("taylor", "Taylor slice up to --size (and below --depth)");
  taylor->add_option("term", term)->required();
  taylor->callback([&] {
    Term t = term_arg(term);
    json a = detail::sum_json(enumerate_taylor(t, cfg.size, cfg.depth));
    json j = {{"term", term_text(t)}, {"size", cfg.size}};
    if (cfg.depth) j["depth"] = *cfg.depth;
    j["approximants"] = a;
    emit(cfg, j, lines(a));
  });

  auto* nft = app.add_subcommand("nf-taylor", "normal forms of the Taylor slice");
  nft->add_option("term", term)->required();
  nft->callback([&] {
    Term t = term_arg(term);
    Sum slice = enumerate_taylor(t, cfg.size, cfg.depth);
    RNormalizer nf;
    Sum out = nf(slice);
    json a = detail::sum_json(out);
    emit(cfg, {{"term", term_text(t)}, {"size", cfg.size}, {"approximants", slice.size()}, {"normal", a}},
         out.empty() ? "0\n" : lines(a));
  });

  auto* rsubst = app.add_subcommand("rsubst", "linear substitution s<t/x>");
  rsubst->add_option("rterm", term)->required();
  rsubst->add_option("var", var)->required();
  rsubst->add_option("bag", bag, "monomial such as [a, b] or 1")->required();
  rsubst->callback([&] {
    RTerm s = parse_rterm(read_input(term));
    Monomial m = parse_monomial(bag);
    Sum out = r_subst(s, var, m);
    emit(cfg, {{"rterm", to_string(s)}, {"var", var}, {"bag", to_string(m)}, {"result", detail::sum_json(out)}},
         to_string(out) + "\n");
  });

  auto* rnf = app.add_subcommand("rnf", "resource normal form of a sum (leftmost-outermost)");
  rnf->add_option("sum", term)->required();
  rnf->add_flag("--trace", trace, "print each step in text mode");
  rnf->callback([&] {
    Sum s = parse_sum(read_input(term));
    json tr = json::array();
    std::string text;
    Sum cur = s;
    std::size_t n = 0;
    for (; n < cfg.fuel; ++n) {
      std::optional<RTerm> pick;
      std::optional<RSite> site;
      for (const RTerm& a : cur) {
        site = leftmost_outermost_site(a);
        if (site) {
          pick = a;
          break;
        }
      }
      if (!pick) break;
      Sum red = r_step(*pick, *site);
      tr.push_back({{"addend", to_string(*pick)}, {"site", to_string(*site)}, {"reducts", detail::sum_json(red)}});
      if (trace) text += to_string(*pick) + " @" + to_string(*site) + " -> " + to_string(red) + "\n";
      std::vector<RTerm> next;
      for (const RTerm& a : cur)
        if (a != *pick) next.push_back(a);
      for (const RTerm& a : red) next.push_back(a);
      cur = Sum::from(std::move(next));
    }
    bool normal = true;
    for (const RTerm& a : cur) normal = normal && is_r_normal(a);
    text += to_string(cur) + "\n";
    if (!normal) text += "step limit reached\n";
    emit(cfg, {{"sum", detail::sum_json(s)}, {"normal_form", detail::sum_json(cur)}, {"normal", normal}, {"trace", tr}},
         text);
  });

  auto* strat = app.add_subcommand("stratify", "levels M_0 ... M_k with depth-d head normalization");
  strat->add_option("term", term)->required();
  strat->callback([&] {
    Term t = term_arg(term);
    std::size_t d = cfg.depth.value_or(3);
    StratifyResult sr = stratify(t, d, cfg.fuel);
    json lv = json::array(), st = json::array();
    std::string text;
    for (std::size_t i = 0; i < sr.levels.size(); ++i) {
      lv.push_back(term_text(sr.levels[i]));
      text += "M_" + std::to_string(i) + " = " + term_text(sr.levels[i]) + "\n";
    }
    for (std::size_t i = 0; i < sr.steps.size(); ++i) {
      st.push_back(positions_json(sr.steps[i]));
      text += "steps " + std::to_string(i) + ": " + positions_json(sr.steps[i]).dump() + "\n";
    }
    json j = {{"term", term_text(t)}, {"depth", d}, {"fuel", cfg.fuel}, {"levels", lv}, {"steps", st}};
    if (sr.diagnostic) {
      j["diagnostic"] = *sr.diagnostic;
      text += *sr.diagnostic + "\n";
      rc = 2;
    }
    emit(cfg, j, text);
  });

  auto* check = app.add_subcommand("check", "run a finite-slice check");
  check->require_subcommand(1);

  auto* commutation = check->add_subcommand("commutation", "nf of the slice vs Taylor expansion of the Boehm tree");
  commutation->add_option("term", term)->required();
  commutation->callback(
      [&] { rc = report(cfg, check_commutation(term_arg(term), cfg.size, cfg.fuel, cfg.backstop)); });

  auto* chead = check->add_subcommand("head", "head normalization vs nonzero head reduct in the slice");
  chead->add_option("term", term)->required();
  chead->callback([&] { rc = report(cfg, check_head_charac(term_arg(term), cfg.size, cfg.fuel)); });

  auto* norm = check->add_subcommand("norm", "d-positive approximants vs finite Boehm prefixes");
  norm->add_option("term", term)->required();
  norm->callback([&] { rc = report(cfg, check_norm_charac(term_arg(term), cfg.dmax, cfg.size, cfg.fuel)); });

  auto* sim = check->add_subcommand("simulation", "push approximants forward along beta steps");
  sim->add_option("term", term)->required();
  sim->add_option("--at", at, "redex position (repeatable); default normal-order steps");
  sim->add_option("--steps", steps, "number of normal-order steps when --at is absent")->default_val(1);
  sim->callback([&] {
    Term t = term_arg(term);
    std::vector<Position> ps;
    if (!at.empty()) {
      for (const std::string& s : at) ps.push_back(parse_position(s));
    } else {
      ps = beta_normalize(t, steps).steps;
      if (ps.empty()) throw UsageError("term has no redex to simulate");
    }
    rc = report(cfg, check_simulation(t, ps, cfg.size));
  });

  auto* gen = check->add_subcommand("genericity", "C<M> vs C<N> for an unsolvable M");
  gen->add_option("context", term, "context containing *")->required();
  gen->add_option("unsolvable", term2)->required();
  gen->add_option("terms", rest, "terms N")->required();
  gen->callback([&] {
    std::vector<Term> ns;
    for (const std::string& s : rest) ns.push_back(term_arg(s));
    rc = report(cfg, check_genericity(term_arg(term), term_arg(term2), ns, cfg.size, cfg.fuel,
                                      cfg.depth.value_or(cfg.dmax)));
  });

  auto* equal = check->add_subcommand("equal", "Boehm equality through Taylor slices");
  equal->add_option("left", term)->required();
  equal->add_option("right", term2)->required();
  equal->callback(
      [&] { rc = report(cfg, terms_equal_via_taylor(term_arg(term), term_arg(term2), cfg.dmax, cfg.size)); });

  auto* self = app.add_subcommand("selftest", "seeded property suite");
  std::size_t scale = SelftestConfig{}.scale;
  self->add_option("--scale", scale, "case count multiplier")->capture_default_str();
  self->callback([&] { rc = report(cfg, selftest({cfg.seed, scale})); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}
