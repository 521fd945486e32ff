// Resource terms, canonical monomials and qualitative finite sums.
#pragma once

#include <algorithm>
#include <cctype>
#include <iterator>
#include <cstdint>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "parser.hpp"
#include "syntax.hpp"

namespace taylorlab {

enum class RKind : std::uint8_t { Bound, Free, Lam, App, Hole };

struct RNode;

class RTerm {
 public:
  RTerm() = default;
  explicit RTerm(std::shared_ptr<const RNode> n) : node_(std::move(n)) {}
  const RNode& operator*() const { return *node_; }
  const RNode* operator->() const { return node_.get(); }
  const RNode* get() const { return node_.get(); }
  explicit operator bool() const { return static_cast<bool>(node_); }
  inline RKind kind() const;

 private:
  std::shared_ptr<const RNode> node_;
};

/// A finite multiset of resource terms, kept sorted in canonical order.
using Monomial = std::vector<RTerm>;

struct RNode {
  RKind kind = RKind::Hole;
  std::uint32_t index = 0;  // Bound
  std::string name;         // Free: name; Lam: binder hint
  RTerm left;               // Lam: body; App: function
  Monomial bag;             // App: argument multiset
  std::size_t hash = 0;
  std::uint32_t size = 0;
  std::uint32_t height = 0;
  std::uint32_t loose = 0;
  std::uint32_t holes = 0;
};

inline RKind RTerm::kind() const { return node_->kind; }

/// Canonical total order: constructor tag, then children; monomials are
/// compared element by element, a proper prefix being smaller.
inline int compare(const RTerm& a, const RTerm& b);

inline int compare(const Monomial& a, const Monomial& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = compare(a[i], b[i])) return c;
  return a.size() < b.size() ? -1 : a.size() > b.size() ? 1 : 0;
}

inline int compare(const RTerm& a, const RTerm& b) {
  if (a.get() == b.get()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case RKind::Bound: return a->index < b->index ? -1 : a->index > b->index ? 1 : 0;
    case RKind::Free: return a->name.compare(b->name) < 0 ? -1 : a->name == b->name ? 0 : 1;
    case RKind::Lam: return compare(a->left, b->left);
    case RKind::App: {
      if (int c = compare(a->left, b->left)) return c;
      return compare(a->bag, b->bag);
    }
    case RKind::Hole: return 0;
  }
  return 0;
}

inline bool operator==(const RTerm& a, const RTerm& b) {
  return a.get() == b.get() || (a->hash == b->hash && compare(a, b) == 0);
}
inline bool operator!=(const RTerm& a, const RTerm& b) { return !(a == b); }
inline bool operator<(const RTerm& a, const RTerm& b) { return compare(a, b) < 0; }

struct RLess {
  bool operator()(const RTerm& a, const RTerm& b) const { return compare(a, b) < 0; }
};
struct RHash {
  std::size_t operator()(const RTerm& t) const { return t->hash; }
};
struct REq {
  bool operator()(const RTerm& a, const RTerm& b) const { return a == b; }
};

inline std::uint32_t bag_size(const Monomial& m) {
  std::uint32_t s = 1;
  for (const RTerm& t : m) s += t->size;
  return s;
}

inline std::uint32_t bag_height(const Monomial& m) {
  std::uint32_t h = 0;
  for (const RTerm& t : m) h = std::max(h, t->height);
  return 1 + h;
}

namespace rmake {

inline RTerm node(RNode n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 0x9ddfea08eb382d69ULL + 7;
  switch (n.kind) {
    case RKind::Bound:
      h = detail::mix(h, n.index);
      n.size = 1;
      n.loose = n.index + 1;
      break;
    case RKind::Free:
      h = detail::mix(h, std::hash<std::string>{}(n.name));
      n.size = 1;
      break;
    case RKind::Hole:
      n.size = 1;
      n.holes = 1;
      break;
    case RKind::Lam:
      h = detail::mix(h, n.left->hash);
      n.size = 1 + n.left->size;
      n.height = n.left->height;
      n.loose = n.left->loose > 0 ? n.left->loose - 1 : 0;
      n.holes = n.left->holes;
      break;
    case RKind::App:
      std::sort(n.bag.begin(), n.bag.end(), RLess{});
      h = detail::mix(h, n.left->hash);
      n.size = n.left->size + bag_size(n.bag);
      n.height = std::max(n.left->height, bag_height(n.bag));
      n.loose = n.left->loose;
      n.holes = n.left->holes;
      for (const RTerm& t : n.bag) {
        h = detail::mix(h, t->hash);
        n.loose = std::max(n.loose, t->loose);
        n.holes += t->holes;
      }
      h = detail::mix(h, n.bag.size());
      break;
  }
  n.hash = h;
  return RTerm(std::make_shared<const RNode>(std::move(n)));
}

inline RTerm bound(std::uint32_t i) {
  RNode n;
  n.kind = RKind::Bound;
  n.index = i;
  return node(std::move(n));
}
inline RTerm var(std::string name) {
  RNode n;
  n.kind = RKind::Free;
  n.name = std::move(name);
  return node(std::move(n));
}
inline RTerm hole() {
  static const RTerm h = [] { RNode n; n.kind = RKind::Hole; return node(std::move(n)); }();
  return h;
}
inline RTerm lam(std::string hint, RTerm body) {
  RNode n;
  n.kind = RKind::Lam;
  n.name = std::move(hint);
  n.left = std::move(body);
  return node(std::move(n));
}
inline RTerm app(RTerm fun, Monomial bag) {
  RNode n;
  n.kind = RKind::App;
  n.left = std::move(fun);
  n.bag = std::move(bag);
  return node(std::move(n));
}

}  // namespace rmake

// ---------------------------------------------------------------------------
// Finite sums

/// A finite set of resource terms (s + s = s), sorted canonically.
class Sum {
 public:
  Sum() = default;
  explicit Sum(RTerm t) { terms_.push_back(std::move(t)); }
  static Sum from(std::vector<RTerm> ts) {
    Sum s;
    s.terms_ = std::move(ts);
    s.normalize();
    return s;
  }

  const std::vector<RTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }
  const RTerm& operator[](std::size_t i) const { return terms_[i]; }

  bool contains(const RTerm& t) const { return std::binary_search(terms_.begin(), terms_.end(), t, RLess{}); }

  Sum& operator+=(const Sum& o) {
    if (o.empty()) return *this;
    std::vector<RTerm> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::set_union(terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end(), std::back_inserter(out), RLess{});
    terms_ = std::move(out);
    return *this;
  }
  Sum& operator+=(const RTerm& t) {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), t, RLess{});
    if (it == terms_.end() || compare(*it, t) != 0) terms_.insert(it, t);
    return *this;
  }
  friend Sum operator+(Sum a, const Sum& b) { return a += b; }

  bool subset_of(const Sum& o) const {
    return std::includes(o.terms_.begin(), o.terms_.end(), terms_.begin(), terms_.end(), RLess{});
  }
  friend bool operator==(const Sum& a, const Sum& b) {
    return a.terms_.size() == b.terms_.size() && std::equal(a.begin(), a.end(), b.begin());
  }
  friend bool operator!=(const Sum& a, const Sum& b) { return !(a == b); }

 private:
  void normalize() {
    std::sort(terms_.begin(), terms_.end(), RLess{});
    terms_.erase(std::unique(terms_.begin(), terms_.end(), [](const RTerm& a, const RTerm& b) { return a == b; }),
                 terms_.end());
  }
  std::vector<RTerm> terms_;
};

// ---------------------------------------------------------------------------
// Measures

inline std::size_t r_size(const RTerm& s) { return s->size; }
inline std::size_t r_size(const Monomial& m) { return bag_size(m); }
inline std::size_t r_size(const Sum& s) {
  std::size_t m = 0;
  for (const RTerm& t : s) m = std::max<std::size_t>(m, t->size);
  return m;
}

inline std::size_t r_height(const RTerm& s) { return s->height; }
inline std::size_t r_height(const Monomial& m) { return bag_height(m); }
inline std::size_t r_height(const Sum& s) {
  std::size_t m = 0;
  for (const RTerm& t : s) m = std::max<std::size_t>(m, t->height);
  return m;
}

/// Free occurrences of the variable named x.
inline std::size_t deg(const RTerm& s, std::string_view x) {
  switch (s.kind()) {
    case RKind::Free: return s->name == x ? 1 : 0;
    case RKind::Lam: return deg(s->left, x);
    case RKind::App: {
      std::size_t n = deg(s->left, x);
      for (const RTerm& t : s->bag) n += deg(t, x);
      return n;
    }
    default: return 0;
  }
}

/// Occurrences of de Bruijn index i (seen from the root of s).
inline std::size_t deg_bound(const RTerm& s, std::uint32_t i) {
  if (s->loose <= i) return 0;
  switch (s.kind()) {
    case RKind::Bound: return s->index == i ? 1 : 0;
    case RKind::Lam: return deg_bound(s->left, i + 1);
    case RKind::App: {
      std::size_t n = deg_bound(s->left, i);
      for (const RTerm& t : s->bag) n += deg_bound(t, i);
      return n;
    }
    default: return 0;
  }
}

inline std::size_t deg_hole(const RTerm& s) { return s->holes; }

/// Membership in the d-positive terms: no empty monomial at multiset depth < d.
inline bool is_d_positive(const RTerm& s, std::size_t d) {
  if (d == 0) return true;
  switch (s.kind()) {
    case RKind::Lam: return is_d_positive(s->left, d);
    case RKind::App:
      if (s->bag.empty() || !is_d_positive(s->left, d)) return false;
      for (const RTerm& t : s->bag)
        if (!is_d_positive(t, d - 1)) return false;
      return true;
    default: return true;
  }
}

// ---------------------------------------------------------------------------
// Index manipulation

inline RTerm r_shift(const RTerm& t, int delta, std::uint32_t cutoff = 0) {
  if (delta == 0 || t->loose <= cutoff) return t;
  switch (t.kind()) {
    case RKind::Bound: return rmake::bound(static_cast<std::uint32_t>(static_cast<int>(t->index) + delta));
    case RKind::Lam: return rmake::lam(t->name, r_shift(t->left, delta, cutoff + 1));
    case RKind::App: {
      Monomial bag;
      bag.reserve(t->bag.size());
      for (const RTerm& u : t->bag) bag.push_back(r_shift(u, delta, cutoff));
      return rmake::app(r_shift(t->left, delta, cutoff), std::move(bag));
    }
    default: return t;
  }
}

/// Binds free names matching enclosing binder hints (innermost last).
inline RTerm r_graft(const RTerm& t, const std::vector<std::string>& binders, std::uint32_t depth = 0) {
  if (binders.empty()) return t;
  auto n = static_cast<std::uint32_t>(binders.size());
  switch (t.kind()) {
    case RKind::Bound: return t->index >= depth ? rmake::bound(t->index + n) : t;
    case RKind::Free:
      for (std::size_t i = binders.size(); i-- > 0;)
        if (binders[i] == t->name) return rmake::bound(depth + static_cast<std::uint32_t>(binders.size() - 1 - i));
      return t;
    case RKind::Lam: return rmake::lam(t->name, r_graft(t->left, binders, depth + 1));
    case RKind::App: {
      Monomial bag;
      for (const RTerm& u : t->bag) bag.push_back(r_graft(u, binders, depth));
      return rmake::app(r_graft(t->left, binders, depth), std::move(bag));
    }
    default: return t;
  }
}

// ---------------------------------------------------------------------------
// Linear substitution

namespace detail {

enum class Target { Binder, Name, Hole };

// Replaces the occurrences of the target, in traversal order, by the given
// elements (one each). In Binder mode the substituted abstraction disappears,
// so higher indices are decremented.
struct LinearFill {
  Target target;
  std::string_view name;
  const std::vector<RTerm>* elems;
  std::size_t next = 0;
  std::vector<std::string> binders;

  bool untouched(const RTerm& t, std::uint32_t depth) const {
    switch (target) {
      case Target::Binder: return t->loose <= depth;
      case Target::Hole: return t->holes == 0;
      case Target::Name: return false;
    }
    return false;
  }

  RTerm go(const RTerm& t, std::uint32_t depth) {
    if (untouched(t, depth)) return t;
    switch (t.kind()) {
      case RKind::Bound:
        if (target == Target::Binder) {
          if (t->index == depth) return r_shift((*elems)[next++], static_cast<int>(depth));
          if (t->index > depth) return rmake::bound(t->index - 1);
        }
        return t;
      case RKind::Free:
        if (target == Target::Name && t->name == name) return r_shift((*elems)[next++], static_cast<int>(depth));
        return t;
      case RKind::Hole:
        if (target == Target::Hole) return r_graft((*elems)[next++], binders);
        return t;
      case RKind::Lam: {
        binders.push_back(t->name);
        RTerm b = go(t->left, depth + 1);
        binders.pop_back();
        return rmake::lam(t->name, std::move(b));
      }
      case RKind::App: {
        RTerm f = go(t->left, depth);
        Monomial bag;
        bag.reserve(t->bag.size());
        for (const RTerm& u : t->bag) bag.push_back(go(u, depth));
        return rmake::app(std::move(f), std::move(bag));
      }
    }
    return t;
  }
};

inline Sum linear_subst(const RTerm& s, Target target, std::string_view name, std::size_t degree, Monomial elems) {
  if (degree != elems.size()) return {};
  std::sort(elems.begin(), elems.end(), RLess{});
  std::vector<RTerm> out;
  do {
    LinearFill f{target, name, &elems, 0, {}};
    out.push_back(f.go(s, 0));
  } while (std::next_permutation(elems.begin(), elems.end(), RLess{}));
  return Sum::from(std::move(out));
}

}  // namespace detail

/// s⟨t̄/x⟩ for a free variable named x.
inline Sum r_subst(const RTerm& s, std::string_view x, const Monomial& t) {
  return detail::linear_subst(s, detail::Target::Name, x, deg(s, x), t);
}

/// u⟨t̄/x⟩ where x is the binder of λx.u (index 0 in u).
inline Sum r_contract(const RTerm& body, const Monomial& t) {
  return detail::linear_subst(body, detail::Target::Binder, {}, deg_bound(body, 0), t);
}

/// c⟨t̄/*⟩: linear substitution of the holes; binders above a hole capture.
inline Sum r_context_fill(const RTerm& c, const Monomial& t) {
  return detail::linear_subst(c, detail::Target::Hole, {}, deg_hole(c), t);
}

// ---------------------------------------------------------------------------
// Printing and parsing

namespace detail {

inline void collect_rnames(const RTerm& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case RKind::Free: out.insert(t->name); break;
    case RKind::Lam: collect_rnames(t->left, out); break;
    case RKind::App:
      collect_rnames(t->left, out);
      for (const RTerm& u : t->bag) collect_rnames(u, out);
      break;
    default: break;
  }
}

class RPrinter {
 public:
  explicit RPrinter(std::set<std::string> reserved) : reserved_(std::move(reserved)) {}

  void emit(std::ostream& os, const RTerm& t, bool top) {
    switch (t.kind()) {
      case RKind::Bound:
        if (t->index < scope_.size()) os << scope_[scope_.size() - 1 - t->index];
        else os << '#' << (t->index - scope_.size());
        return;
      case RKind::Free: os << t->name; return;
      case RKind::Hole: os << '*'; return;
      case RKind::Lam: {
        if (!top) os << '(';
        std::string n = t->name.empty() ? "x" : t->name;
        while (reserved_.count(n) || std::find(scope_.begin(), scope_.end(), n) != scope_.end()) n += '\'';
        os << '\\' << n << ". ";
        scope_.push_back(n);
        emit(os, t->left, true);
        scope_.pop_back();
        if (!top) os << ')';
        return;
      }
      case RKind::App:
        os << '<';
        emit(os, t->left, true);
        os << '>';
        emit_bag(os, t->bag);
        return;
    }
  }

  void emit_bag(std::ostream& os, const Monomial& m) {
    if (m.empty()) {
      os << '1';
      return;
    }
    os << '[';
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i) os << ", ";
      emit(os, m[i], true);
    }
    os << ']';
  }

 private:
  std::set<std::string> reserved_;
  std::vector<std::string> scope_;
};

}  // namespace detail

inline std::string to_string(const RTerm& t) {
  std::set<std::string> names;
  detail::collect_rnames(t, names);
  std::ostringstream os;
  detail::RPrinter(std::move(names)).emit(os, t, true);
  return os.str();
}

inline std::string to_string(const Monomial& m) {
  std::set<std::string> names;
  for (const RTerm& t : m) detail::collect_rnames(t, names);
  std::ostringstream os;
  detail::RPrinter(std::move(names)).emit_bag(os, m);
  return os.str();
}

inline std::string to_string(const Sum& s) {
  if (s.empty()) return "0";
  std::string out;
  for (const RTerm& t : s) {
    if (!out.empty()) out += " + ";
    out += to_string(t);
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const RTerm& t) { return os << to_string(t); }
inline std::ostream& operator<<(std::ostream& os, const Sum& s) { return os << to_string(s); }

namespace detail {

class RParser {
 public:
  explicit RParser(std::string_view s) : s_(s) {}

  Sum sum() {
    skip();
    if (peek() == '0' && !ident_char_at(pos_ + 1)) {
      ++pos_;
      finish();
      return {};
    }
    std::vector<RTerm> ts{term()};
    while (eat('+')) ts.push_back(term());
    finish();
    return Sum::from(std::move(ts));
  }

  RTerm single() {
    RTerm t = term();
    finish();
    return t;
  }

  Monomial monomial_only() {
    Monomial m = monomial();
    finish();
    std::sort(m.begin(), m.end(), RLess{});
    return m;
  }

 private:
  void finish() {
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool lit(std::string_view l) {
    skip();
    if (s_.substr(pos_, l.size()) != l) return false;
    pos_ += l.size();
    return true;
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  bool ident_char_at(std::size_t i) const {
    return i < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i])) || s_[i] == '_' || s_[i] == '\'');
  }
  std::string ident() {
    skip();
    std::size_t b = pos_;
    if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      while (ident_char_at(pos_)) ++pos_;
    }
    if (b == pos_) fail("expected identifier");
    return std::string(s_.substr(b, pos_ - b));
  }

  RTerm term() {
    if (lit("\\") || lit("\xCE\xBB")) {
      std::vector<std::string> names;
      do names.push_back(ident());
      while (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_');
      if (!eat('.')) fail("expected '.'");
      for (const auto& n : names) scope_.push_back(n);
      RTerm body = term();
      for (std::size_t k = names.size(); k-- > 0;) {
        scope_.pop_back();
        body = rmake::lam(names[k], body);
      }
      return body;
    }
    return atom();
  }

  RTerm atom() {
    if (eat('(')) {
      RTerm t = term();
      if (!eat(')')) fail("expected ')'");
      return t;
    }
    if (eat('*')) return rmake::hole();
    if (lit("<") || lit("\xE2\x9F\xA8")) {
      RTerm f = term();
      if (!(lit(">") || lit("\xE2\x9F\xA9"))) fail("expected '>'");
      RTerm t = rmake::app(f, monomial());
      for (char c = peek(); c == '[' || (c == '1' && !ident_char_at(pos_ + 1)); c = peek()) t = rmake::app(t, monomial());
      return t;
    }
    std::string n = ident();
    for (std::size_t k = scope_.size(); k-- > 0;)
      if (scope_[k] == n) return rmake::bound(static_cast<std::uint32_t>(scope_.size() - 1 - k));
    return rmake::var(n);
  }

  Monomial monomial() {
    if (peek() == '1') {
      ++pos_;
      return {};
    }
    if (!eat('[')) fail("expected monomial");
    Monomial m;
    if (eat(']')) return m;
    do m.push_back(term());
    while (eat(','));
    if (!eat(']')) fail("expected ']'");
    return m;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

}  // namespace detail

inline RTerm parse_rterm(std::string_view s) { return detail::RParser(s).single(); }
inline Sum parse_sum(std::string_view s) { return detail::RParser(s).sum(); }
inline Monomial parse_monomial(std::string_view s) { return detail::RParser(s).monomial_only(); }

}  // namespace taylorlab
