// Pretty-printing of terms in the ASCII surface syntax.
#pragma once

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "syntax.hpp"

namespace taylorlab {

namespace detail {

inline void collect_names(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Free: out.insert(t->name); break;
    case TermKind::Lam: collect_names(t->left, out); break;
    case TermKind::App: collect_names(t->left, out); collect_names(t->right, out); break;
    case TermKind::Ref:
      if (t->defs) {
        const Equation& eq = t->defs->equations[t->index];
        out.insert(eq.name);
      }
      for (const Term& a : t->args) collect_names(a, out);
      break;
    default: break;
  }
}

class Printer {
 public:
  Printer(std::set<std::string> reserved, const RecDefs* defs, std::vector<std::string> outer)
      : reserved_(std::move(reserved)), defs_(defs), scope_(std::move(outer)) {}

  std::string print(const Term& t) {
    std::ostringstream os;
    emit(os, t, Ctx::Top);
    return os.str();
  }

 private:
  enum class Ctx { Top, Fun, Arg };

  std::string fresh(const std::string& hint) {
    std::string base = hint.empty() ? "x" : hint;
    std::string n = base;
    while (reserved_.count(n) || std::find(scope_.begin(), scope_.end(), n) != scope_.end()) n += '\'';
    return n;
  }

  std::string name_of(std::uint32_t index) const {
    if (index < scope_.size()) return scope_[scope_.size() - 1 - index];
    return "#" + std::to_string(index - scope_.size());
  }

  const Equation* equation(const Term& t) const {
    if (t->defs) return &t->defs->equations[t->index];
    if (defs_ && t->index < defs_->equations.size()) return &defs_->equations[t->index];
    return nullptr;
  }

  void emit(std::ostream& os, const Term& t, Ctx ctx) {
    switch (t.kind()) {
      case TermKind::Bound: os << name_of(t->index); return;
      case TermKind::Free: os << t->name; return;
      case TermKind::Bottom: os << "_|_"; return;
      case TermKind::Hole: os << "*"; return;
      case TermKind::Cut: os << "\xE2\x97\xBB"; return;
      case TermKind::Ref: emit_ref(os, t); return;
      case TermKind::Lam: {
        if (ctx != Ctx::Top) os << '(';
        std::string n = fresh(t->name);
        os << '\\' << n << ". ";
        scope_.push_back(n);
        emit(os, t->left, Ctx::Top);
        scope_.pop_back();
        if (ctx != Ctx::Top) os << ')';
        return;
      }
      case TermKind::App: {
        if (ctx == Ctx::Arg) os << '(';
        emit(os, t->left, Ctx::Fun);
        os << ' ';
        emit(os, t->right, Ctx::Arg);
        if (ctx == Ctx::Arg) os << ')';
        return;
      }
    }
  }

  void emit_ref(std::ostream& os, const Term& t) {
    const Equation* eq = equation(t);
    if (!eq) { os << "#ref" << t->index; return; }
    os << eq->name;
    bool plain = true;
    for (std::size_t i = 0; i < t->args.size() && plain; ++i) {
      const Term& a = t->args[i];
      plain = (a.kind() == TermKind::Bound && name_of(a->index) == eq->params[i]) ||
              (a.kind() == TermKind::Free && a->name == eq->params[i]);
    }
    if (plain) return;
    os << '{';
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      if (i) os << ", ";
      os << eq->params[i] << ":=";
      emit(os, t->args[i], Ctx::Top);
    }
    os << '}';
  }

  std::set<std::string> reserved_;
  const RecDefs* defs_;
  std::vector<std::string> scope_;
};

}  // namespace detail

/// ASCII rendering; Cut markers print as "◻".
inline std::string to_string(const Term& t) {
  std::set<std::string> names;
  detail::collect_names(t, names);
  return detail::Printer(std::move(names), nullptr, {}).print(t);
}

inline std::ostream& operator<<(std::ostream& os, const Term& t) { return os << to_string(t); }

namespace detail {
inline void collect_tables(const Term& t, std::vector<const RecDefs*>& out) {
  switch (t.kind()) {
    case TermKind::Lam: collect_tables(t->left, out); break;
    case TermKind::App: collect_tables(t->left, out); collect_tables(t->right, out); break;
    case TermKind::Ref:
      if (t->defs && std::find(out.begin(), out.end(), t->defs.get()) == out.end()) out.push_back(t->defs.get());
      for (const Term& a : t->args) collect_tables(a, out);
      break;
    default: break;
  }
}
}  // namespace detail

/// Renders a rational term as a `let rec` program when it refers to a single
/// equation table; otherwise falls back to `to_string`.
inline std::string to_program(const Term& t) {
  std::vector<const RecDefs*> tables;
  detail::collect_tables(t, tables);
  if (tables.size() != 1) return to_string(t);
  const RecDefs& defs = *tables.front();
  std::set<std::string> names;
  detail::collect_names(t, names);
  for (const Equation& eq : defs.equations) names.insert(eq.name);
  std::string out = "let rec ";
  for (std::size_t i = 0; i < defs.equations.size(); ++i) {
    const Equation& eq = defs.equations[i];
    if (i) out += " and ";
    // parameters are the outermost indices of the body, params[0] at index 0
    std::vector<std::string> outer(eq.params.rbegin(), eq.params.rend());
    std::set<std::string> reserved = names;
    out += eq.name + " = " + detail::Printer(reserved, &defs, outer).print(eq.body);
  }
  return out + " in " + detail::Printer(names, nullptr, {}).print(t);
}

}  // namespace taylorlab
