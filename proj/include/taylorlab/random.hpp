// Random λ-terms and resource terms for property checks.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "resource.hpp"
#include "syntax.hpp"

namespace taylorlab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : gen_() % n; }
  bool chance(unsigned percent) { return below(100) < percent; }

 private:
  std::mt19937_64 gen_;
};

namespace detail {
inline const std::vector<std::string>& pool() {
  static const std::vector<std::string> names{"a", "b", "c"};
  return names;
}
inline const std::vector<std::string>& hints() {
  static const std::vector<std::string> names{"x", "y", "z", "u", "v"};
  return names;
}
}  // namespace detail

/// A random λ-term with about `size` constructors; variables are bound with
/// high probability when a binder is in scope.
inline Term random_term(Rng& rng, std::size_t size, std::uint32_t depth = 0, unsigned free_percent = 15) {
  auto leaf = [&]() -> Term {
    if (depth > 0 && !rng.chance(free_percent)) return make::bound(static_cast<std::uint32_t>(rng.below(depth)));
    return make::var(detail::pool()[rng.below(detail::pool().size())]);
  };
  if (size <= 1) return leaf();
  if (size == 2 || rng.chance(35)) {
    return make::lam(detail::hints()[depth % detail::hints().size()], random_term(rng, size - 1, depth + 1, free_percent));
  }
  std::size_t left = 1 + rng.below(size - 2);
  return make::app(random_term(rng, left, depth, free_percent), random_term(rng, size - 1 - left, depth, free_percent));
}

/// A random resource term of size at most `budget`, biased towards redexes
/// whose monomial matches the degree of the bound variable.
inline RTerm random_rterm(Rng& rng, std::size_t budget, std::uint32_t depth = 0) {
  auto leaf = [&]() -> RTerm {
    if (depth > 0 && !rng.chance(20)) return rmake::bound(static_cast<std::uint32_t>(rng.below(depth)));
    return rmake::var(detail::pool()[rng.below(detail::pool().size())]);
  };
  if (budget <= 1) return leaf();
  if (budget == 2 || rng.chance(25)) {
    return rmake::lam(detail::hints()[depth % detail::hints().size()], random_rterm(rng, budget - 1, depth + 1));
  }
  if (rng.chance(15)) return leaf();
  // application: function, then a monomial filling what is left
  RTerm fun;
  if (budget >= 4 && rng.chance(60)) {
    std::size_t fb = 2 + rng.below((budget - 2) / 2 + 1);
    fb = std::min(fb, budget - 1);
    fun = rmake::lam(detail::hints()[depth % detail::hints().size()], random_rterm(rng, fb - 1, depth + 1));
  } else {
    fun = random_rterm(rng, 1 + rng.below(std::max<std::size_t>(1, budget - 2)), depth);
  }
  std::size_t left = budget > fun->size + 1 ? budget - fun->size - 1 : 0;
  std::size_t want = rng.below(4);
  if (fun.kind() == RKind::Lam && rng.chance(75)) want = deg_bound(fun->left, 0);
  Monomial bag;
  for (std::size_t i = 0; i < want && left >= 1; ++i) {
    std::size_t eb = 1 + rng.below(std::max<std::size_t>(1, left / (want - i)));
    RTerm e = random_rterm(rng, std::min(eb, left), depth);
    if (e->size > left) break;
    left -= e->size;
    bag.push_back(e);
  }
  return rmake::app(fun, std::move(bag));
}

}  // namespace taylorlab
