#pragma once

// Seeded random generators shared by the property tests. Everything is
// driven by an explicit mt19937_64 so failures reproduce exactly.

#include <algorithm>
#include <set>
#include <string>
#include <vector>
#include <random>

#include "tacsearch/feature_db.hpp"
#include "tacsearch/goal.hpp"

namespace tacs::testgen {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Variable pools are disjoint per sort so generated goals stay well-sorted.
inline Term random_term(Rng& rng, Sort sort, int depth) {
  static const char* nat_vars[] = {"x", "y", "z", "w"};
  static const char* list_vars[] = {"a", "b", "l", "t"};
  if (depth <= 0 || pick(rng, 0, 3) == 0) {
    int i = pick(rng, 0, 4);
    if (sort == Sort::nat) return i == 4 ? Term::apply("0") : Term::variable(nat_vars[i]);
    return i == 4 ? Term::apply("nil") : Term::variable(list_vars[i]);
  }
  if (sort == Sort::nat) {
    switch (pick(rng, 0, 3)) {
      case 0: return Term::apply("S", {random_term(rng, Sort::nat, depth - 1)});
      case 1:
        return Term::apply("add", {random_term(rng, Sort::nat, depth - 1),
                                   random_term(rng, Sort::nat, depth - 1)});
      case 2:
        return Term::apply("mul", {random_term(rng, Sort::nat, depth - 1),
                                   random_term(rng, Sort::nat, depth - 1)});
      default: return Term::apply("len", {random_term(rng, Sort::list, depth - 1)});
    }
  }
  switch (pick(rng, 0, 2)) {
    case 0:
      return Term::apply("cons", {random_term(rng, Sort::nat, depth - 1),
                                  random_term(rng, Sort::list, depth - 1)});
    case 1:
      return Term::apply("app", {random_term(rng, Sort::list, depth - 1),
                                 random_term(rng, Sort::list, depth - 1)});
    default: return Term::apply("rev", {random_term(rng, Sort::list, depth - 1)});
  }
}

inline Equation random_equation(Rng& rng, int depth = 3) {
  Sort s = pick(rng, 0, 1) ? Sort::nat : Sort::list;
  return {random_term(rng, s, depth), random_term(rng, s, depth)};
}

inline Goal random_goal(Rng& rng, int max_hyps = 2, int depth = 3) {
  Goal g;
  int nh = pick(rng, 0, max_hyps);
  for (int i = 0; i < nh; ++i) g.hyps.push_back(random_equation(rng, depth - 1));
  g.concl = random_equation(rng, depth);
  return g;
}

// A bijective renaming of the goal's variables onto fresh names, with the
// assignment order shuffled.
inline Goal rename_bijective(Rng& rng, const Goal& g) {
  std::vector<std::string> vars = goal_vars(g);
  std::vector<int> slots(vars.size());
  for (size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<int>(i);
  std::shuffle(slots.begin(), slots.end(), rng);
  Subst sub;
  for (size_t i = 0; i < vars.size(); ++i)
    sub[vars[i]] = Term::variable("r" + std::to_string(slots[i]));
  return substitute(g, sub);
}

inline FeatureSet random_features(Rng& rng, int pool, int max_count) {
  std::set<std::string> fs;
  int n = pick(rng, 1, max_count);
  for (int i = 0; i < n; ++i) fs.insert("f" + std::to_string(pick(rng, 0, pool - 1)));
  return FeatureSet(fs.begin(), fs.end());
}

}  // namespace tacs::testgen
