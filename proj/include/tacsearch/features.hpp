#pragma once

#include <span>
#include <string>
#include <vector>

#include "tacsearch/goal.hpp"

namespace tacs {

// A feature set is a sorted, duplicate-free list of feature strings.
// Term features are namespaced by kind so that, e.g., the constant "0" and
// the masked subterm "0" stay distinct:
//   c:<symbol>   symbol occurring in the term
//   v:<name>     variable occurring in the term
//   s:<print>    subterm printed with every variable masked as V
//   ty:nat/list  sort of each symbol occurrence (variables use the sort of
//                their position; unconstrained positions default to nat)
// Goal features additionally carry an asm:/concl: prefix; goal-list
// features are the plain union of the member goals' feature sets.
using FeatureSet = std::vector<std::string>;

FeatureSet extract_term_features(const Term&);
FeatureSet extract_goal_features(const Goal&);
FeatureSet extract_goal_list_features(std::span<const Goal>);

}  // namespace tacs
