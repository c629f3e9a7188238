#pragma once

#include <string>

#include "tacsearch/engine.hpp"

namespace tacs {

struct SearchTree;

// Per-unit budget for all replay work in this module; generous compared to
// search-time budgets so that emitted proofs replay reliably.
inline constexpr double kReplayUnitTimeout = 1.0;

// Reads a proof script out of a solved search tree: for each solved goal the
// first applied tactic whose child is solved, branches joined with THENL.
// Singleton branch lists collapse to THEN and empty ones disappear.
TacticExpr extract_proof(const SearchTree&);

// Repeatedly replaces a sub-expression `A THEN B` by `B` whenever that has
// the same effect at its position in the replay; unit count never grows.
TacticExpr minimize_length(TacticExpr script, const Goal& conjecture, const TacticEnv& env,
                           double unit_timeout = kReplayUnitTimeout);

// Drops theorem-list elements left to right when removal does not change the
// unit's effect on any goal it is replayed on.
TacticExpr minimize_args(TacticExpr script, const Goal& conjecture, const TacticEnv& env,
                         double unit_timeout = kReplayUnitTimeout);

// Strips theory qualifiers wherever the bare name is unambiguous among
// visible theorems; every strip is gated on an equal-effect replay.
TacticExpr embellish(TacticExpr script, const Goal& conjecture, const TacticEnv& env,
                     double unit_timeout = kReplayUnitTimeout);

}  // namespace tacs
