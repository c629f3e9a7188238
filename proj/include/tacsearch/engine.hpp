#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "tacsearch/tactic.hpp"
#include "tacsearch/theory.hpp"

namespace tacs {

struct Deadline {
  std::chrono::steady_clock::time_point at;
  bool unlimited = false;

  static Deadline after(double seconds) {
    return {std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(seconds)),
            false};
  }
  static Deadline never() { return {{}, true}; }
  bool expired() const { return !unlimited && std::chrono::steady_clock::now() >= at; }
};

// Interpretation context for a tactic: which theorems references resolve to
// and which built-in rewrite rules are active. Both views are immutable
// while a tactic runs.
struct TacticEnv {
  TheoremScope thms;
  const std::vector<Equation>* simpset = nullptr;
};

struct TacticOutcome {
  enum class Kind { Success, Fail, Timeout };
  Kind kind = Kind::Fail;
  std::vector<Goal> goals;
  std::string reason;

  static TacticOutcome success(std::vector<Goal> gs) {
    return {Kind::Success, std::move(gs), {}};
  }
  static TacticOutcome fail(std::string why) { return {Kind::Fail, {}, std::move(why)}; }
  static TacticOutcome timeout() { return {Kind::Timeout, {}, {}}; }
  bool ok() const { return kind == Kind::Success; }
};

// Hard bounds on the bounded procedures; timeouts are enforced on top.
inline constexpr int kRewriteStepBound = 1000;
inline constexpr int kAutoDepthBound = 4;
inline constexpr int kAutoNodeBudget = 5000;

// Interprets a tactic expression (unit or THEN/THENL compound) on a goal
// under one wall-clock budget. Interruption is cooperative: the deadline is
// polled at every rewrite step and search expansion, so control returns
// promptly after expiry.
TacticOutcome apply_tactic(const TacticExpr&, const Goal&, const TacticEnv&, Deadline);
TacticOutcome apply_tactic(const std::string& code, const Goal&, const TacticEnv&, Deadline);

// Structural execution of a proof script: every unit runs under its own
// wall budget. Returns the remaining goals, or nothing on any failure.
std::optional<std::vector<Goal>> run_script(const TacticExpr&, const Goal&, const TacticEnv&,
                                            double unit_timeout = 1.0);

// True iff the script closes the goal entirely. This is the system's sole
// validation mechanism for proofs.
bool replay_proof(const TacticExpr&, const Goal&, const TacticEnv&, double unit_timeout = 1.0);
bool replay_proof(const std::string& script, const Goal&, const TacticEnv&,
                  double unit_timeout = 1.0);

}  // namespace tacs
