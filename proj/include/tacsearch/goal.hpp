#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tacsearch/term.hpp"

namespace tacs {

struct ParseError : std::runtime_error {
  size_t offset, line, col;
  ParseError(const std::string& what, size_t offset, size_t line, size_t col)
      : std::runtime_error(what + " at line " + std::to_string(line) +
                           ", column " + std::to_string(col)),
        offset(offset),
        line(line),
        col(col) {}
};

struct Equation {
  Term lhs, rhs;
  bool operator==(const Equation&) const = default;
};

// A goal is a sequent of equations: hypotheses (ordered) and a conclusion.
// All variables are implicitly universally quantified at goal level.
struct Goal {
  std::vector<Equation> hyps;
  Equation concl;
  bool operator==(const Goal&) const = default;  // syntactic identity
};

Term parse_term(const std::string& text);
Goal parse_goal(const std::string& text);

std::string print_equation(const Equation&);
// Canonical form, e.g. "len(a) = 0 |- app(a,b) = b"; the turnstile is
// always present, hypothesis-free goals print as "|- lhs = rhs".
std::string print_goal(const Goal&);

// Goal equality used everywhere in the system: a variable bijection mapping
// one goal onto the other, hypotheses compared positionally.
bool alpha_equiv(const Goal&, const Goal&);

// Canonical renaming key: two goals are alpha-equivalent iff their keys are
// byte-identical. Variables are renamed v0, v1, ... in first-occurrence
// order (hypotheses before conclusion, left side before right).
std::string alpha_key(const Goal&);

Goal substitute(const Goal&, const Subst&);
std::vector<std::string> goal_vars(const Goal&);

}  // namespace tacs
