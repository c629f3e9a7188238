#include "tacsearch/features.hpp"

#include <set>

namespace tacs {

namespace {

const char* sort_feature(Sort s) { return s == Sort::nat ? "ty:nat" : "ty:list"; }

// Returns the masked print of t while collecting features of every node.
std::string walk(const Term& t, Sort expected, std::set<std::string>& out) {
  if (t.var) {
    out.insert("v:" + t.head);
    out.insert(sort_feature(expected));
    out.insert("s:V");
    return "V";
  }
  const SymbolInfo* info = find_symbol(t.head);
  out.insert("c:" + t.head);
  out.insert(sort_feature(info->result));
  std::string masked = t.head;
  if (!t.args.empty()) {
    masked += '(';
    for (size_t i = 0; i < t.args.size(); ++i) {
      if (i) masked += ',';
      masked += walk(t.args[i], info->arg_sorts[i], out);
    }
    masked += ')';
  }
  out.insert("s:" + masked);
  return masked;
}

Sort equation_sort(const Equation& e) {
  if (!e.lhs.var) return find_symbol(e.lhs.head)->result;
  if (!e.rhs.var) return find_symbol(e.rhs.head)->result;
  return Sort::nat;
}

void equation_features(const Equation& e, std::set<std::string>& out) {
  Sort root = equation_sort(e);
  walk(e.lhs, root, out);
  walk(e.rhs, root, out);
}

FeatureSet to_sorted(const std::set<std::string>& s) { return {s.begin(), s.end()}; }

}  // namespace

FeatureSet extract_term_features(const Term& t) {
  std::set<std::string> out;
  walk(t, Sort::nat, out);
  return to_sorted(out);
}

FeatureSet extract_goal_features(const Goal& g) {
  std::set<std::string> tagged;
  for (const auto& h : g.hyps) {
    std::set<std::string> raw;
    equation_features(h, raw);
    for (const auto& f : raw) tagged.insert("asm:" + f);
  }
  std::set<std::string> raw;
  equation_features(g.concl, raw);
  for (const auto& f : raw) tagged.insert("concl:" + f);
  return to_sorted(tagged);
}

FeatureSet extract_goal_list_features(std::span<const Goal> goals) {
  std::set<std::string> out;
  for (const auto& g : goals) {
    FeatureSet fs = extract_goal_features(g);
    out.insert(fs.begin(), fs.end());
  }
  return to_sorted(out);
}

}  // namespace tacs
