#include "tacsearch/theory.hpp"

namespace tacs {

size_t TheoremDb::add(Theorem t) {
  size_t idx = thms_.size();
  by_qualified_.emplace(t.qualified(), idx);
  by_name_[t.name].push_back(idx);
  thms_.push_back(std::move(t));
  return idx;
}

std::optional<size_t> TheoremDb::find_qualified(const std::string& theory,
                                                const std::string& name) const {
  auto it = by_qualified_.find(theory + "." + name);
  if (it == by_qualified_.end()) return std::nullopt;
  return it->second;
}

const std::vector<size_t>& TheoremDb::named(const std::string& name) const {
  static const std::vector<size_t> empty;
  auto it = by_name_.find(name);
  return it == by_name_.end() ? empty : it->second;
}

std::optional<size_t> TheoremScope::find_qualified(const std::string& theory,
                                                   const std::string& name) const {
  if (!db) return std::nullopt;
  auto idx = db->find_qualified(theory, name);
  if (idx && *idx < count) return idx;
  return std::nullopt;
}

std::vector<size_t> TheoremScope::find_named(const std::string& name) const {
  std::vector<size_t> out;
  if (!db) return out;
  for (size_t i : db->named(name))
    if (i < count) out.push_back(i);
  return out;
}

namespace {
Equation eq(const std::string& l, const std::string& r) {
  return {parse_term(l), parse_term(r)};
}
}  // namespace

const std::vector<Equation>& base_simpset(const std::string& theory) {
  static const std::vector<Equation> nat_rules = {
      eq("add(0,y)", "y"),
      eq("add(S(x),y)", "S(add(x,y))"),
      eq("mul(0,y)", "0"),
      eq("mul(S(x),y)", "add(y,mul(x,y))"),
  };
  static const std::vector<Equation> list_rules = {
      eq("app(nil,l)", "l"),
      eq("app(cons(h,t),l)", "cons(h,app(t,l))"),
      eq("len(nil)", "0"),
      eq("len(cons(h,t))", "S(len(t))"),
      eq("rev(nil)", "nil"),
      eq("rev(cons(h,t))", "app(rev(t),cons(h,nil))"),
  };
  static const std::vector<Equation> none;
  if (theory == "nat") return nat_rules;
  if (theory == "list") return list_rules;
  return none;
}

}  // namespace tacs
