#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tacsearch/goal.hpp"

namespace tacs {

struct Theorem {
  std::string theory;
  std::string name;
  Goal statement;
  // Fully qualified names referenced by the recorded proof, in order of
  // first appearance.
  std::vector<std::string> deps;

  std::string qualified() const { return theory + "." + name; }
};

class TheoremDb {
 public:
  size_t add(Theorem t);
  size_t size() const { return thms_.size(); }
  const Theorem& at(size_t i) const { return thms_[i]; }
  std::optional<size_t> find_qualified(const std::string& theory, const std::string& name) const;
  const std::vector<size_t>& named(const std::string& name) const;

 private:
  std::vector<Theorem> thms_;
  std::map<std::string, size_t> by_qualified_;
  std::map<std::string, std::vector<size_t>> by_name_;
};

// A chronological window over a theorem database: only entries with index
// < count are visible. Search during re-proving runs under the window that
// existed before the theorem under test was recorded.
struct TheoremScope {
  const TheoremDb* db = nullptr;
  size_t count = 0;

  std::optional<size_t> find_qualified(const std::string& theory, const std::string& name) const;
  std::vector<size_t> find_named(const std::string& name) const;
  const Theorem& at(size_t i) const { return db->at(i); }
};

// Built-in rewrite rules activated when a theory of the given name is
// declared; unknown theories have none.
const std::vector<Equation>& base_simpset(const std::string& theory);

}  // namespace tacs
