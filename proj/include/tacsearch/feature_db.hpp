#pragma once

#include <map>
#include <string>
#include <vector>

#include "tacsearch/features.hpp"

namespace tacs {

enum class SimMeasure { Sim1, Sim2 };

struct Scored {
  int index;
  double score;
  bool operator==(const Scored&) const = default;
};
using ScoredPredictions = std::vector<Scored>;

// Raw weight kernel: (ln(n/df))^6.
double idf6(double n, double df);

// An insertion-ordered collection of feature sets with document-frequency
// bookkeeping. One database per prediction dataset (tactics / theorems /
// goal lists). Writes happen single-threaded during knowledge recording;
// reads are pure and may run concurrently once frozen.
class FeatureDb {
 public:
  int add(std::string id, FeatureSet);
  size_t size() const { return entries_.size(); }
  const std::string& id(int i) const { return entries_[i].id; }
  const FeatureSet& features(int i) const { return entries_[i].feats; }

  int df(const std::string& feature) const;
  // TF-IDF weight of a feature; term frequencies are degenerate (every
  // feature occurs once per object), so this is idf6(N, df). Unknown
  // features weigh 0.
  double tfidf(const std::string& feature) const;

  // Sum of shared-feature weights.
  double sim1(const FeatureSet&, const FeatureSet&) const;
  // sim1 normalized by ln(e + |f0| + |f1|); used for goal-list scoring.
  double sim2(const FeatureSet&, const FeatureSet&) const;
  double sim(SimMeasure, const FeatureSet&, const FeatureSet&) const;

  // Top-k entries by similarity to the query, ties broken by insertion
  // order. k larger than the database returns everything.
  ScoredPredictions predict(const FeatureSet& query, size_t k, SimMeasure) const;

 private:
  struct Entry {
    std::string id;
    FeatureSet feats;
  };
  std::vector<Entry> entries_;
  std::map<std::string, int> df_;
};

}  // namespace tacs
