#include "tacsearch/feature_db.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace tacs {

double idf6(double n, double df) {
  double idf = std::log(n / df);
  return std::pow(idf, 6.0);
}

int FeatureDb::add(std::string id, FeatureSet feats) {
  for (const auto& f : feats) ++df_[f];
  int idx = static_cast<int>(entries_.size());
  entries_.push_back({std::move(id), std::move(feats)});
  return idx;
}

int FeatureDb::df(const std::string& feature) const {
  auto it = df_.find(feature);
  return it == df_.end() ? 0 : it->second;
}

double FeatureDb::tfidf(const std::string& feature) const {
  int d = df(feature);
  if (d == 0) {
#ifndef NDEBUG
    std::fprintf(stderr, "feature_db: weight queried for unknown feature '%s'\n",
                 feature.c_str());
#endif
    return 0.0;  // as if df == N
  }
  return idf6(static_cast<double>(entries_.size()), static_cast<double>(d));
}

double FeatureDb::sim1(const FeatureSet& a, const FeatureSet& b) const {
  double total = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    int cmp = ia->compare(*ib);
    if (cmp == 0) {
      total += tfidf(*ia);
      ++ia;
      ++ib;
    } else if (cmp < 0) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return total;
}

double FeatureDb::sim2(const FeatureSet& a, const FeatureSet& b) const {
  return sim1(a, b) / std::log(std::exp(1.0) + static_cast<double>(a.size()) +
                               static_cast<double>(b.size()));
}

double FeatureDb::sim(SimMeasure m, const FeatureSet& a, const FeatureSet& b) const {
  return m == SimMeasure::Sim1 ? sim1(a, b) : sim2(a, b);
}

ScoredPredictions FeatureDb::predict(const FeatureSet& query, size_t k, SimMeasure m) const {
  std::vector<Scored> scored(entries_.size());
  for (size_t i = 0; i < entries_.size(); ++i)
    scored[i] = {static_cast<int>(i), sim(m, entries_[i].feats, query)};
  size_t take = std::min(k, scored.size());
  auto better = [](const Scored& x, const Scored& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.index < y.index;
  };
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(), better);
  scored.resize(take);
  return scored;
}

}  // namespace tacs
