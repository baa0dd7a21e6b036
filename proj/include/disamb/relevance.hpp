#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "disamb/error.hpp"
#include "disamb/evaluate.hpp"
#include "disamb/features.hpp"

namespace disamb {

/// Binary incidence of features across accuracy-ranked subset classifiers.
/// Row i is the i-th best classifier; bit j says whether it used feature j.
struct IncidenceMatrix {
  std::size_t n_features = 0;
  std::vector<std::uint32_t> rows;  // subset bitmasks, best classifier first

  bool at(std::size_t i, std::size_t j) const { return (rows[i] >> j) & 1u; }
  std::size_t n_rows() const { return rows.size(); }
};

/// Area under the cumulative appearance curve of feature j: rows ranked
/// higher contribute to every later prefix, so early appearances score high.
inline double relevance_score(const IncidenceMatrix& m, std::size_t j) {
  double cum_before = 0.0;
  double r = 0.0;
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    const double mij = m.at(i, j) ? 1.0 : 0.0;
    r += cum_before + 0.5 * mij;
    cum_before += mij;
  }
  return r;
}

struct SubsetScore {
  std::uint32_t mask = 0;
  double accuracy = 0.0;
};

struct CaseRelevance {
  std::vector<TopoField> features;
  std::vector<SubsetScore> ranked;  // sorted by decreasing accuracy
  IncidenceMatrix incidence;
  std::vector<double> r;            // per feature
};

namespace detail {

inline int majority_class(const std::vector<int>& labels, int n_classes) {
  std::vector<int> counts(n_classes, 0);
  for (int lab : labels) ++counts[lab];
  int best = 0;
  for (int i = 1; i < n_classes; ++i)
    if (counts[i] > counts[best]) best = i;
  return best;
}

}  // namespace detail

/// Crisp kNN cross-validated accuracy on a feature matrix restricted to the
/// given topological columns; the empty restriction runs a majority-class
/// baseline. Folds come from the seed and are shared across subsets.
class SubsetEvaluator {
 public:
  SubsetEvaluator(const FeatureMatrix& fm, const EvalConfig& cfg, std::uint64_t seed)
      : fm_(fm), cfg_(cfg) {
    const std::size_t n = fm.n_rows();
    n_classes_ = static_cast<int>(fm.entities.size());
    const std::size_t k = std::min(cfg.folds, n);
    fold_ = fold_assignment(fm.labels, n_classes_, k, seed);
    n_folds_ = k;
    for (std::size_t f = 0; f < k; ++f) {
      Fold fd;
      for (std::size_t r = 0; r < n; ++r)
        (fold_[r] == f ? fd.test_rows : fd.train_rows).push_back(r);
      if (fd.test_rows.empty()) continue;
      fd.standardized = fit_transform(fm, fd.train_rows);
      fd.train_labels.reserve(fd.train_rows.size());
      for (auto r : fd.train_rows) fd.train_labels.push_back(fm.labels[r]);
      folds_.push_back(std::move(fd));
    }
  }

  /// Accuracy of the crisp classifier over the topological columns in mask.
  double accuracy_of(std::uint32_t mask) const {
    double gamma_sum = 0.0;
    for (const auto& fd : folds_) {
      long long correct = 0;
      if (mask == 0) {
        const int pred = detail::majority_class(fd.train_labels, n_classes_);
        for (auto r : fd.test_rows)
          if (fm_.labels[r] == pred) ++correct;
      } else {
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < fm_.topo_fields.size(); ++j)
          if ((mask >> j) & 1u) cols.push_back(j);
        Eigen::MatrixXd train_x(fd.train_rows.size(), cols.size());
        for (std::size_t i = 0; i < fd.train_rows.size(); ++i)
          for (std::size_t cj = 0; cj < cols.size(); ++cj)
            train_x(i, cj) = fd.standardized.topo(fd.train_rows[i], cols[cj]);
        const std::size_t kappa_eff =
            std::min(cfg_.kappa, std::max<std::size_t>(1, fd.train_rows.size() - 1));
        for (auto r : fd.test_rows) {
          Eigen::VectorXd q(cols.size());
          for (std::size_t cj = 0; cj < cols.size(); ++cj)
            q(cj) = fd.standardized.topo(r, cols[cj]);
          if (crisp_knn(train_x, fd.train_labels, q, kappa_eff) == fm_.labels[r]) ++correct;
        }
      }
      gamma_sum += static_cast<double>(correct) / static_cast<double>(fd.test_rows.size());
    }
    return gamma_sum / static_cast<double>(folds_.size());
  }

  std::size_t n_folds() const { return folds_.size(); }

 private:
  struct Fold {
    std::vector<std::size_t> train_rows, test_rows;
    std::vector<int> train_labels;
    FeatureMatrix standardized;
  };

  const FeatureMatrix& fm_;
  EvalConfig cfg_;
  int n_classes_ = 0;
  std::vector<std::size_t> fold_;
  std::size_t n_folds_ = 0;
  std::vector<Fold> folds_;
};

/// Evaluate all 2^F subset classifiers of an assembled feature matrix and
/// rank them by decreasing accuracy (ties: fewer features, then lower mask).
inline CaseRelevance enumerate_subsets(const FeatureMatrix& fm, const EvalConfig& cfg,
                                       std::uint64_t seed) {
  const std::size_t f = fm.topo_fields.size();
  if (f > 20)
    throw Error("enumerate_subsets: " + std::to_string(f) +
                " features would need 2^" + std::to_string(f) +
                " classifiers; reduce the feature set (cap 20)");
  SubsetEvaluator evaluator(fm, cfg, seed);
  CaseRelevance cr;
  cr.features = fm.topo_fields;
  const std::uint32_t n_subsets = 1u << f;
  cr.ranked.reserve(n_subsets);
  for (std::uint32_t mask = 0; mask < n_subsets; ++mask)
    cr.ranked.push_back({mask, evaluator.accuracy_of(mask)});
  std::sort(cr.ranked.begin(), cr.ranked.end(), [](const SubsetScore& a, const SubsetScore& b) {
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    const auto pa = std::popcount(a.mask), pb = std::popcount(b.mask);
    if (pa != pb) return pa < pb;
    return a.mask < b.mask;
  });
  cr.incidence.n_features = f;
  cr.incidence.rows.reserve(n_subsets);
  for (const auto& s : cr.ranked) cr.incidence.rows.push_back(s.mask);
  cr.r.resize(f);
  for (std::size_t j = 0; j < f; ++j) cr.r[j] = relevance_score(cr.incidence, j);
  return cr;
}

/// Convenience overload building the features from a case first.
inline CaseRelevance enumerate_subsets(const std::vector<TopoField>& features,
                                       const AmbiguousCase& kase, const CollabNetwork& net,
                                       const EvalConfig& cfg, std::uint64_t seed) {
  auto fm = build_features(net, kase, features, cfg.path_mode);
  return enumerate_subsets(fm, cfg, seed);
}

struct FeatureRanking {
  std::vector<TopoField> features;
  std::vector<double> geometric_mean;   // per feature
  std::vector<std::size_t> order;       // feature indices, best first
};

/// Aggregate per-case relevance scores by decreasing geometric mean.
inline FeatureRanking rank_features(const std::vector<TopoField>& features,
                                    const std::vector<std::vector<double>>& per_case_r) {
  if (per_case_r.empty()) throw Error("rank_features: no cases");
  const std::size_t f = features.size();
  for (const auto& r : per_case_r)
    if (r.size() != f) throw Error("rank_features: inconsistent feature counts across cases");
  FeatureRanking out;
  out.features = features;
  out.geometric_mean.resize(f);
  for (std::size_t j = 0; j < f; ++j) {
    double log_sum = 0.0;
    for (const auto& r : per_case_r) {
      if (!(r[j] > 0.0)) throw Error("rank_features: nonpositive relevance score");
      log_sum += std::log(r[j]);
    }
    out.geometric_mean[j] = std::exp(log_sum / static_cast<double>(per_case_r.size()));
  }
  out.order.resize(f);
  for (std::size_t j = 0; j < f; ++j) out.order[j] = j;
  std::sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
    if (out.geometric_mean[a] != out.geometric_mean[b])
      return out.geometric_mean[a] > out.geometric_mean[b];
    return a < b;
  });
  return out;
}

/// Crisp kNN accuracy on the raw collaborative vectors alone.
inline double collaborative_crisp_accuracy(const AmbiguousCase& kase, const CollabNetwork& net,
                                           const EvalConfig& cfg, std::uint64_t seed) {
  auto fm = build_features(net, kase, {}, cfg.path_mode);
  const std::size_t n = fm.n_rows();
  const int c = static_cast<int>(kase.class_count);
  const std::size_t k = std::min(cfg.folds, n);
  const auto fold = fold_assignment(fm.labels, c, k, seed);
  double gamma_sum = 0.0;
  std::size_t n_folds = 0;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t r = 0; r < n; ++r)
      (fold[r] == f ? test_rows : train_rows).push_back(r);
    if (test_rows.empty()) continue;
    Eigen::MatrixXd train_x(train_rows.size(), fm.collaborative.cols());
    std::vector<int> train_labels(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      train_x.row(i) = fm.collaborative.row(train_rows[i]);
      train_labels[i] = fm.labels[train_rows[i]];
    }
    const std::size_t kappa_eff =
        std::min(cfg.kappa, std::max<std::size_t>(1, train_rows.size() - 1));
    long long correct = 0;
    for (auto r : test_rows)
      if (crisp_knn(train_x, train_labels, fm.collaborative.row(r).transpose(), kappa_eff) ==
          fm.labels[r])
        ++correct;
    gamma_sum += static_cast<double>(correct) / static_cast<double>(test_rows.size());
    ++n_folds;
  }
  return gamma_sum / static_cast<double>(n_folds);
}

/// Keep the cases whose collaborative crisp accuracy falls below threshold.
/// A threshold >= 1 keeps everything, <= 0 keeps nothing.
inline std::vector<AmbiguousCase> select_hard_cases(const std::vector<AmbiguousCase>& cases,
                                                    const std::vector<PaperRecord>& corpus,
                                                    const EvalConfig& cfg, double threshold,
                                                    std::uint64_t seed) {
  std::vector<AmbiguousCase> kept;
  if (threshold <= 0.0) return kept;
  for (const auto& kase : cases) {
    if (threshold >= 1.0) {
      kept.push_back(kase);
      continue;
    }
    auto net = build_network(corpus, kase.alias);
    if (collaborative_crisp_accuracy(kase, net, cfg, seed) < threshold) kept.push_back(kase);
  }
  return kept;
}

/// Table-style report: one row per feature ordered by final rank, one r
/// column per case, then the geometric mean and the rank.
inline void write_relevance_csv(const FeatureRanking& ranking,
                                const std::vector<std::string>& case_names,
                                const std::vector<std::vector<double>>& per_case_r,
                                std::ostream& out) {
  out << "feature";
  for (const auto& name : case_names) out << ",r_" << name;
  out << ",geometric_mean,rank\n";
  for (std::size_t pos = 0; pos < ranking.order.size(); ++pos) {
    const std::size_t j = ranking.order[pos];
    out << topo_field_name(ranking.features[j]);
    for (const auto& r : per_case_r) out << ',' << format_double(r[j]);
    out << ',' << format_double(ranking.geometric_mean[j]) << ',' << (pos + 1) << '\n';
  }
}

}  // namespace disamb
