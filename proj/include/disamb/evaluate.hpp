#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "disamb/classify.hpp"
#include "disamb/error.hpp"
#include "disamb/features.hpp"
#include "disamb/graph.hpp"
#include "disamb/rng.hpp"
#include "disamb/util.hpp"

namespace disamb {

/// Prediction counts: z(i, j) = times true class i was classified as j.
/// Rectangular when phantom predicted classes are tracked.
struct ConfusionMatrix {
  std::size_t n_rows = 0, n_cols = 0;
  std::vector<long long> z;

  ConfusionMatrix() = default;
  ConfusionMatrix(std::size_t rows, std::size_t cols)
      : n_rows(rows), n_cols(cols), z(rows * cols, 0) {}

  long long& at(std::size_t i, std::size_t j) { return z[i * n_cols + j]; }
  long long at(std::size_t i, std::size_t j) const { return z[i * n_cols + j]; }

  long long total() const { return std::accumulate(z.begin(), z.end(), 0LL); }

  void add(const ConfusionMatrix& other) {
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += other.z[i];
  }
};

/// Diagonal mass over total instances.
inline double accuracy(const ConfusionMatrix& z) {
  const long long total = z.total();
  if (z.z.empty() || total == 0) throw Error("accuracy: empty confusion matrix");
  long long diag = 0;
  for (std::size_t i = 0; i < std::min(z.n_rows, z.n_cols); ++i) diag += z.at(i, i);
  return static_cast<double>(diag) / static_cast<double>(total);
}

/// Mass assigned to phantom identities: true index < n_true (0-based),
/// predicted index >= n_true.
inline long long splitting_error(const ConfusionMatrix& z, std::size_t n_true) {
  long long s = 0;
  for (std::size_t i = 0; i < std::min(n_true, z.n_rows); ++i)
    for (std::size_t j = n_true; j < z.n_cols; ++j) s += z.at(i, j);
  return s;
}

struct EvalConfig {
  std::size_t kappa = 5;
  double m = 2.0;
  std::size_t folds = 10;
  double ridge_eps = 1e-6;
  std::vector<TopoField> topo_fields = default_topo_fields();
  PathMode path_mode = PathMode::hops;
};

/// Stratified fold assignment: per class, members are shuffled and dealt onto
/// a fold counter that runs across classes, so per-class and total fold sizes
/// both differ by at most one.
inline std::vector<std::size_t> fold_assignment(const std::vector<int>& labels, int n_classes,
                                                std::size_t k, std::uint64_t seed) {
  if (k < 1) throw Error("fold_assignment: need at least one fold");
  rng::Engine eng(seed);
  std::vector<std::size_t> fold(labels.size(), 0);
  std::size_t ptr = 0;
  for (int c = 0; c < n_classes; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t r = 0; r < labels.size(); ++r)
      if (labels[r] == c) members.push_back(r);
    rng::shuffle(members, eng);
    for (auto r : members) fold[r] = ptr++ % k;
  }
  return fold;
}

/// Lambda-independent per-persona state of one cross-validation run: the
/// collaborative and topological membership vectors of every test point,
/// under folds fixed by the seed. Scoring at any lambda is then a pure
/// combination step, which keeps the whole grid comparable.
struct CaseEvaluation {
  struct Point {
    std::size_t row = 0;
    std::size_t fold = 0;
    int true_label = 0;
    Eigen::VectorXd u_collab;  // length class_count, sums to 1
    Eigen::VectorXd u_topo;
  };

  std::size_t class_count = 0;
  std::size_t n_folds = 0;
  std::vector<Point> points;   // one per persona, in row order
  bool degenerate = false;     // some class has a single persona
  std::size_t n_isolated = 0;
};

inline CaseEvaluation prepare_case_evaluation(const AmbiguousCase& kase, const CollabNetwork& net,
                                              const EvalConfig& cfg, std::uint64_t seed) {
  if (cfg.folds < 2) throw Error("cross_validate: need at least 2 folds");
  auto fm = build_features(net, kase, cfg.topo_fields, cfg.path_mode);
  const std::size_t n = fm.n_rows();
  const int c = static_cast<int>(kase.class_count);
  const std::size_t k = std::min(cfg.folds, n);

  CaseEvaluation ev;
  ev.class_count = kase.class_count;
  ev.n_folds = k;
  ev.n_isolated = fm.n_isolated();
  {
    std::vector<std::size_t> class_sizes(c, 0);
    for (int lab : fm.labels) ++class_sizes[lab];
    ev.degenerate = std::any_of(class_sizes.begin(), class_sizes.end(),
                                [](std::size_t s) { return s == 1; });
  }

  const auto fold = fold_assignment(fm.labels, c, k, seed);

  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t r = 0; r < n; ++r)
      (fold[r] == f ? test_rows : train_rows).push_back(r);
    if (test_rows.empty()) continue;

    auto std_fm = fit_transform(fm, train_rows);

    // Classes present in this training part; memberships are trained over
    // those and embedded back into the global class vector.
    std::vector<int> global_of_local;
    std::vector<int> local_of_global(c, -1);
    for (auto r : train_rows) {
      int g = fm.labels[r];
      if (local_of_global[g] < 0) {
        local_of_global[g] = static_cast<int>(global_of_local.size());
        global_of_local.push_back(g);
      }
    }
    const int c_local = static_cast<int>(global_of_local.size());

    Eigen::MatrixXd collab_train(train_rows.size(), fm.collaborative.cols());
    Eigen::MatrixXd topo_train(train_rows.size(), std_fm.topo.cols());
    std::vector<int> labels_local(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      collab_train.row(i) = fm.collaborative.row(train_rows[i]);
      topo_train.row(i) = std_fm.topo.row(train_rows[i]);
      labels_local[i] = local_of_global[fm.labels[train_rows[i]]];
    }

    MembershipConfig collab_cfg{cfg.ridge_eps, CovariancePolicy::identity_when_singular, 1e-12};
    MembershipConfig topo_cfg{cfg.ridge_eps, CovariancePolicy::ridge, 1e-12};
    auto mm_collab = train_memberships(collab_train, labels_local, c_local, collab_cfg);
    auto mm_topo = train_memberships(topo_train, labels_local, c_local, topo_cfg);

    const std::size_t kappa_eff =
        std::min(cfg.kappa, std::max<std::size_t>(1, train_rows.size() - 1));

    for (auto r : test_rows) {
      CaseEvaluation::Point pt;
      pt.row = r;
      pt.fold = f;
      pt.true_label = fm.labels[r];
      auto u_c_local = fuzzy_membership(collab_train, mm_collab,
                                        fm.collaborative.row(r).transpose(), kappa_eff, cfg.m);
      auto u_t_local = fuzzy_membership(topo_train, mm_topo, std_fm.topo.row(r).transpose(),
                                        kappa_eff, cfg.m);
      pt.u_collab = Eigen::VectorXd::Zero(c);
      pt.u_topo = Eigen::VectorXd::Zero(c);
      for (int i = 0; i < c_local; ++i) {
        pt.u_collab(global_of_local[i]) = u_c_local(i);
        pt.u_topo(global_of_local[i]) = u_t_local(i);
      }
      ev.points.push_back(std::move(pt));
    }
  }
  std::sort(ev.points.begin(), ev.points.end(),
            [](const auto& a, const auto& b) { return a.row < b.row; });
  return ev;
}

struct CvResult {
  double gamma = 0.0;        // mean of per-fold accuracy rates
  ConfusionMatrix confusion; // aggregated over folds
  bool degenerate = false;
};

inline CvResult score_at_lambda(const CaseEvaluation& ev, double lambda) {
  const std::size_t c = ev.class_count;
  std::vector<ConfusionMatrix> per_fold(ev.n_folds, ConfusionMatrix(c, c));
  for (const auto& pt : ev.points) {
    const auto u = hybrid_membership(pt.u_collab, pt.u_topo, lambda);
    const int pred = decide(u);
    ++per_fold[pt.fold].at(pt.true_label, pred);
  }
  CvResult res;
  res.degenerate = ev.degenerate;
  res.confusion = ConfusionMatrix(c, c);
  double gamma_sum = 0.0;
  std::size_t n_folds = 0;
  for (const auto& zf : per_fold) {
    if (zf.total() == 0) continue;
    gamma_sum += accuracy(zf);
    ++n_folds;
    res.confusion.add(zf);
  }
  res.gamma = gamma_sum / static_cast<double>(n_folds);
  return res;
}

/// One seeded stratified k-fold cross-validation of the hybrid classifier.
inline CvResult cross_validate(const AmbiguousCase& kase, const CollabNetwork& net,
                               const EvalConfig& cfg, double lambda, std::uint64_t seed) {
  return score_at_lambda(prepare_case_evaluation(kase, net, cfg, seed), lambda);
}

struct SweepResult {
  std::string alias;
  std::size_t class_count = 0;
  std::size_t n_personas = 0;
  std::vector<double> lambda_grid;
  std::vector<double> gamma_per_lambda;
  double gamma_c = 0.0;      // at lambda = 0
  double gamma_t = 0.0;      // at lambda = 1
  double gamma_h_max = 0.0;
  double lambda_star = 0.0;  // lower-middle grid point of the largest tied run
  std::vector<double> tied_set;
  std::pair<double, double> tied_interval{0.0, 0.0};
  long long epsilon_s = 0;
  bool degenerate = false;
  std::size_t n_isolated = 0;
  std::uint64_t seed = 0;
};

/// Evaluate the hybrid accuracy over the whole lambda grid with folds fixed
/// by the seed.
inline SweepResult lambda_sweep(const AmbiguousCase& kase, const CollabNetwork& net,
                                const EvalConfig& cfg, double grid_step, std::uint64_t seed) {
  const double steps_real = 1.0 / grid_step;
  const auto n_steps = static_cast<std::size_t>(std::llround(steps_real));
  if (n_steps < 1 || std::abs(static_cast<double>(n_steps) * grid_step - 1.0) > 1e-9)
    throw Error("lambda_sweep: grid_step must divide 1 evenly");

  auto ev = prepare_case_evaluation(kase, net, cfg, seed);

  SweepResult sr;
  sr.alias = kase.alias;
  sr.class_count = kase.class_count;
  sr.n_personas = kase.personas.size();
  sr.degenerate = ev.degenerate;
  sr.n_isolated = ev.n_isolated;
  sr.seed = seed;

  std::vector<ConfusionMatrix> confusions;
  for (std::size_t i = 0; i <= n_steps; ++i) {
    const double lambda = static_cast<double>(i) / static_cast<double>(n_steps);
    auto res = score_at_lambda(ev, lambda);
    sr.lambda_grid.push_back(lambda);
    sr.gamma_per_lambda.push_back(res.gamma);
    confusions.push_back(std::move(res.confusion));
  }
  sr.gamma_c = sr.gamma_per_lambda.front();
  sr.gamma_t = sr.gamma_per_lambda.back();
  sr.gamma_h_max = *std::max_element(sr.gamma_per_lambda.begin(), sr.gamma_per_lambda.end());

  constexpr double tie_eps = 1e-12;
  std::vector<std::size_t> tied_idx;
  for (std::size_t i = 0; i < sr.gamma_per_lambda.size(); ++i)
    if (sr.gamma_per_lambda[i] >= sr.gamma_h_max - tie_eps) {
      tied_idx.push_back(i);
      sr.tied_set.push_back(sr.lambda_grid[i]);
    }

  // Largest contiguous run of tied grid points; equal lengths go to the
  // lower-lambda run, and lambda* is the run's lower-middle grid point.
  std::size_t best_start = 0, best_len = 0;
  std::size_t run_start = 0;
  for (std::size_t i = 0; i < tied_idx.size(); ++i) {
    if (i > 0 && tied_idx[i] != tied_idx[i - 1] + 1) run_start = i;
    const std::size_t len = i - run_start + 1;
    if (len > best_len) {
      best_len = len;
      best_start = run_start;
    }
  }
  const std::size_t lo = tied_idx[best_start];
  const std::size_t hi = tied_idx[best_start + best_len - 1];
  sr.tied_interval = {sr.lambda_grid[lo], sr.lambda_grid[hi]};
  const std::size_t star_idx = tied_idx[best_start + (best_len - 1) / 2];
  sr.lambda_star = sr.lambda_grid[star_idx];
  sr.epsilon_s = splitting_error(confusions[star_idx], sr.class_count);
  return sr;
}

// ---------------------------------------------------------------------------
// Report writers

inline void write_sweep_csv(const SweepResult& sr, std::ostream& out) {
  out << "lambda,gamma_h\n";
  for (std::size_t i = 0; i < sr.lambda_grid.size(); ++i)
    out << format_double(sr.lambda_grid[i]) << ',' << format_double(sr.gamma_per_lambda[i])
        << '\n';
}

inline nlohmann::ordered_json summary_json(const SweepResult& sr) {
  nlohmann::ordered_json j;
  j["alias"] = sr.alias;
  j["c"] = sr.class_count;
  j["n_personas"] = sr.n_personas;
  j["gamma_c"] = sr.gamma_c;
  j["gamma_t"] = sr.gamma_t;
  j["gamma_h_max"] = sr.gamma_h_max;
  j["lambda_star"] = sr.lambda_star;
  j["tied_interval"] = {sr.tied_interval.first, sr.tied_interval.second};
  j["epsilon_s"] = sr.epsilon_s;
  j["n_isolated_personas"] = sr.n_isolated;
  j["degenerate"] = sr.degenerate;
  j["seed"] = sr.seed;
  j["rng"] = rng::kAlgorithmId;
  return j;
}

}  // namespace disamb
