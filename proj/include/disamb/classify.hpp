#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "disamb/error.hpp"

namespace disamb {

/// How per-class covariances are made invertible. `ridge` shrinks toward a
/// scaled identity; `identity_when_singular` falls back to the identity
/// matrix outright when the class covariance is rank deficient by
/// construction (n_i - 1 < dimension), which is the collaborative-space case.
enum class CovariancePolicy { ridge, identity_when_singular };

struct MembershipConfig {
  double ridge_eps = 1e-6;
  CovariancePolicy policy = CovariancePolicy::ridge;
  double zero_dist_floor = 1e-12;
};

/// Fuzzy membership of every training object in every class; columns sum to 1.
struct MembershipMatrix {
  Eigen::MatrixXd u;  // classes x objects

  std::size_t class_count() const { return static_cast<std::size_t>(u.rows()); }
  std::size_t object_count() const { return static_cast<std::size_t>(u.cols()); }
};

/// Per-class centroids and (inverse) covariances backing the Mahalanobis
/// similarity.
class ClassStats {
 public:
  ClassStats() = default;

  ClassStats(const Eigen::MatrixXd& x, const std::vector<int>& labels, int n_classes,
             const MembershipConfig& cfg)
      : cfg_(cfg) {
    const auto dim = x.cols();
    centroids_.setZero(n_classes, dim);
    counts_.assign(n_classes, 0);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      centroids_.row(labels[r]) += x.row(r);
      ++counts_[labels[r]];
    }
    for (int i = 0; i < n_classes; ++i) {
      if (counts_[i] == 0) throw Error("ClassStats: class " + std::to_string(i) + " is empty");
      centroids_.row(i) /= static_cast<double>(counts_[i]);
    }

    identity_.assign(n_classes, false);
    regularized_.assign(n_classes, false);
    solvers_.resize(n_classes);
    for (int i = 0; i < n_classes; ++i) {
      const std::size_t ni = counts_[i];
      const bool rank_deficient = ni < 2 || (cfg.policy == CovariancePolicy::identity_when_singular &&
                                             static_cast<Eigen::Index>(ni) - 1 < dim);
      if (rank_deficient) {
        identity_[i] = true;
        continue;
      }
      Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim, dim);
      for (Eigen::Index r = 0; r < x.rows(); ++r) {
        if (labels[r] != i) continue;
        Eigen::VectorXd d = x.row(r).transpose() - centroids_.row(i).transpose();
        s += d * d.transpose();
      }
      s /= static_cast<double>(ni);  // population covariance
      const double tr = s.trace();
      if (!(tr > 0.0)) {
        identity_[i] = true;  // all class points coincide
        continue;
      }
      if (cfg.ridge_eps > 0.0) {
        s += cfg.ridge_eps * (tr / static_cast<double>(dim)) *
             Eigen::MatrixXd::Identity(dim, dim);
        regularized_[i] = true;
      }
      solvers_[i].compute(s);
      // Paranoia check: a usable factorization must give finite solves.
      Eigen::VectorXd probe = solvers_[i].solve(Eigen::VectorXd::Ones(dim));
      if (!probe.allFinite()) identity_[i] = true;
    }
  }

  int class_count() const { return static_cast<int>(counts_.size()); }
  std::size_t class_size(int i) const { return counts_[i]; }
  const Eigen::MatrixXd& centroids() const { return centroids_; }
  bool regularized(int i) const { return regularized_[i]; }
  bool identity_covariance(int i) const { return identity_[i]; }

  /// Mahalanobis distance from x to class i's centroid.
  double mahalanobis(int i, const Eigen::VectorXd& x) const {
    Eigen::VectorXd d = x - centroids_.row(i).transpose();
    double q;
    if (identity_[i]) {
      q = d.squaredNorm();
    } else {
      q = d.dot(solvers_[i].solve(d));
    }
    return std::sqrt(std::max(q, 0.0));
  }

  /// Inverse Mahalanobis distance, floored near the centroid.
  double similarity(int i, const Eigen::VectorXd& x) const {
    return 1.0 / std::max(mahalanobis(i, x), cfg_.zero_dist_floor);
  }

 private:
  MembershipConfig cfg_;
  Eigen::MatrixXd centroids_;
  std::vector<std::size_t> counts_;
  std::vector<Eigen::LDLT<Eigen::MatrixXd>> solvers_;
  std::vector<bool> identity_;
  std::vector<bool> regularized_;
};

/// Membership strength of every training object: similarity to each class,
/// normalized per object.
inline MembershipMatrix train_memberships(const Eigen::MatrixXd& x, const std::vector<int>& labels,
                                          int n_classes, const MembershipConfig& cfg = {}) {
  ClassStats stats(x, labels, n_classes, cfg);
  MembershipMatrix mm;
  mm.u.setZero(n_classes, x.rows());
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    double total = 0.0;
    for (int i = 0; i < n_classes; ++i) {
      const double s = stats.similarity(i, x.row(j).transpose());
      mm.u(i, j) = s;
      total += s;
    }
    mm.u.col(j) /= total;
  }
  return mm;
}

namespace detail {

/// Indices of the kappa nearest training rows, ordered by (distance, index).
inline std::vector<Eigen::Index> nearest_rows(const Eigen::MatrixXd& x,
                                              const Eigen::VectorXd& query, std::size_t kappa) {
  std::vector<std::pair<double, Eigen::Index>> d(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    d[r] = {(x.row(r).transpose() - query).norm(), r};
  const std::size_t k = std::min<std::size_t>(kappa, d.size());
  std::partial_sort(d.begin(), d.begin() + k, d.end());
  std::vector<Eigen::Index> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = d[i].second;
  return out;
}

}  // namespace detail

/// Crisp kappa-NN: majority class among the kappa nearest; a tie goes to the
/// class of the nearest object belonging to one of the tied classes.
inline int crisp_knn(const Eigen::MatrixXd& x, const std::vector<int>& labels,
                     const Eigen::VectorXd& query, std::size_t kappa) {
  if (x.rows() == 0) throw Error("crisp_knn: empty training set");
  if (kappa < 1) throw Error("crisp_knn: kappa must be >= 1");
  auto nearest = detail::nearest_rows(x, query, kappa);
  int max_label = *std::max_element(labels.begin(), labels.end());
  std::vector<int> votes(max_label + 1, 0);
  for (auto r : nearest) ++votes[labels[r]];
  const int best = *std::max_element(votes.begin(), votes.end());
  int winner = -1;
  bool tie = false;
  for (int i = 0; i <= max_label; ++i) {
    if (votes[i] == best) {
      if (winner < 0) winner = i;
      else tie = true;
    }
  }
  if (!tie) return winner;
  for (auto r : nearest)
    if (votes[labels[r]] == best) return labels[r];
  return winner;  // unreachable
}

/// Fuzzy membership of a query: distance-weighted combination of the kappa
/// nearest training objects' membership columns. Exact-zero distances take
/// the limit (average of the coincident neighbors' columns).
inline Eigen::VectorXd fuzzy_membership(const Eigen::MatrixXd& x, const MembershipMatrix& mm,
                                        const Eigen::VectorXd& query, std::size_t kappa,
                                        double m) {
  if (x.rows() == 0) throw Error("fuzzy_membership: empty training set");
  if (kappa < 1) throw Error("fuzzy_membership: kappa must be >= 1");
  if (!(m > 1.0)) throw Error("fuzzy_membership: m must be > 1");
  auto nearest = detail::nearest_rows(x, query, kappa);

  std::vector<double> dist(nearest.size());
  double d_min_pos = 0.0;
  bool any_zero = false;
  for (std::size_t i = 0; i < nearest.size(); ++i) {
    dist[i] = (x.row(nearest[i]).transpose() - query).norm();
    if (dist[i] == 0.0) any_zero = true;
    else if (d_min_pos == 0.0 || dist[i] < d_min_pos) d_min_pos = dist[i];
  }

  Eigen::VectorXd u = Eigen::VectorXd::Zero(mm.u.rows());
  if (any_zero) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < nearest.size(); ++i)
      if (dist[i] == 0.0) {
        u += mm.u.col(nearest[i]);
        ++count;
      }
    return u / static_cast<double>(count);
  }

  // Weights are scaled by the nearest distance so the largest term is 1;
  // the normalization cancels the scale.
  const double expo = 2.0 / (1.0 - m);
  double denom = 0.0;
  for (std::size_t i = 0; i < nearest.size(); ++i) {
    const double t = std::pow(dist[i] / d_min_pos, expo);
    u += t * mm.u.col(nearest[i]);
    denom += t;
  }
  return u / denom;
}

/// Convex combination of the two strategies' membership vectors; lambda
/// weighs the topological side.
inline Eigen::VectorXd hybrid_membership(const Eigen::VectorXd& u_collab,
                                         const Eigen::VectorXd& u_topo, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw Error("hybrid_membership: lambda must lie in [0, 1]");
  if (u_collab.size() != u_topo.size())
    throw Error("hybrid_membership: vector lengths differ");
  return lambda * u_topo + (1.0 - lambda) * u_collab;
}

/// Argmax class; ties go to the lowest index.
inline int decide(const Eigen::VectorXd& u) {
  if (u.size() == 0) throw Error("decide: empty membership vector");
  int best = 0;
  for (int i = 1; i < u.size(); ++i)
    if (u(i) > u(best)) best = i;
  return best;
}

}  // namespace disamb
