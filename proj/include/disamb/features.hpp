#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "disamb/error.hpp"
#include "disamb/graph.hpp"
#include "disamb/measures.hpp"
#include "disamb/util.hpp"

namespace disamb {

/// Per-persona feature rows: the raw collaborative weight vector over merged
/// author columns, and the selected topological measurements. Standardization
/// touches the topological block only; collaborative weights stay raw.
struct FeatureMatrix {
  std::vector<NodeId> rows;             // persona node ids
  std::vector<std::string> paper_ids;   // aligned with rows
  std::vector<int> labels;              // class index per row
  std::vector<std::string> entities;    // class index -> entity name
  std::vector<TopoField> topo_fields;

  Eigen::MatrixXd collaborative;        // rows x merged-author columns, raw weights
  std::vector<NodeId> collab_columns;   // merged author node per column

  Eigen::MatrixXd topo;                 // rows x |topo_fields|
  std::vector<std::uint8_t> topo_avail; // row-major availability mask
  std::vector<std::uint8_t> isolated;   // per row: alone in its component

  bool standardized = false;
  Eigen::VectorXd scaler_mean;          // per topo column, fitted on train rows
  Eigen::VectorXd scaler_std;

  bool avail(std::size_t row, std::size_t col) const {
    return topo_avail[row * topo_fields.size() + col] != 0;
  }

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_isolated() const {
    std::size_t c = 0;
    for (auto f : isolated) c += f;
    return c;
  }
};

/// Assemble raw features for every persona of a case. Personas keep the
/// case's ordering; collaborative columns are the merged author nodes in id
/// order (persona columns are structurally zero and excluded).
inline FeatureMatrix build_features(const CollabNetwork& net, const AmbiguousCase& kase,
                                    const std::vector<TopoField>& topo_fields,
                                    PathMode mode = PathMode::hops) {
  if (kase.personas.empty()) throw Error("build_features: case has no personas");
  FeatureMatrix fm;
  fm.topo_fields = topo_fields;
  fm.entities = kase.entities;
  fm.collab_columns = net.merged_nodes();

  for (const auto& p : kase.personas) {
    auto node = net.persona_node(p.paper_id);
    if (!node)
      throw Error("build_features: persona paper '" + p.paper_id + "' has no node in network");
    fm.rows.push_back(*node);
    fm.paper_ids.push_back(p.paper_id);
    auto cls = std::find(kase.entities.begin(), kase.entities.end(), p.entity);
    fm.labels.push_back(static_cast<int>(cls - kase.entities.begin()));
  }

  const std::size_t n = fm.rows.size();
  const std::size_t f = topo_fields.size();
  fm.collaborative.setZero(n, fm.collab_columns.size());
  fm.topo.setZero(n, f);
  fm.topo_avail.assign(n * f, 0);
  fm.isolated.assign(n, 0);

  auto comp = components(net);
  for (std::size_t r = 0; r < n; ++r) {
    NodeId v = fm.rows[r];
    for (std::size_t c = 0; c < fm.collab_columns.size(); ++c)
      fm.collaborative(r, c) = net.weight(v, fm.collab_columns[c]);
    auto tv = topo_vector(net, v, comp, mode);
    for (std::size_t c = 0; c < f; ++c) {
      fm.topo(r, c) = tv.get(topo_fields[c]);
      fm.topo_avail[r * f + c] = tv.has(topo_fields[c]) ? 1 : 0;
    }
    fm.isolated[r] = comp.size_of(v) < 2 ? 1 : 0;
  }
  return fm;
}

/// Fit the scaler on the training rows' available entries and apply it to all
/// rows. Unavailable entries become 0 (the training mean after z-scoring);
/// zero-variance columns pass through centered.
inline FeatureMatrix fit_transform(const FeatureMatrix& fm, const std::vector<std::size_t>& train_rows) {
  if (train_rows.empty()) throw Error("fit_transform: no training rows");
  FeatureMatrix out = fm;
  const std::size_t f = fm.topo_fields.size();
  out.scaler_mean = Eigen::VectorXd::Zero(f);
  out.scaler_std = Eigen::VectorXd::Zero(f);

  for (std::size_t c = 0; c < f; ++c) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t r : train_rows)
      if (fm.avail(r, c)) {
        sum += fm.topo(r, c);
        ++count;
      }
    const double mean = count ? sum / static_cast<double>(count) : 0.0;
    double var = 0.0;
    for (std::size_t r : train_rows)
      if (fm.avail(r, c)) var += (fm.topo(r, c) - mean) * (fm.topo(r, c) - mean);
    const double sd = count ? std::sqrt(var / static_cast<double>(count)) : 0.0;
    out.scaler_mean(c) = mean;
    out.scaler_std(c) = sd;
    for (std::size_t r = 0; r < fm.n_rows(); ++r) {
      if (!fm.avail(r, c)) {
        out.topo(r, c) = 0.0;
      } else if (sd > 0.0) {
        out.topo(r, c) = (fm.topo(r, c) - mean) / sd;
      } else {
        out.topo(r, c) = fm.topo(r, c) - mean;
      }
    }
  }
  out.standardized = true;
  return out;
}

/// Measurement dump: one row per persona, every catalog measurement as a
/// column, NA where unavailable.
inline void dump_features_csv(const CollabNetwork& net, const AmbiguousCase& kase,
                              std::ostream& out, PathMode mode = PathMode::hops) {
  auto fm = build_features(net, kase, extended_topo_fields(), mode);
  out << "persona,paper_id,entity";
  for (const auto field : fm.topo_fields) out << ',' << topo_field_name(field);
  out << '\n';
  for (std::size_t r = 0; r < fm.n_rows(); ++r) {
    out << net.node(fm.rows[r]).label << ',' << fm.paper_ids[r] << ','
        << fm.entities[fm.labels[r]];
    for (std::size_t c = 0; c < fm.topo_fields.size(); ++c) {
      out << ',';
      if (fm.avail(r, c)) out << format_double(fm.topo(r, c));
      else out << "NA";
    }
    out << '\n';
  }
}

}  // namespace disamb
