#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disamb/corpus.hpp"
#include "disamb/error.hpp"
#include "disamb/rng.hpp"

namespace disamb {

/// Planted-homonym corpus generators.
///
/// disjoint_collaborators: every entity writes with its own collaborator
/// pool, so the collaborative signal alone separates the personas; the pools
/// are wired identically, leaving no topological signal.
///
/// shared_topology: both entities draw bridge co-authors from one shared pool
/// (collaborative signal near chance) while each paper also brings one
/// community co-author — entity 1's community is a clique, entity 2's a
/// chain — so the personas differ in neighborhood structure only.
///
/// noise: one shared pool, no structure; nothing separates the personas.
enum class SynthMode { disjoint_collaborators, shared_topology, noise };

struct SynthSpec {
  SynthMode mode = SynthMode::disjoint_collaborators;
  std::size_t n_entities = 2;
  std::size_t papers_per_entity = 10;
  std::size_t coauthors_per_paper = 3;  // disjoint / noise modes
  std::size_t pool_size = 6;            // per entity (disjoint) or shared (noise)
  std::size_t n_bridges = 2;            // shared_topology: bridges per paper
  std::size_t bridge_pool = 6;          // shared_topology: shared pool size
  std::string alias = "AA-X";

  void validate() const {
    if (n_entities < 2) throw ValidationError("synth: need at least 2 entities");
    if (papers_per_entity < 1) throw ValidationError("synth: need at least 1 paper per entity");
    if (mode == SynthMode::shared_topology) {
      if (n_entities != 2)
        throw ValidationError("synth: shared-collaborators-distinct-topology needs exactly 2 entities");
      if (papers_per_entity < 2)
        throw ValidationError("synth: shared_topology needs at least 2 papers per entity");
      if (n_bridges < 1 || n_bridges > bridge_pool)
        throw ValidationError("synth: bridges per paper must lie in [1, bridge_pool]");
    } else {
      if (coauthors_per_paper < 1 || coauthors_per_paper > pool_size)
        throw ValidationError("synth: coauthors per paper must lie in [1, pool_size]");
    }
  }
};

inline std::string synth_mode_name(SynthMode m) {
  switch (m) {
    case SynthMode::disjoint_collaborators: return "disjoint-collaborators";
    case SynthMode::shared_topology: return "shared-collaborators-distinct-topology";
    case SynthMode::noise: return "noise";
  }
  return "?";
}

inline SynthMode synth_mode_from_name(const std::string& name) {
  if (name == "disjoint-collaborators" || name == "disjoint")
    return SynthMode::disjoint_collaborators;
  if (name == "shared-collaborators-distinct-topology" || name == "shared-topology")
    return SynthMode::shared_topology;
  if (name == "noise") return SynthMode::noise;
  throw ValidationError("synth: unknown mode '" + name + "'");
}

inline std::vector<PaperRecord> generate_corpus(const SynthSpec& spec, std::uint64_t seed) {
  spec.validate();
  rng::Engine eng(seed);
  std::vector<PaperRecord> papers;
  auto entity_name = [](std::size_t e) { return "E" + std::to_string(e + 1); };

  if (spec.mode == SynthMode::disjoint_collaborators || spec.mode == SynthMode::noise) {
    const bool shared_pool = spec.mode == SynthMode::noise;
    auto pool_member = [&](std::size_t e, std::size_t i) {
      return shared_pool ? "P_" + std::to_string(i + 1)
                         : "P" + std::to_string(e + 1) + "_" + std::to_string(i + 1);
    };
    for (std::size_t e = 0; e < spec.n_entities; ++e) {
      for (std::size_t k = 0; k < spec.papers_per_entity; ++k) {
        PaperRecord rec;
        rec.paper_id = "d" + std::to_string(e + 1) + "_" + std::to_string(k + 1);
        rec.aliases.push_back(spec.alias);
        rec.entities.emplace();
        rec.entities->push_back(entity_name(e));
        for (auto i : rng::sample_without_replacement(eng, spec.pool_size,
                                                      spec.coauthors_per_paper)) {
          rec.aliases.push_back(pool_member(e, i));
          rec.entities->push_back(pool_member(e, i));
        }
        papers.push_back(std::move(rec));
      }
    }
    return papers;
  }

  // shared_topology
  const std::size_t p = spec.papers_per_entity;
  auto clique_member = [](std::size_t k) { return "CA_" + std::to_string(k + 1); };
  auto chain_member = [](std::size_t k) { return "CB_" + std::to_string(k + 1); };
  auto bridge_member = [](std::size_t i) { return "BR_" + std::to_string(i + 1); };

  for (std::size_t e = 0; e < 2; ++e) {
    for (std::size_t k = 0; k < p; ++k) {
      PaperRecord rec;
      rec.paper_id = "d" + std::to_string(e + 1) + "_" + std::to_string(k + 1);
      rec.aliases.push_back(spec.alias);
      rec.entities.emplace();
      rec.entities->push_back(entity_name(e));
      const std::string community = e == 0 ? clique_member(k) : chain_member(k);
      rec.aliases.push_back(community);
      rec.entities->push_back(community);
      for (auto i : rng::sample_without_replacement(eng, spec.bridge_pool, spec.n_bridges)) {
        rec.aliases.push_back(bridge_member(i));
        rec.entities->push_back(bridge_member(i));
      }
      papers.push_back(std::move(rec));
    }
  }
  {
    // Clique community: one joint paper interlinks every CA member.
    PaperRecord rec;
    rec.paper_id = "fa";
    rec.entities.emplace();
    for (std::size_t k = 0; k < p; ++k) {
      rec.aliases.push_back(clique_member(k));
      rec.entities->push_back(clique_member(k));
    }
    papers.push_back(std::move(rec));
  }
  for (std::size_t k = 0; k + 1 < p; ++k) {
    // Chain community: pairwise papers string the CB members into a path.
    PaperRecord rec;
    rec.paper_id = "fb_" + std::to_string(k + 1);
    rec.aliases = {chain_member(k), chain_member(k + 1)};
    rec.entities = {{chain_member(k), chain_member(k + 1)}};
    papers.push_back(std::move(rec));
  }
  return papers;
}

}  // namespace disamb
