#pragma once

#include <optional>
#include <vector>

#include "stackres/game.hpp"

namespace stackres {

struct RegionEntry {
  OutcomeId outcome = 0;
  UtilityVector payoffs;
  // The outcome whose threat put this entry in the region, if any.
  std::optional<OutcomeId> threat;
};

// Outcomes the leading contract player can induce; sorted by outcome id,
// no duplicates.
class Region {
 public:
  Region() = default;

  // Adds e unless its outcome is already present (the first entry wins).
  void insert(RegionEntry e);
  void merge(const Region& other);

  bool contains(OutcomeId o) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<RegionEntry>& entries() const { return entries_; }
  std::vector<OutcomeId> outcomes() const;

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::vector<RegionEntry> entries_;
};

// Entries x of a for which b holds some y with y[follower] < x[follower].
// The recorded threat is the y worst for the follower (lowest id on ties).
Region threaten(const Region& a, const Region& b, PlayerId follower);

// Outcomes the leader can force when it commits first and the follower
// second. Leaves give themselves; at a leader node the children's regions
// plus every leaf below that one of them can threaten; at a follower node
// each child's region threatened by the other's. Needs a two-player,
// bifurcating game without contract nodes; throws NotTwoPlayer,
// NotBifurcating or ContractNodePresent.
Region inducible_region(const GameTree& tree, PlayerId leader);

struct LeadingEquilibrium {
  OutcomeId outcome = 0;
  UtilityVector payoffs;
};

// Best region entry for the leader; ties go to the entry worse for the
// follower, then to the lower outcome id.
LeadingEquilibrium leading_equilibrium(const GameTree& tree, PlayerId leader);

// Replaces every decision node with m > 2 children by a right-leaning chain
// of m - 1 binary nodes of the same owner.
GameTree binarize(const GameTree& tree);

}  // namespace stackres
