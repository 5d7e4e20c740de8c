#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stackres/game.hpp"

namespace stackres {

// One child index per decision node, indexed by node id; non-decision
// nodes hold kNone.
class StrategyProfile {
 public:
  static constexpr std::int32_t kNone = -1;

  StrategyProfile() = default;
  explicit StrategyProfile(std::size_t nodes) : choices_(nodes, kNone) {}

  std::size_t size() const { return choices_.size(); }
  std::optional<std::uint32_t> choice(NodeId n) const {
    if (n >= choices_.size() || choices_[n] == kNone) return std::nullopt;
    return static_cast<std::uint32_t>(choices_[n]);
  }
  void set(NodeId n, std::uint32_t child) { choices_.at(n) = static_cast<std::int32_t>(child); }

  // The strategy of one player, i.e. the profile restricted to its nodes.
  Cut strategy_of(const GameTree& tree, PlayerId p) const;

  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;

 private:
  std::vector<std::int32_t> choices_;
};

struct SpeResult {
  UtilityVector payoffs;
  StrategyProfile profile;
  NodeId leaf = 0;
  OutcomeId outcome = 0;
};

// Backward induction with weakly malicious tie-breaking: the owner maximises
// its payoff, then minimises the others' combined payoff, then takes the
// lowest child index. Throws ContractNodePresent.
SpeResult spe(const GameTree& tree);

// Payoff vectors reachable by some subgame perfect equilibrium under
// arbitrary tie-breaking; one vector per class, ordered by leaf.
std::vector<UtilityVector> outcome_set(const GameTree& tree);

enum class EquivalenceMode { kStrict, kSet };

// Strict: equal weakly malicious SPE vectors. Set: equal outcome sets.
// Throws PlayerMismatch when the player lists differ.
bool equivalent(const GameTree& a, const GameTree& b, EquivalenceMode mode);

// Collapses every node of `player` to the child chosen by `cut`. Throws
// IncompleteCut when an owned node has no choice and UnknownNode when the cut
// names a node the player does not own or an out-of-range child.
GameTree prune(const GameTree& tree, PlayerId player, const Cut& cut);

// Nodes visited from the root when everybody follows the profile.
std::vector<NodeId> play_path(const GameTree& tree, const StrategyProfile& profile);

// Smallest loss any player suffers from a unilateral deviation that changes
// the realised payoff vector; +inf when no such deviation exists. Throws
// ContractNodePresent and IncompleteProfile.
ExtendedRational security_margin(const GameTree& tree, const StrategyProfile& profile);

}  // namespace stackres
