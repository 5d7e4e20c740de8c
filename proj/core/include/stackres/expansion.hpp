#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stackres/equilibrium.hpp"
#include "stackres/game.hpp"

namespace stackres {

struct ExpansionBudget {
  static constexpr std::uint64_t kDefaultMaxNodes = 10'000'000;

  // Upper bound on nodes materialised by one expansion step (and on the
  // number of cuts enumerated for one player).
  std::uint64_t max_nodes = kDefaultMaxNodes;

  // Reads STACKRES_MAX_NODES, falling back to the default.
  static ExpansionBudget from_env();
};

// Players receiving contracts, outermost (leading) first.
class ContractOrder {
 public:
  ContractOrder() = default;
  // Throws DuplicatePlayerInOrder.
  explicit ContractOrder(std::vector<PlayerId> players);

  // "a,b,c" with player names. Throws std::invalid_argument on unknown names
  // and DuplicatePlayerInOrder on repeats.
  static ContractOrder parse(const OutcomeTable& table, std::string_view csv);

  const std::vector<PlayerId>& players() const { return players_; }
  std::size_t size() const { return players_.size(); }
  bool empty() const { return players_.empty(); }
  PlayerId leader() const { return players_.at(0); }

  // "(a, b)"
  std::string to_string(const OutcomeTable& table) const;

  friend bool operator==(const ContractOrder&, const ContractOrder&) = default;

 private:
  std::vector<PlayerId> players_;
};

// All injective orders of k out of n players, lexicographic by index.
std::vector<ContractOrder> injective_orders(std::size_t players, std::size_t k);

// Number of cuts of p, saturating at UINT64_MAX.
std::uint64_t cut_count(const GameTree& tree, PlayerId p);

// Node count of expand_one(tree, p), computed without building it;
// saturates at UINT64_MAX.
std::uint64_t predicted_expansion_size(const GameTree& tree, PlayerId p);

// Every complete cut of p, in lexicographic order (earlier nodes vary
// slowest). A player without nodes has exactly one, empty, cut.
std::vector<Cut> enumerate_cuts(const GameTree& tree, PlayerId p,
                                const ExpansionBudget& budget = {});

// Decision node of p with one child per cut, child i being the tree pruned
// by cut i. The new root carries a ContractLayer tag.
GameTree expand_one(const GameTree& tree, PlayerId p, const ExpansionBudget& budget = {});

// Expands the last player of the order first, so earlier players commit on
// top of the later players' commitments. The empty order is the identity.
GameTree expand_order(const GameTree& tree, const ContractOrder& order,
                      const ExpansionBudget& budget = {});

// Replaces every contract node, innermost first, by its expansion.
GameTree expand_contracts(const GameTree& tree, const ExpansionBudget& budget = {});

struct Commitment {
  PlayerId player;
  Cut cut;            // relative to the tree the contract was written on
  std::string label;  // short rendering, e.g. "LR"
};

struct AttackWitness {
  std::vector<Commitment> commitments;  // outermost first
  OutcomeId outcome = 0;
  UtilityVector payoffs;
};

// Commitments chosen along the play path of `profile` in an expanded tree.
AttackWitness extract_witness(const GameTree& expanded, const StrategyProfile& profile);

enum class EvalMethod {
  kAuto,    // materialise when small, otherwise kLazy
  kExpand,  // always materialise C_P(G)
  kLazy,    // never materialise the two outermost layers
};

struct OrderEvaluation {
  OutcomeId outcome = 0;
  UtilityVector payoffs;
  AttackWitness witness;
  std::uint64_t nodes = 0;  // nodes actually materialised
  EvalMethod method = EvalMethod::kExpand;
};

// Weakly malicious SPE of the contract game for `order`. kLazy works on
// sets of outcomes the leader can force instead of enumerating its cuts and
// agrees with kExpand; only the witness cuts may differ. Throws
// BudgetExceeded when neither route fits the budget.
OrderEvaluation evaluate_order(const GameTree& tree, const ContractOrder& order,
                               EvalMethod method = EvalMethod::kAuto,
                               const ExpansionBudget& budget = {});

}  // namespace stackres
