#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "stackres/equilibrium.hpp"
#include "stackres/expansion.hpp"

namespace stackres {

enum class Verdict { kResilient, kNotResilient, kInconclusive };

std::string_view to_string(Verdict v);
std::string_view to_string(EquivalenceMode m);

struct ResilienceOptions {
  EquivalenceMode mode = EquivalenceMode::kStrict;
  ExpansionBudget budget = ExpansionBudget::from_env();
  EvalMethod method = EvalMethod::kAuto;
  // Stop evaluating orders once one is not resilient.
  bool stop_at_first = false;
  // Worker threads for independent orders; 0 picks the hardware default.
  unsigned threads = 0;
  // Allow the two-player inducible-region shortcut in full_resilient.
  bool fast_path = true;
};

struct OrderResult {
  ContractOrder order;
  Verdict verdict = Verdict::kInconclusive;
  UtilityVector spe_before;
  std::optional<UtilityVector> spe_after;
  std::optional<OutcomeId> outcome_after;
  // Present exactly when the order is not resilient.
  std::optional<AttackWitness> witness;
  std::uint64_t nodes = 0;
  double millis = 0;
  EvalMethod method = EvalMethod::kExpand;
  std::string note;  // why the order is inconclusive
};

struct ResilienceReport {
  std::string game;
  std::size_t k = 0;
  EquivalenceMode mode = EquivalenceMode::kStrict;
  std::vector<OrderResult> orders;
  Verdict verdict = Verdict::kInconclusive;
  // "expansion" or "inducible-region".
  std::string path = "expansion";

  const OrderResult* first_counterexample() const;
};

// Compares the game with its contract game for one order. Budget overruns
// give an inconclusive result instead of an exception.
OrderResult is_resilient(const GameTree& tree, const ContractOrder& order,
                         const ResilienceOptions& options = {});

// All n!/(n-k)! orders of k players, in lexicographic order.
ResilienceReport k_resilient(const GameTree& tree, std::size_t k,
                             const ResilienceOptions& options = {}, std::string game = "game");

// k = n. Two-player, strictly generic, bifurcating games in strict mode are
// decided with the inducible region of each leader.
ResilienceReport full_resilient(const GameTree& tree, const ResilienceOptions& options = {},
                                std::string game = "game");

// Combines per-order verdicts: any counterexample wins, then any
// inconclusive order.
Verdict combine(const std::vector<OrderResult>& orders);

nlohmann::json to_json(const AttackWitness& witness, const GameTree& tree);
nlohmann::json to_json(const ResilienceReport& report, const GameTree& tree, bool timing = false);

// Payoff vector as JSON strings, e.g. ["-1", "1/2", "inf"].
nlohmann::json to_json(const UtilityVector& payoffs);

}  // namespace stackres
