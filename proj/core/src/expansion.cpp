#include "stackres/expansion.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "internal.hpp"
#include "stackres/errors.hpp"

namespace stackres {

using detail::sat_add;
using detail::sat_mul;

ExpansionBudget ExpansionBudget::from_env() {
  ExpansionBudget budget;
  if (const char* env = std::getenv("STACKRES_MAX_NODES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) budget.max_nodes = v;
  }
  return budget;
}

ContractOrder::ContractOrder(std::vector<PlayerId> players) : players_(std::move(players)) {
  for (std::size_t i = 0; i < players_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (players_[i] == players_[j]) {
        throw DuplicatePlayerInOrder("player index " + std::to_string(players_[i].index) +
                                     " appears twice in the contract order");
      }
    }
  }
}

ContractOrder ContractOrder::parse(const OutcomeTable& table, std::string_view csv) {
  std::vector<PlayerId> players;
  while (true) {
    const auto comma = csv.find(',');
    auto name = csv.substr(0, comma);
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    auto p = table.find_player(name);
    if (!p) throw std::invalid_argument("unknown player '" + std::string(name) + "' in order");
    if (std::find(players.begin(), players.end(), *p) != players.end()) {
      throw DuplicatePlayerInOrder("player " + std::string(name) +
                                   " appears twice in the contract order");
    }
    players.push_back(*p);
    if (comma == std::string_view::npos) break;
    csv.remove_prefix(comma + 1);
  }
  return ContractOrder(std::move(players));
}

std::string ContractOrder::to_string(const OutcomeTable& table) const {
  std::string out = "(";
  for (std::size_t i = 0; i < players_.size(); ++i) {
    if (i) out += ", ";
    out += table.player_name(players_[i]);
  }
  return out + ")";
}

std::vector<ContractOrder> injective_orders(std::size_t players, std::size_t k) {
  std::vector<ContractOrder> out;
  std::vector<PlayerId> current;
  std::vector<bool> used(players, false);
  auto rec = [&](auto&& self) -> void {
    if (current.size() == k) {
      out.emplace_back(current);
      return;
    }
    for (std::uint32_t p = 0; p < players; ++p) {
      if (used[p]) continue;
      used[p] = true;
      current.push_back(PlayerId{p});
      self(self);
      current.pop_back();
      used[p] = false;
    }
  };
  if (k <= players) rec(rec);
  return out;
}

std::uint64_t cut_count(const GameTree& tree, PlayerId p) {
  std::uint64_t count = 1;
  for (NodeId n : tree.owned_nodes(p)) count = sat_mul(count, tree.fanout(n));
  return count;
}

std::uint64_t predicted_expansion_size(const GameTree& tree, PlayerId p) {
  if (tree.has_contracts()) throw ContractNodePresent();
  // cuts[n]: cuts of p inside n's subtree; sizes[n]: total size of the pruned
  // copies of n's subtree over those cuts.
  std::vector<std::uint64_t> cuts(tree.size());
  std::vector<std::uint64_t> sizes(tree.size());
  for (NodeId n = static_cast<NodeId>(tree.size()); n-- > 0;) {
    if (tree.is_leaf(n)) {
      cuts[n] = sizes[n] = 1;
      continue;
    }
    const auto kids = tree.children(n);
    std::uint64_t all = 1;
    for (NodeId c : kids) all = sat_mul(all, cuts[c]);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      std::uint64_t others = 1;
      for (std::size_t j = 0; j < kids.size(); ++j) {
        if (j != i) others = sat_mul(others, cuts[kids[j]]);
      }
      total = sat_add(total, sat_mul(sizes[kids[i]], others));
    }
    if (tree.owner(n) == p) {
      cuts[n] = sat_mul(all, kids.size());
      sizes[n] = total;
    } else {
      cuts[n] = all;
      sizes[n] = sat_add(all, total);
    }
  }
  return sat_add(1, sizes[GameTree::root()]);
}

std::vector<Cut> enumerate_cuts(const GameTree& tree, PlayerId p, const ExpansionBudget& budget) {
  if (tree.has_contracts()) throw ContractNodePresent();
  const auto nodes = tree.owned_nodes(p);
  const std::uint64_t count = cut_count(tree, p);
  if (count > budget.max_nodes) throw BudgetExceeded(count, budget.max_nodes);

  std::vector<Cut> cuts;
  cuts.reserve(count);
  std::vector<std::uint32_t> digits(nodes.size(), 0);
  while (true) {
    Cut cut{p, {}};
    cut.choices.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) cut.choices.emplace_back(nodes[i], digits[i]);
    cuts.push_back(std::move(cut));
    // Odometer with the last node as the fastest digit.
    std::size_t i = nodes.size();
    while (i > 0) {
      --i;
      if (++digits[i] < tree.fanout(nodes[i])) break;
      digits[i] = 0;
      if (i == 0) return cuts;
    }
    if (nodes.empty()) return cuts;
  }
}

GameTree expand_one(const GameTree& tree, PlayerId p, const ExpansionBudget& budget) {
  if (tree.has_contracts()) throw ContractNodePresent();
  const std::uint64_t predicted = predicted_expansion_size(tree, p);
  if (predicted > budget.max_nodes) throw BudgetExceeded(predicted, budget.max_nodes);

  auto layer = std::make_shared<ContractLayer>();
  layer->player = p;
  layer->cuts = enumerate_cuts(tree, p, budget);
  for (NodeId n : tree.owned_nodes(p)) layer->fanouts.push_back(tree.fanout(n));

  TreeWriter w(tree.outcome_table());
  w.reserve(predicted);
  const auto fanout = static_cast<std::uint32_t>(layer->cuts.size());
  const NodeId root = w.add_internal(NodeKind::kDecision, p, fanout);
  w.tag_layer(root, layer);
  std::vector<std::int32_t> pick(tree.size(), -1);
  for (std::uint32_t k = 0; k < fanout; ++k) {
    for (const auto& [node, child] : layer->cuts[k].choices) pick[node] = static_cast<std::int32_t>(child);
    w.set_child(root, k, detail::write_pruned(tree, GameTree::root(), p, pick, w));
  }
  return std::move(w).finish();
}

GameTree expand_order(const GameTree& tree, const ContractOrder& order,
                      const ExpansionBudget& budget) {
  if (tree.has_contracts()) throw ContractNodePresent();
  GameTree current = tree;
  const auto& players = order.players();
  for (auto it = players.rbegin(); it != players.rend(); ++it) {
    if (it->index >= tree.player_count()) {
      throw std::invalid_argument("contract order names a player outside the game");
    }
    current = expand_one(current, *it, budget);
  }
  return current;
}

namespace {

GameTree expand_subtree(const GameTree& tree, NodeId n, const ExpansionBudget& budget) {
  if (tree.kind(n) == NodeKind::kContract) {
    GameTree inner = expand_subtree(tree, tree.child(n, 0), budget);
    return expand_one(inner, tree.owner(n), budget);
  }
  GameTree sub = detail::subtree(tree, n);
  if (!sub.has_contracts()) return sub;

  std::vector<GameTree> kids;
  std::uint64_t total = 1;
  for (NodeId c : tree.children(n)) {
    kids.push_back(expand_subtree(tree, c, budget));
    total = sat_add(total, kids.back().size());
  }
  if (total > budget.max_nodes) throw BudgetExceeded(total, budget.max_nodes);
  TreeWriter w(tree.outcome_table());
  w.reserve(total);
  const NodeId root = w.add_internal(NodeKind::kDecision, tree.owner(n), tree.fanout(n));
  for (std::uint32_t k = 0; k < kids.size(); ++k) {
    w.set_child(root, k, w.copy_subtree(kids[k], GameTree::root()));
  }
  return std::move(w).finish();
}

}  // namespace

GameTree expand_contracts(const GameTree& tree, const ExpansionBudget& budget) {
  if (!tree.has_contracts()) return tree;
  return expand_subtree(tree, GameTree::root(), budget);
}

AttackWitness extract_witness(const GameTree& expanded, const StrategyProfile& profile) {
  AttackWitness witness;
  const auto path = play_path(expanded, profile);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const ContractLayer* layer = expanded.layer(path[i]);
    if (!layer) continue;
    const auto pick = *profile.choice(path[i]);
    witness.commitments.push_back({layer->player, layer->cuts.at(pick), layer->label(pick)});
  }
  witness.outcome = expanded.outcome(path.back());
  witness.payoffs = expanded.outcomes().payoffs(witness.outcome);
  return witness;
}

}  // namespace stackres
