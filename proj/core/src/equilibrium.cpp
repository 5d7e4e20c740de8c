#include "stackres/equilibrium.hpp"

#include <algorithm>
#include <set>

#include "internal.hpp"
#include "stackres/errors.hpp"

namespace stackres {

Cut StrategyProfile::strategy_of(const GameTree& tree, PlayerId p) const {
  Cut cut{p, {}};
  for (NodeId n : tree.owned_nodes(p)) {
    if (auto c = choice(n)) cut.choices.emplace_back(n, *c);
  }
  return cut;
}

namespace {

void require_no_contracts(const GameTree& tree) {
  if (tree.has_contracts()) throw ContractNodePresent();
}

}  // namespace

SpeResult spe(const GameTree& tree) {
  require_no_contracts(tree);
  const auto& table = tree.outcomes();
  std::vector<OutcomeId> best(tree.size());
  SpeResult result;
  result.profile = StrategyProfile(tree.size());

  for (NodeId n = static_cast<NodeId>(tree.size()); n-- > 0;) {
    if (tree.is_leaf(n)) {
      best[n] = tree.outcome(n);
      continue;
    }
    const PlayerId owner = tree.owner(n);
    const auto kids = tree.children(n);
    std::uint32_t pick = 0;
    for (std::uint32_t k = 1; k < kids.size(); ++k) {
      if (compare_for(table, owner, best[kids[k]], best[kids[pick]]) > 0) pick = k;
    }
    best[n] = best[kids[pick]];
    result.profile.set(n, pick);
  }

  NodeId n = GameTree::root();
  while (!tree.is_leaf(n)) n = tree.child(n, *result.profile.choice(n));
  result.leaf = n;
  result.outcome = tree.outcome(n);
  result.payoffs = table.payoffs(result.outcome);
  return result;
}

std::vector<UtilityVector> outcome_set(const GameTree& tree) {
  require_no_contracts(tree);
  const auto& table = tree.outcomes();
  // Sets of vector classes, sorted.
  std::vector<std::vector<OutcomeId>> sets(tree.size());

  for (NodeId n = static_cast<NodeId>(tree.size()); n-- > 0;) {
    if (tree.is_leaf(n)) {
      sets[n] = {table.vector_class(tree.outcome(n))};
      continue;
    }
    const PlayerId p = tree.owner(n);
    const auto kids = tree.children(n);
    std::vector<std::uint32_t> min_payoff(kids.size());
    for (std::size_t k = 0; k < kids.size(); ++k) {
      std::uint32_t m = UINT32_MAX;
      for (OutcomeId w : sets[kids[k]]) m = std::min(m, table.payoff_rank(w, p));
      min_payoff[k] = m;
    }
    std::set<OutcomeId> merged;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      std::uint32_t threshold = 0;
      for (std::size_t j = 0; j < kids.size(); ++j) {
        if (j != i) threshold = std::max(threshold, min_payoff[j]);
      }
      for (OutcomeId v : sets[kids[i]]) {
        if (table.payoff_rank(v, p) >= threshold) merged.insert(v);
      }
    }
    sets[n].assign(merged.begin(), merged.end());
    for (NodeId k : kids) std::vector<OutcomeId>().swap(sets[k]);
  }

  std::vector<UtilityVector> out;
  for (OutcomeId o : sets[GameTree::root()]) out.push_back(table.payoffs(o));
  return out;
}

bool equivalent(const GameTree& a, const GameTree& b, EquivalenceMode mode) {
  if (a.players() != b.players()) throw PlayerMismatch("games have different player lists");
  if (mode == EquivalenceMode::kStrict) return spe(a).payoffs == spe(b).payoffs;
  auto sa = outcome_set(a);
  auto sb = outcome_set(b);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

namespace detail {

NodeId write_pruned(const GameTree& tree, NodeId n, PlayerId player,
                    const std::vector<std::int32_t>& pick, TreeWriter& w) {
  while (tree.kind(n) == NodeKind::kDecision && tree.owner(n) == player) {
    n = tree.child(n, static_cast<std::uint32_t>(pick[n]));
  }
  if (tree.is_leaf(n)) return w.add_leaf(tree.outcome(n));
  const NodeId id = w.add_internal(tree.kind(n), tree.owner(n), tree.fanout(n));
  if (auto tag = tree.layer_handle(n)) w.tag_layer(id, std::move(tag));
  for (std::uint32_t k = 0; k < tree.fanout(n); ++k) {
    w.set_child(id, k, write_pruned(tree, tree.child(n, k), player, pick, w));
  }
  return id;
}

GameTree subtree(const GameTree& tree, NodeId n) {
  TreeWriter w(tree.outcome_table());
  w.copy_subtree(tree, n);
  return std::move(w).finish();
}

}  // namespace detail

GameTree prune(const GameTree& tree, PlayerId player, const Cut& cut) {
  std::vector<std::int32_t> pick(tree.size(), -1);
  for (const auto& [node, child] : cut.choices) {
    if (node >= tree.size() || tree.kind(node) != NodeKind::kDecision ||
        tree.owner(node) != player) {
      throw UnknownNode("cut names node " + std::to_string(node) + " not owned by player " +
                        tree.outcomes().player_name(player));
    }
    if (child >= tree.fanout(node)) {
      throw UnknownNode("cut picks child " + std::to_string(child) + " of node " +
                        std::to_string(node) + " which has " +
                        std::to_string(tree.fanout(node)) + " children");
    }
    pick[node] = static_cast<std::int32_t>(child);
  }
  for (NodeId n : tree.owned_nodes(player)) {
    if (pick[n] < 0) throw IncompleteCut("cut has no choice for node " + std::to_string(n));
  }

  TreeWriter w(tree.outcome_table());
  w.reserve(tree.size());
  detail::write_pruned(tree, GameTree::root(), player, pick, w);
  return std::move(w).finish();
}

std::vector<NodeId> play_path(const GameTree& tree, const StrategyProfile& profile) {
  std::vector<NodeId> path;
  NodeId n = GameTree::root();
  while (true) {
    path.push_back(n);
    if (tree.is_leaf(n)) break;
    if (tree.kind(n) == NodeKind::kContract) {
      n = tree.child(n, 0);
      continue;
    }
    auto c = profile.choice(n);
    if (!c || *c >= tree.fanout(n)) {
      throw IncompleteProfile("profile has no valid choice at node " + std::to_string(n));
    }
    n = tree.child(n, *c);
  }
  return path;
}

namespace {

// a - b where either side may be infinite; the loss of an infinitely bad
// deviation is +inf.
ExtendedRational gap(const ExtendedRational& a, const ExtendedRational& b) {
  if (a == b) return ExtendedRational(0);
  if (a.is_finite() && b.is_finite()) return a - b;
  return a > b ? ExtendedRational::pos_inf() : ExtendedRational::neg_inf();
}

void reachable(const GameTree& tree, const StrategyProfile& profile, PlayerId deviator, NodeId n,
               std::vector<OutcomeId>& out) {
  if (tree.is_leaf(n)) {
    out.push_back(tree.outcome(n));
    return;
  }
  if (tree.owner(n) == deviator) {
    for (NodeId c : tree.children(n)) reachable(tree, profile, deviator, c, out);
    return;
  }
  reachable(tree, profile, deviator, tree.child(n, *profile.choice(n)), out);
}

}  // namespace

ExtendedRational security_margin(const GameTree& tree, const StrategyProfile& profile) {
  require_no_contracts(tree);
  if (profile.size() != tree.size()) throw IncompleteProfile("profile does not match tree size");
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (tree.kind(n) != NodeKind::kDecision) continue;
    auto c = profile.choice(n);
    if (!c || *c >= tree.fanout(n)) {
      throw IncompleteProfile("profile has no valid choice at node " + std::to_string(n));
    }
  }

  const auto& table = tree.outcomes();
  const auto path = play_path(tree, profile);
  const OutcomeId realised = tree.outcome(path.back());
  const auto& base = table.payoffs(realised);

  ExtendedRational margin = ExtendedRational::pos_inf();
  for (std::uint32_t i = 0; i < tree.player_count(); ++i) {
    std::vector<OutcomeId> options;
    reachable(tree, profile, PlayerId{i}, GameTree::root(), options);
    std::optional<ExtendedRational> best;
    for (OutcomeId o : options) {
      if (table.vector_class(o) == table.vector_class(realised)) continue;
      const auto& v = table.payoffs(o)[i];
      if (!best || v > *best) best = v;
    }
    if (best) margin = std::min(margin, gap(base[i], *best));
  }
  return margin;
}

}  // namespace stackres
