#include "stackres/inducible.hpp"

#include <algorithm>

#include "stackres/errors.hpp"

namespace stackres {

void Region::insert(RegionEntry e) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), e.outcome,
                             [](const RegionEntry& x, OutcomeId o) { return x.outcome < o; });
  if (it != entries_.end() && it->outcome == e.outcome) return;
  entries_.insert(it, std::move(e));
}

void Region::merge(const Region& other) {
  for (const auto& e : other) insert(e);
}

bool Region::contains(OutcomeId o) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), o,
                             [](const RegionEntry& x, OutcomeId id) { return x.outcome < id; });
  return it != entries_.end() && it->outcome == o;
}

std::vector<OutcomeId> Region::outcomes() const {
  std::vector<OutcomeId> out;
  for (const auto& e : entries_) out.push_back(e.outcome);
  return out;
}

Region threaten(const Region& a, const Region& b, PlayerId follower) {
  const RegionEntry* worst = nullptr;
  for (const auto& y : b) {
    if (!worst || y.payoffs.at(follower.index) < worst->payoffs.at(follower.index)) worst = &y;
  }
  Region out;
  if (!worst) return out;
  for (const auto& x : a) {
    if (worst->payoffs.at(follower.index) < x.payoffs.at(follower.index)) {
      out.insert({x.outcome, x.payoffs, worst->outcome});
    }
  }
  return out;
}

namespace {

void check_shape(const GameTree& tree, PlayerId leader) {
  if (tree.player_count() != 2) throw NotTwoPlayer();
  if (tree.has_contracts()) throw ContractNodePresent();
  if (!tree.is_bifurcating()) throw NotBifurcating();
  if (leader.index >= 2) throw std::invalid_argument("leader is not a player of the game");
}

Region leaves_below(const GameTree& tree, NodeId n) {
  Region out;
  const NodeId end = tree.subtree_end(n);
  for (NodeId m = n; m < end; ++m) {
    if (tree.is_leaf(m)) out.insert({tree.outcome(m), tree.payoffs(m), std::nullopt});
  }
  return out;
}

Region region_at(const GameTree& tree, NodeId n, PlayerId leader, PlayerId follower) {
  if (tree.is_leaf(n)) {
    Region r;
    r.insert({tree.outcome(n), tree.payoffs(n), std::nullopt});
    return r;
  }
  const Region left = region_at(tree, tree.child(n, 0), leader, follower);
  const Region right = region_at(tree, tree.child(n, 1), leader, follower);
  Region out;
  if (tree.owner(n) == leader) {
    out = left;
    out.merge(right);
    out.merge(threaten(leaves_below(tree, n), out, follower));
  } else {
    out = threaten(right, left, follower);
    out.merge(threaten(left, right, follower));
  }
  return out;
}

}  // namespace

Region inducible_region(const GameTree& tree, PlayerId leader) {
  check_shape(tree, leader);
  const PlayerId follower{1 - leader.index};
  return region_at(tree, GameTree::root(), leader, follower);
}

LeadingEquilibrium leading_equilibrium(const GameTree& tree, PlayerId leader) {
  const Region region = inducible_region(tree, leader);
  const std::uint32_t l = leader.index;
  const std::uint32_t f = 1 - l;
  const RegionEntry* best = nullptr;
  for (const auto& e : region) {
    if (!best || e.payoffs[l] > best->payoffs[l] ||
        (e.payoffs[l] == best->payoffs[l] && e.payoffs[f] < best->payoffs[f])) {
      best = &e;
    }
  }
  if (!best) throw std::logic_error("empty inducible region");
  return {best->outcome, best->payoffs};
}

namespace {

NodeId write_binary(const GameTree& tree, NodeId n, TreeWriter& w) {
  if (tree.is_leaf(n)) return w.add_leaf(tree.outcome(n));
  const auto kids = tree.children(n);
  // Chain nodes are written before the children they hold, keeping ids in
  // preorder: node, child 0, chain node, child 1, ... , last child.
  NodeId id = w.add_internal(NodeKind::kDecision, tree.owner(n), 2);
  const NodeId top = id;
  for (std::size_t k = 0; k + 2 < kids.size(); ++k) {
    w.set_child(id, 0, write_binary(tree, kids[k], w));
    const NodeId next = w.add_internal(NodeKind::kDecision, tree.owner(n), 2);
    w.set_child(id, 1, next);
    id = next;
  }
  w.set_child(id, 0, write_binary(tree, kids[kids.size() - 2], w));
  w.set_child(id, 1, write_binary(tree, kids[kids.size() - 1], w));
  return top;
}

}  // namespace

GameTree binarize(const GameTree& tree) {
  if (tree.has_contracts()) throw ContractNodePresent();
  TreeWriter w(tree.outcome_table());
  w.reserve(tree.size() * 2);
  write_binary(tree, GameTree::root(), w);
  return std::move(w).finish();
}

}  // namespace stackres
