#include "stackres/game.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "stackres/errors.hpp"

namespace stackres {

std::string to_string(const UtilityVector& payoffs) {
  std::string out = "(";
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    if (i) out += ", ";
    out += payoffs[i].to_string();
  }
  return out + ")";
}

namespace {

// Sort key for the combined payoff of everybody but one player.
struct OthersSum {
  int infinity_class;  // 0: some -inf, 1: finite, 2: some +inf (and no -inf)
  Rational sum;

  friend bool operator<(const OthersSum& a, const OthersSum& b) {
    if (a.infinity_class != b.infinity_class) return a.infinity_class < b.infinity_class;
    if (a.infinity_class != 1) return false;
    return a.sum < b.sum;
  }
};

template <typename Key, typename Less>
std::vector<std::uint32_t> dense_ranks(const std::vector<Key>& keys, Less less) {
  std::vector<std::uint32_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return less(keys[a], keys[b]); });
  std::vector<std::uint32_t> rank(keys.size());
  std::uint32_t current = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && less(keys[order[i - 1]], keys[order[i]])) ++current;
    rank[order[i]] = current;
  }
  return rank;
}

}  // namespace

OutcomeTable::OutcomeTable(std::vector<std::string> players, std::vector<UtilityVector> payoffs,
                           std::vector<std::string> labels)
    : players_(std::move(players)), payoffs_(std::move(payoffs)), labels_(std::move(labels)) {
  const std::size_t n = players_.size();
  const std::size_t count = payoffs_.size();
  if (labels_.size() != count) labels_.resize(count);
  for (const auto& v : payoffs_) {
    if (v.size() != n) throw MalformedTree("payoff vector arity differs from player count");
  }

  payoff_rank_.assign(count * n, 0);
  malice_rank_.assign(count * n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<ExtendedRational> own(count);
    std::vector<OthersSum> others(count);
    for (std::size_t o = 0; o < count; ++o) {
      own[o] = payoffs_[o][p];
      OthersSum key{1, Rational(0)};
      bool neg = false;
      bool pos = false;
      for (std::size_t q = 0; q < n; ++q) {
        if (q == p) continue;
        const auto& v = payoffs_[o][q];
        if (v.kind() == ExtendedRational::Kind::kNegInf) {
          neg = true;
        } else if (v.kind() == ExtendedRational::Kind::kPosInf) {
          pos = true;
        } else {
          key.sum += v.value();
        }
      }
      if (neg) {
        key = {0, Rational(0)};
      } else if (pos) {
        key = {2, Rational(0)};
      }
      others[o] = key;
    }
    const auto pr = dense_ranks(own, std::less<>());
    const auto mr = dense_ranks(others, std::less<>());
    for (std::size_t o = 0; o < count; ++o) {
      payoff_rank_[o * n + p] = pr[o];
      malice_rank_[o * n + p] = mr[o];
    }
  }

  vector_class_.resize(count);
  std::map<std::vector<std::uint32_t>, OutcomeId> seen;
  for (std::size_t o = 0; o < count; ++o) {
    std::vector<std::uint32_t> key(payoff_rank_.begin() + static_cast<std::ptrdiff_t>(o * n),
                                   payoff_rank_.begin() + static_cast<std::ptrdiff_t>((o + 1) * n));
    auto [it, inserted] = seen.emplace(std::move(key), static_cast<OutcomeId>(o));
    vector_class_[o] = it->second;
  }
}

std::optional<PlayerId> OutcomeTable::find_player(std::string_view name) const {
  for (std::size_t i = 0; i < players_.size(); ++i) {
    if (players_[i] == name) return PlayerId{static_cast<std::uint32_t>(i)};
  }
  return std::nullopt;
}

std::string OutcomeTable::name(OutcomeId o) const {
  if (!labels_.at(o).empty()) return labels_[o];
  return "#" + std::to_string(o + 1);
}

std::optional<std::uint32_t> Cut::choice_at(NodeId node) const {
  auto it = std::lower_bound(choices.begin(), choices.end(), node,
                             [](const auto& entry, NodeId id) { return entry.first < id; });
  if (it == choices.end() || it->first != node) return std::nullopt;
  return it->second;
}

namespace {

std::string render_choices(const std::vector<std::uint32_t>& picks,
                           const std::vector<std::uint32_t>& fanouts) {
  if (picks.empty()) return "-";
  const bool binary = std::all_of(fanouts.begin(), fanouts.end(), [](auto f) { return f == 2; });
  std::string out;
  for (std::size_t i = 0; i < picks.size(); ++i) {
    if (binary) {
      out += picks[i] == 0 ? 'L' : 'R';
    } else {
      if (i) out += '.';
      out += std::to_string(picks[i]);
    }
  }
  return out;
}

}  // namespace

std::string cut_label(const GameTree& tree, const Cut& cut) {
  std::vector<std::uint32_t> picks;
  std::vector<std::uint32_t> fanouts;
  for (const auto& [node, pick] : cut.choices) {
    picks.push_back(pick);
    fanouts.push_back(tree.fanout(node));
  }
  return render_choices(picks, fanouts);
}

std::string ContractLayer::label(std::size_t cut_index) const {
  std::vector<std::uint32_t> picks;
  for (const auto& entry : cuts.at(cut_index).choices) picks.push_back(entry.second);
  return render_choices(picks, fanouts);
}

std::vector<NodeId> GameTree::owned_nodes(PlayerId p) const {
  std::vector<NodeId> out;
  for (NodeId n = 0; n < nodes_.size(); ++n) {
    if (nodes_[n].kind == NodeKind::kDecision && nodes_[n].owner == p.index) out.push_back(n);
  }
  return out;
}

std::vector<NodeId> GameTree::leaves() const {
  std::vector<NodeId> out;
  out.reserve(leaf_count_);
  for (NodeId n = 0; n < nodes_.size(); ++n) {
    if (nodes_[n].kind == NodeKind::kLeaf) out.push_back(n);
  }
  return out;
}

NodeId GameTree::subtree_end(NodeId n) const {
  while (nodes_[n].count > 0) n = child(n, nodes_[n].count - 1);
  return n + 1;
}

bool GameTree::is_bifurcating() const {
  return std::all_of(nodes_.begin(), nodes_.end(), [](const NodeRecord& r) {
    return r.kind != NodeKind::kDecision || r.count == 2;
  });
}

std::shared_ptr<const ContractLayer> GameTree::layer_handle(NodeId n) const {
  auto it = std::lower_bound(layers_.begin(), layers_.end(), n,
                             [](const auto& entry, NodeId id) { return entry.first < id; });
  if (it == layers_.end() || it->first != n) return nullptr;
  return it->second;
}

TreeWriter::TreeWriter(std::shared_ptr<const OutcomeTable> outcomes) {
  tree_.outcomes_ = std::move(outcomes);
}

void TreeWriter::reserve(std::size_t nodes) {
  tree_.nodes_.reserve(nodes);
  tree_.edges_.reserve(nodes);
}

NodeId TreeWriter::add_leaf(OutcomeId outcome) {
  const auto id = next_id();
  tree_.nodes_.push_back({NodeKind::kLeaf, 0, outcome, 0});
  ++tree_.leaf_count_;
  return id;
}

NodeId TreeWriter::add_internal(NodeKind kind, PlayerId owner, std::uint32_t fanout) {
  const auto id = next_id();
  tree_.nodes_.push_back({kind, owner.index, static_cast<std::uint32_t>(tree_.edges_.size()), fanout});
  tree_.edges_.resize(tree_.edges_.size() + fanout, 0);
  if (kind == NodeKind::kContract) ++tree_.contract_count_;
  return id;
}

void TreeWriter::set_child(NodeId parent, std::uint32_t slot, NodeId child) {
  auto& r = tree_.nodes_.at(parent);
  if (slot >= r.count || child <= parent) throw std::logic_error("TreeWriter: bad child slot");
  tree_.edges_[r.first + slot] = child;
}

void TreeWriter::tag_layer(NodeId node, std::shared_ptr<const ContractLayer> layer) {
  auto& layers = tree_.layers_;
  if (!layers.empty() && layers.back().first >= node) {
    throw std::logic_error("TreeWriter: layer tags must be added in preorder");
  }
  layers.emplace_back(node, std::move(layer));
}

NodeId TreeWriter::copy_subtree(const GameTree& source, NodeId node) {
  // Subtrees are contiguous in preorder, so a copy is an id shift.
  const NodeId end = source.subtree_end(node);
  const NodeId base = next_id();
  const auto shift = static_cast<std::int64_t>(base) - static_cast<std::int64_t>(node);
  for (NodeId n = node; n < end; ++n) {
    const auto& r = source.nodes_[n];
    if (r.kind == NodeKind::kLeaf) {
      add_leaf(r.first);
      continue;
    }
    const NodeId id = add_internal(r.kind, PlayerId{r.owner}, r.count);
    const auto first = tree_.nodes_[id].first;
    for (std::uint32_t k = 0; k < r.count; ++k) {
      tree_.edges_[first + k] = static_cast<NodeId>(source.edges_[r.first + k] + shift);
    }
    if (auto tag = source.layer_handle(n)) tag_layer(id, std::move(tag));
  }
  return base;
}

GameTree TreeWriter::finish() && {
  if (tree_.nodes_.empty()) throw MalformedTree("empty tree");
  return std::move(tree_);
}

Draft Draft::leaf(UtilityVector payoffs, std::string label) {
  Draft d;
  d.kind = NodeKind::kLeaf;
  d.payoffs = std::move(payoffs);
  d.label = std::move(label);
  return d;
}

Draft Draft::node(PlayerId owner, std::vector<Draft> children) {
  Draft d;
  d.kind = NodeKind::kDecision;
  d.owner = owner;
  d.children = std::move(children);
  return d;
}

Draft Draft::contract(PlayerId owner, Draft inner) {
  Draft d;
  d.kind = NodeKind::kContract;
  d.owner = owner;
  d.children.push_back(std::move(inner));
  return d;
}

namespace {

void collect_leaves(const Draft& d, std::size_t players, std::vector<UtilityVector>& payoffs,
                    std::vector<std::string>& labels) {
  switch (d.kind) {
    case NodeKind::kLeaf:
      if (d.payoffs.size() != players) {
        throw MalformedTree("leaf has " + std::to_string(d.payoffs.size()) + " payoffs, expected " +
                            std::to_string(players));
      }
      payoffs.push_back(d.payoffs);
      labels.push_back(d.label);
      return;
    case NodeKind::kDecision:
      if (d.children.size() < 2) throw MalformedTree("decision node with fanout < 2");
      break;
    case NodeKind::kContract:
      if (d.children.size() != 1) throw MalformedTree("contract node with fanout != 1");
      break;
  }
  if (d.owner.index >= players) throw MalformedTree("node owner out of range");
  for (const auto& c : d.children) collect_leaves(c, players, payoffs, labels);
}

NodeId write_draft(const Draft& d, TreeWriter& w, OutcomeId& next_outcome) {
  if (d.kind == NodeKind::kLeaf) return w.add_leaf(next_outcome++);
  const NodeId id = w.add_internal(d.kind, d.owner, static_cast<std::uint32_t>(d.children.size()));
  for (std::uint32_t k = 0; k < d.children.size(); ++k) {
    w.set_child(id, k, write_draft(d.children[k], w, next_outcome));
  }
  return id;
}

}  // namespace

GameTree build_tree(std::vector<std::string> players, const Draft& root) {
  if (players.empty()) throw MalformedTree("a game needs at least one player");
  std::set<std::string> unique(players.begin(), players.end());
  if (unique.size() != players.size()) throw MalformedTree("duplicate player name");

  std::vector<UtilityVector> payoffs;
  std::vector<std::string> labels;
  collect_leaves(root, players.size(), payoffs, labels);
  auto table = std::make_shared<const OutcomeTable>(std::move(players), std::move(payoffs),
                                                    std::move(labels));
  TreeWriter w(table);
  OutcomeId next = 0;
  write_draft(root, w, next);
  return std::move(w).finish();
}

GenericityReport validate(const GameTree& tree) {
  const auto& table = tree.outcomes();
  const std::size_t n = tree.player_count();
  for (NodeId id = 0; id < tree.size(); ++id) {
    switch (tree.kind(id)) {
      case NodeKind::kLeaf:
        if (tree.outcome(id) >= table.size() || tree.payoffs(id).size() != n) {
          throw MalformedTree("leaf payoff arity mismatch at node " + std::to_string(id));
        }
        continue;
      case NodeKind::kDecision:
        if (tree.fanout(id) < 2) {
          throw MalformedTree("decision node " + std::to_string(id) + " has fanout < 2");
        }
        break;
      case NodeKind::kContract:
        if (tree.fanout(id) != 1) {
          throw MalformedTree("contract node " + std::to_string(id) + " has fanout != 1");
        }
        break;
    }
    if (tree.owner(id).index >= n) throw MalformedTree("owner out of range");
  }

  GenericityReport report;
  const auto leaves = tree.leaves();
  auto add_tie = [&](NodeId a, NodeId b, std::optional<PlayerId> p) {
    if (report.ties.size() < GenericityReport::kMaxReportedTies) report.ties.push_back({a, b, p});
  };

  // Whole-vector ties.
  std::map<OutcomeId, NodeId> first_with_class;
  for (NodeId leaf : leaves) {
    auto [it, inserted] = first_with_class.emplace(table.vector_class(tree.outcome(leaf)), leaf);
    if (!inserted) {
      report.generic = false;
      add_tie(it->second, leaf, std::nullopt);
    }
  }
  // Per-player ties.
  for (std::uint32_t p = 0; p < n; ++p) {
    std::map<std::uint32_t, NodeId> first_with_rank;
    for (NodeId leaf : leaves) {
      auto [it, inserted] =
          first_with_rank.emplace(table.payoff_rank(tree.outcome(leaf), PlayerId{p}), leaf);
      if (!inserted) {
        report.strictly_generic = false;
        if (table.vector_class(tree.outcome(it->second)) != table.vector_class(tree.outcome(leaf))) {
          add_tie(it->second, leaf, PlayerId{p});
        }
      }
    }
  }
  return report;
}

}  // namespace stackres
