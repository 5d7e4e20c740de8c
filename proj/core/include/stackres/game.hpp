#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stackres/rational.hpp"

namespace stackres {

struct PlayerId {
  std::uint32_t index = 0;
  friend auto operator<=>(PlayerId, PlayerId) = default;
};

// Preorder position of a node inside one GameTree. Children always carry
// larger ids than their parent.
using NodeId = std::uint32_t;

// Index of a leaf of the original (unexpanded) game. Expanded and pruned
// copies keep pointing at the original leaf, which is how outcomes such as
// u1..u6 stay identifiable after expansion.
using OutcomeId = std::uint32_t;

using UtilityVector = std::vector<ExtendedRational>;

// "(0, 1)" style rendering.
std::string to_string(const UtilityVector& payoffs);

// Players and the payoff vectors of the original leaves, shared (read-only)
// by a game and every tree derived from it. Also precomputes the per-player
// orderings the solvers compare with, so the hot loops never touch rationals.
class OutcomeTable {
 public:
  OutcomeTable(std::vector<std::string> players, std::vector<UtilityVector> payoffs,
               std::vector<std::string> labels);

  std::size_t player_count() const { return players_.size(); }
  const std::vector<std::string>& players() const { return players_; }
  const std::string& player_name(PlayerId p) const { return players_.at(p.index); }
  std::optional<PlayerId> find_player(std::string_view name) const;

  std::size_t size() const { return payoffs_.size(); }
  const UtilityVector& payoffs(OutcomeId o) const { return payoffs_.at(o); }
  const std::string& label(OutcomeId o) const { return labels_.at(o); }
  // The label when present, otherwise "#k" with k the 1-based leaf ordinal.
  std::string name(OutcomeId o) const;

  // Dense rank of p's payoff at o; larger is better for p.
  std::uint32_t payoff_rank(OutcomeId o, PlayerId p) const {
    return payoff_rank_[o * players_.size() + p.index];
  }
  // Dense rank of the other players' combined payoff at o (a -inf for any
  // other player ranks lowest, a +inf highest, otherwise the finite sum).
  // A weakly malicious p prefers lower values among its own payoff ties.
  std::uint32_t malice_rank(OutcomeId o, PlayerId p) const {
    return malice_rank_[o * players_.size() + p.index];
  }
  // Smallest outcome id whose payoff vector equals that of o.
  OutcomeId vector_class(OutcomeId o) const { return vector_class_.at(o); }

 private:
  std::vector<std::string> players_;
  std::vector<UtilityVector> payoffs_;
  std::vector<std::string> labels_;
  std::vector<std::uint32_t> payoff_rank_;
  std::vector<std::uint32_t> malice_rank_;
  std::vector<OutcomeId> vector_class_;
};

// Weakly malicious preference of p between two outcomes: positive when p
// strictly prefers a, negative when it prefers b, zero when indifferent
// (same payoff and same combined payoff for the others).
inline int compare_for(const OutcomeTable& table, PlayerId p, OutcomeId a, OutcomeId b) {
  const auto pa = table.payoff_rank(a, p);
  const auto pb = table.payoff_rank(b, p);
  if (pa != pb) return pa > pb ? 1 : -1;
  const auto ma = table.malice_rank(a, p);
  const auto mb = table.malice_rank(b, p);
  if (ma != mb) return ma < mb ? 1 : -1;
  return 0;
}

enum class NodeKind : std::uint8_t { kLeaf, kDecision, kContract };

class GameTree;

// A pure-strategy commitment: one child index for every decision node the
// player owns in some tree. Choices are sorted by node id.
struct Cut {
  PlayerId player;
  std::vector<std::pair<NodeId, std::uint32_t>> choices;

  std::optional<std::uint32_t> choice_at(NodeId node) const;
  friend bool operator==(const Cut&, const Cut&) = default;
};

// Short rendering of a cut relative to the tree it was enumerated on: one
// "L"/"R" per node when every owned node is binary (matches labels such as
// "LR"), otherwise child indices joined by ".". Empty cuts render as "-".
std::string cut_label(const GameTree& tree, const Cut& cut);

// Marks a decision node that was created by expanding a contract: child i
// is the game left after committing to cuts[i].
struct ContractLayer {
  PlayerId player;
  std::vector<Cut> cuts;
  // Fanouts of the cut nodes in the tree the cuts were taken on, used for
  // labelling.
  std::vector<std::uint32_t> fanouts;

  std::string label(std::size_t cut_index) const;
};

// Immutable extensive-form game tree stored as a flat preorder arena.
class GameTree {
 public:
  struct NodeRecord {
    NodeKind kind;
    std::uint32_t owner;  // player index, unused for leaves
    std::uint32_t first;  // leaf: outcome id; otherwise offset into edges
    std::uint32_t count;  // number of children
  };

  GameTree() = default;

  const OutcomeTable& outcomes() const { return *outcomes_; }
  const std::shared_ptr<const OutcomeTable>& outcome_table() const { return outcomes_; }
  std::size_t player_count() const { return outcomes_->player_count(); }
  const std::vector<std::string>& players() const { return outcomes_->players(); }

  std::size_t size() const { return nodes_.size(); }
  static constexpr NodeId root() { return 0; }

  NodeKind kind(NodeId n) const { return nodes_[n].kind; }
  bool is_leaf(NodeId n) const { return nodes_[n].kind == NodeKind::kLeaf; }
  PlayerId owner(NodeId n) const { return PlayerId{nodes_[n].owner}; }
  std::uint32_t fanout(NodeId n) const { return nodes_[n].count; }
  std::span<const NodeId> children(NodeId n) const {
    const auto& r = nodes_[n];
    return {edges_.data() + r.first, r.count};
  }
  NodeId child(NodeId n, std::uint32_t k) const { return edges_[nodes_[n].first + k]; }
  OutcomeId outcome(NodeId leaf) const { return nodes_[leaf].first; }
  const UtilityVector& payoffs(NodeId leaf) const { return outcomes_->payoffs(outcome(leaf)); }

  bool has_contracts() const { return contract_count_ > 0; }
  std::size_t leaf_count() const { return leaf_count_; }
  // Decision nodes owned by p in preorder.
  std::vector<NodeId> owned_nodes(PlayerId p) const;
  // Leaves in left-to-right order.
  std::vector<NodeId> leaves() const;
  // One past the last node of n's subtree (subtrees are contiguous).
  NodeId subtree_end(NodeId n) const;
  // Every decision node has exactly two children.
  bool is_bifurcating() const;

  const ContractLayer* layer(NodeId n) const { return layer_handle(n).get(); }
  std::shared_ptr<const ContractLayer> layer_handle(NodeId n) const;
  const std::vector<std::pair<NodeId, std::shared_ptr<const ContractLayer>>>& layers() const {
    return layers_;
  }

 private:
  friend class TreeWriter;

  std::shared_ptr<const OutcomeTable> outcomes_;
  std::vector<NodeRecord> nodes_;
  std::vector<NodeId> edges_;
  std::vector<std::pair<NodeId, std::shared_ptr<const ContractLayer>>> layers_;
  std::size_t contract_count_ = 0;
  std::size_t leaf_count_ = 0;
};

// Appends nodes in preorder. A parent must be added before its children;
// child slots are filled with set_child once the child exists.
class TreeWriter {
 public:
  explicit TreeWriter(std::shared_ptr<const OutcomeTable> outcomes);

  void reserve(std::size_t nodes);
  NodeId add_leaf(OutcomeId outcome);
  NodeId add_internal(NodeKind kind, PlayerId owner, std::uint32_t fanout);
  void set_child(NodeId parent, std::uint32_t slot, NodeId child);
  void tag_layer(NodeId node, std::shared_ptr<const ContractLayer> layer);
  NodeId next_id() const { return static_cast<NodeId>(tree_.nodes_.size()); }

  // Copies the subtree of `source` rooted at `node` verbatim, layer tags
  // included. Returns the id of the copy's root.
  NodeId copy_subtree(const GameTree& source, NodeId node);

  GameTree finish() &&;

 private:
  GameTree tree_;
};

// Nested description of a game, convenient for builders and the parser.
struct Draft {
  NodeKind kind = NodeKind::kLeaf;
  PlayerId owner{};
  UtilityVector payoffs;
  std::string label;
  std::vector<Draft> children;

  static Draft leaf(UtilityVector payoffs, std::string label = {});
  static Draft node(PlayerId owner, std::vector<Draft> children);
  static Draft contract(PlayerId owner, Draft inner);
};

// Builds a tree whose leaves become the outcome table, numbered left to
// right. Throws MalformedTree on arity or fanout violations.
GameTree build_tree(std::vector<std::string> players, const Draft& root);

struct LeafTie {
  NodeId first;
  NodeId second;
  // Set when only this player's payoffs tie; empty when the whole vectors do.
  std::optional<PlayerId> player;
};

struct GenericityReport {
  bool generic = true;           // all leaf vectors pairwise distinct
  bool strictly_generic = true;  // for each player, all leaf payoffs distinct
  std::vector<LeafTie> ties;     // at most kMaxReportedTies entries
  static constexpr std::size_t kMaxReportedTies = 64;
};

// Re-checks structural well-formedness (throws MalformedTree) and classifies
// genericity of the leaves.
GenericityReport validate(const GameTree& tree);

}  // namespace stackres
