// Lazy evaluation of contract games.
//
// The outermost layer of C_P(G) has one child per cut of the leader over
// the rest of the expansion, which is far too many to build. Instead we
// compute, bottom-up, the set of outcomes the leader can make the SPE of a
// subtree by choosing its cut there ("achievable set"). At a node of another
// player q the outcome v of child i survives iff q prefers it strictly to the
// worst achievable outcome of every earlier child and weakly to that of every
// later child, which mirrors the lowest-index tie-break of spe().
//
// With two or more contracts the second player (the "middle") also commits
// over a tree too large to build, so for it we track the family of distinct
// achievable sets, ordered by the first middle cut producing each set.

#include <algorithm>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "internal.hpp"
#include "stackres/errors.hpp"
#include "stackres/expansion.hpp"

namespace stackres {
namespace {

class OutcomeSet {
 public:
  explicit OutcomeSet(std::size_t universe = 0) : words_((universe + 63) / 64, 0) {}

  void insert(OutcomeId o) { words_[o / 64] |= std::uint64_t{1} << (o % 64); }
  bool contains(OutcomeId o) const { return (words_[o / 64] >> (o % 64)) & 1U; }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }
  bool intersects(const OutcomeSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & other.words_[i]) return true;
    }
    return false;
  }
  OutcomeSet& operator|=(const OutcomeSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      for (std::uint64_t w = words_[i]; w; w &= w - 1) {
        f(static_cast<OutcomeId>(i * 64 + static_cast<std::size_t>(__builtin_ctzll(w))));
      }
    }
  }

  friend bool operator==(const OutcomeSet&, const OutcomeSet&) = default;

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto w : words_) h = (h ^ w) * 0x100000001b3ULL;
    return h;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct SetHash {
  std::size_t operator()(const OutcomeSet& s) const { return s.hash(); }
};

// Single integer per (player, outcome) ordering exactly like compare_for.
class Keys {
 public:
  explicit Keys(const OutcomeTable& table) : n_(table.size()) {
    std::uint64_t max_malice = 0;
    for (OutcomeId o = 0; o < n_; ++o) {
      for (std::uint32_t p = 0; p < table.player_count(); ++p) {
        max_malice = std::max<std::uint64_t>(max_malice, table.malice_rank(o, PlayerId{p}));
      }
    }
    keys_.resize(table.player_count() * n_);
    for (std::uint32_t p = 0; p < table.player_count(); ++p) {
      for (OutcomeId o = 0; o < n_; ++o) {
        keys_[p * n_ + o] = std::uint64_t{table.payoff_rank(o, PlayerId{p})} * (max_malice + 2) +
                            (max_malice + 1 - table.malice_rank(o, PlayerId{p}));
      }
    }
  }

  std::uint64_t operator()(PlayerId p, OutcomeId o) const { return keys_[p.index * n_ + o]; }

  std::uint64_t min_of(PlayerId p, const OutcomeSet& s) const {
    std::uint64_t m = UINT64_MAX;
    s.for_each([&](OutcomeId o) { m = std::min(m, (*this)(p, o)); });
    return m;
  }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> keys_;
};

// Outcomes of child sets that can win at a node of q.
OutcomeSet survivors(const Keys& keys, PlayerId q, const std::vector<const OutcomeSet*>& sets,
                     std::size_t universe) {
  const std::size_t k = sets.size();
  std::vector<std::uint64_t> mins(k);
  for (std::size_t j = 0; j < k; ++j) mins[j] = keys.min_of(q, *sets[j]);
  std::vector<std::uint64_t> suffix(k + 1, 0);
  for (std::size_t j = k; j-- > 0;) suffix[j] = std::max(suffix[j + 1], mins[j]);

  OutcomeSet out(universe);
  std::uint64_t prefix = 0;
  bool has_prefix = false;
  for (std::size_t i = 0; i < k; ++i) {
    sets[i]->for_each([&](OutcomeId v) {
      const auto key = keys(q, v);
      if (has_prefix && key <= prefix) return;
      if (key < suffix[i + 1]) return;
      out.insert(v);
    });
    prefix = has_prefix ? std::max(prefix, mins[i]) : mins[i];
    has_prefix = true;
  }
  return out;
}

// Achievable sets of the leader on a materialised tree, with some leader
// nodes possibly fixed to one child.
class LeaderSets {
 public:
  LeaderSets(const GameTree& tree, PlayerId leader, const Keys& keys)
      : tree_(tree),
        leader_(leader),
        keys_(keys),
        universe_(tree.outcomes().size()),
        fixed_(tree.size(), -1),
        parent_(tree.size(), 0),
        sets_(tree.size()) {
    if (tree.has_contracts()) throw ContractNodePresent();
    for (NodeId n = 0; n < tree.size(); ++n) {
      for (NodeId c : tree.children(n)) parent_[c] = n;
    }
    for (NodeId n = static_cast<NodeId>(tree.size()); n-- > 0;) sets_[n] = compute(n, n, nullptr);
  }

  const OutcomeSet& root_set() const { return sets_[GameTree::root()]; }

  // Lexicographically first cut of the leader whose SPE lands in target.
  Cut first_cut_into(const OutcomeSet& target) {
    Cut cut{leader_, {}};
    for (NodeId n : tree_.owned_nodes(leader_)) {
      std::uint32_t pick = 0;
      for (; pick < tree_.fanout(n); ++pick) {
        if (lift(n, sets_[tree_.child(n, pick)], false).intersects(target)) break;
      }
      if (pick == tree_.fanout(n)) throw std::logic_error("leader sets: target unreachable");
      fixed_[n] = static_cast<std::int32_t>(pick);
      lift(n, sets_[tree_.child(n, pick)], true);
      cut.choices.emplace_back(n, pick);
    }
    return cut;
  }

 private:
  // Set at n, with the set of child `over` replaced by *replacement.
  OutcomeSet compute(NodeId n, NodeId over, const OutcomeSet* replacement) const {
    auto set_of = [&](NodeId c) -> const OutcomeSet& {
      return c == over && replacement ? *replacement : sets_[c];
    };
    if (tree_.is_leaf(n)) {
      OutcomeSet s(universe_);
      s.insert(tree_.outcome(n));
      return s;
    }
    const auto kids = tree_.children(n);
    if (tree_.owner(n) == leader_) {
      if (fixed_[n] >= 0) return set_of(kids[static_cast<std::size_t>(fixed_[n])]);
      OutcomeSet s(universe_);
      for (NodeId c : kids) s |= set_of(c);
      return s;
    }
    std::vector<const OutcomeSet*> sets;
    for (NodeId c : kids) sets.push_back(&set_of(c));
    return survivors(keys_, tree_.owner(n), sets, universe_);
  }

  // Propagates a new set for n up to the root; stores it when commit.
  OutcomeSet lift(NodeId n, OutcomeSet value, bool commit) {
    if (commit) sets_[n] = value;
    while (n != GameTree::root()) {
      const NodeId up = parent_[n];
      value = compute(up, n, &value);
      if (commit) sets_[up] = value;
      n = up;
    }
    return value;
  }

  const GameTree& tree_;
  PlayerId leader_;
  const Keys& keys_;
  std::size_t universe_;
  std::vector<std::int32_t> fixed_;
  std::vector<NodeId> parent_;
  std::vector<OutcomeSet> sets_;
};

// Families of achievable sets indexed by the middle player's cuts.
class MiddleFamilies {
 public:
  struct Entry {
    OutcomeSet set;
    // Middle node: {child, entry in child}; other nodes: entry per child.
    std::vector<std::uint32_t> back;
  };

  MiddleFamilies(const GameTree& tree, PlayerId leader, PlayerId middle, const Keys& keys)
      : tree_(tree), leader_(leader), middle_(middle), keys_(keys), universe_(tree.outcomes().size()) {}

  // False when the combination work exceeds the limit.
  bool run(std::uint64_t work_limit) {
    families_.assign(tree_.size(), {});
    std::uint64_t work = 0;
    for (NodeId n = static_cast<NodeId>(tree_.size()); n-- > 0;) {
      auto& fam = families_[n];
      if (tree_.is_leaf(n)) {
        OutcomeSet s(universe_);
        s.insert(tree_.outcome(n));
        fam.push_back({std::move(s), {}});
        continue;
      }
      const auto kids = tree_.children(n);
      std::unordered_map<OutcomeSet, std::uint32_t, SetHash> seen;
      auto add = [&](OutcomeSet s, std::vector<std::uint32_t> back) {
        if (seen.emplace(s, static_cast<std::uint32_t>(fam.size())).second) {
          fam.push_back({std::move(s), std::move(back)});
        }
      };
      if (tree_.owner(n) == middle_) {
        for (std::uint32_t i = 0; i < kids.size(); ++i) {
          const auto& child = families_[kids[i]];
          work = detail::sat_add(work, child.size());
          for (std::uint32_t e = 0; e < child.size(); ++e) add(child[e].set, {i, e});
        }
      } else {
        std::uint64_t combos = 1;
        for (NodeId c : kids) combos = detail::sat_mul(combos, families_[c].size());
        work = detail::sat_add(work, combos);
        if (work > work_limit) return false;
        std::vector<std::uint32_t> digits(kids.size(), 0);
        std::vector<const OutcomeSet*> sets(kids.size());
        const bool leader_node = tree_.owner(n) == leader_;
        while (true) {
          for (std::size_t j = 0; j < kids.size(); ++j) sets[j] = &families_[kids[j]][digits[j]].set;
          if (leader_node) {
            OutcomeSet s(universe_);
            for (auto* p : sets) s |= *p;
            add(std::move(s), digits);
          } else {
            add(survivors(keys_, tree_.owner(n), sets, universe_), digits);
          }
          std::size_t j = kids.size();
          bool done = true;
          while (j-- > 0) {
            if (++digits[j] < families_[kids[j]].size()) {
              done = false;
              break;
            }
            digits[j] = 0;
          }
          if (done) break;
        }
      }
      if (work > work_limit) return false;
    }
    return true;
  }

  const std::vector<Entry>& root_family() const { return families_[GameTree::root()]; }

  // Outcomes that can be the SPE below the middle player's contract layer,
  // with the first family entry realising each.
  std::vector<std::pair<OutcomeId, std::uint32_t>> layer_survivors() const {
    const auto& fam = root_family();
    std::vector<std::uint64_t> worst(fam.size());
    std::uint64_t highest = 0;
    for (std::size_t e = 0; e < fam.size(); ++e) {
      worst[e] = keys_.min_of(middle_, fam[e].set);
      highest = std::max(highest, worst[e]);
    }
    std::vector<std::pair<OutcomeId, std::uint32_t>> out;
    for (OutcomeId v = 0; v < universe_; ++v) {
      const auto key = keys_(middle_, v);
      if (key < highest) continue;
      std::optional<std::uint32_t> first_contain;
      std::optional<std::uint32_t> first_tie;
      for (std::uint32_t e = 0; e < fam.size(); ++e) {
        if (!first_contain && fam[e].set.contains(v)) first_contain = e;
        if (!first_tie && worst[e] == key) first_tie = e;
      }
      if (!first_contain) continue;
      if (first_tie && *first_tie < *first_contain) continue;
      out.emplace_back(v, *first_contain);
    }
    return out;
  }

  // A middle cut whose pruned tree has entry `e` of the root family.
  Cut cut_for(std::uint32_t e) const {
    std::vector<std::int32_t> pick(tree_.size(), -1);
    for (NodeId n : tree_.owned_nodes(middle_)) pick[n] = 0;
    assign(GameTree::root(), e, pick);
    Cut cut{middle_, {}};
    for (NodeId n : tree_.owned_nodes(middle_)) {
      cut.choices.emplace_back(n, static_cast<std::uint32_t>(pick[n]));
    }
    return cut;
  }

 private:
  void assign(NodeId n, std::uint32_t e, std::vector<std::int32_t>& pick) const {
    if (tree_.is_leaf(n)) return;
    const auto& entry = families_[n][e];
    if (tree_.owner(n) == middle_) {
      pick[n] = static_cast<std::int32_t>(entry.back[0]);
      assign(tree_.child(n, entry.back[0]), entry.back[1], pick);
      return;
    }
    for (std::uint32_t k = 0; k < tree_.fanout(n); ++k) assign(tree_.child(n, k), entry.back[k], pick);
  }

  const GameTree& tree_;
  PlayerId leader_;
  PlayerId middle_;
  const Keys& keys_;
  std::size_t universe_;
  std::vector<std::vector<Entry>> families_;
};

constexpr std::uint64_t kAutoMaterializeLimit = 200'000;

OrderEvaluation from_expanded(GameTree expanded, EvalMethod method) {
  const SpeResult r = spe(expanded);
  OrderEvaluation ev;
  ev.outcome = r.outcome;
  ev.payoffs = r.payoffs;
  ev.witness = extract_witness(expanded, r.profile);
  ev.nodes = expanded.size();
  ev.method = method;
  return ev;
}

// Leader commits over a materialised tree whose SPE after the commitment
// should land in target.
OrderEvaluation commit_leader(const GameTree& tree, PlayerId leader, const Keys& keys,
                              const OutcomeSet* target_or_null) {
  LeaderSets sets(tree, leader, keys);
  OutcomeSet target(tree.outcomes().size());
  if (target_or_null) {
    target = *target_or_null;
  } else {
    std::uint64_t best = 0;
    sets.root_set().for_each([&](OutcomeId o) { best = std::max(best, keys(leader, o)); });
    sets.root_set().for_each([&](OutcomeId o) {
      if (keys(leader, o) == best) target.insert(o);
    });
  }
  const Cut cut = sets.first_cut_into(target);
  const GameTree committed = prune(tree, leader, cut);
  const SpeResult r = spe(committed);
  if (!target.contains(r.outcome)) throw std::logic_error("leader sets: witness mismatch");

  OrderEvaluation ev;
  ev.outcome = r.outcome;
  ev.payoffs = r.payoffs;
  ev.witness = extract_witness(committed, r.profile);
  ev.witness.commitments.insert(ev.witness.commitments.begin(),
                                {leader, cut, cut_label(tree, cut)});
  ev.method = EvalMethod::kLazy;
  return ev;
}

OrderEvaluation evaluate_lazy(const GameTree& tree, const ContractOrder& order,
                              const ExpansionBudget& budget) {
  const auto& players = order.players();
  const PlayerId leader = players[0];
  const Keys keys(tree.outcomes());
  const GameTree inner = expand_order(
      tree, ContractOrder({players.begin() + std::min<std::size_t>(2, players.size()), players.end()}),
      budget);

  if (players.size() == 1) {
    auto ev = commit_leader(inner, leader, keys, nullptr);
    ev.nodes = inner.size();
    return ev;
  }

  const PlayerId middle = players[1];
  MiddleFamilies families(inner, leader, middle, keys);
  if (families.run(budget.max_nodes)) {
    const auto candidates = families.layer_survivors();
    std::uint64_t best = 0;
    for (const auto& [v, e] : candidates) best = std::max(best, keys(leader, v));
    std::vector<std::pair<OutcomeId, std::uint32_t>> top;
    for (const auto& c : candidates) {
      if (keys(leader, c.first) == best) top.push_back(c);
    }
    const auto& table = tree.outcomes();
    const bool unambiguous =
        std::all_of(top.begin(), top.end(), [&](const auto& c) {
          return table.vector_class(c.first) == table.vector_class(top.front().first);
        });
    if (!top.empty() && unambiguous) {
      const auto [v, e] = top.front();
      const Cut middle_cut = families.cut_for(e);
      const GameTree below = prune(inner, middle, middle_cut);
      OutcomeSet target(table.size());
      target.insert(v);
      auto ev = commit_leader(below, leader, keys, &target);
      ev.witness.commitments.insert(ev.witness.commitments.begin() + 1,
                                    {middle, middle_cut, cut_label(inner, middle_cut)});
      ev.nodes = inner.size() + below.size();
      return ev;
    }
  }

  // Ties the families cannot order (or too many families): build the middle
  // layer and run the exact single-layer evaluation on it.
  const GameTree with_middle = expand_one(inner, middle, budget);
  auto ev = commit_leader(with_middle, leader, keys, nullptr);
  ev.nodes = inner.size() + with_middle.size();
  return ev;
}

}  // namespace

OrderEvaluation evaluate_order(const GameTree& tree, const ContractOrder& order, EvalMethod method,
                               const ExpansionBudget& budget) {
  if (tree.has_contracts()) throw ContractNodePresent();
  for (PlayerId p : order.players()) {
    if (p.index >= tree.player_count()) {
      throw std::invalid_argument("contract order names a player outside the game");
    }
  }
  if (order.empty()) return from_expanded(tree, EvalMethod::kExpand);
  if (method == EvalMethod::kExpand) {
    return from_expanded(expand_order(tree, order, budget), EvalMethod::kExpand);
  }
  if (method == EvalMethod::kAuto) {
    const std::uint64_t limit = std::min(budget.max_nodes, kAutoMaterializeLimit);
    GameTree current = tree;
    bool fits = true;
    const auto& players = order.players();
    for (auto it = players.rbegin(); it != players.rend(); ++it) {
      if (predicted_expansion_size(current, *it) > limit) {
        fits = false;
        break;
      }
      current = expand_one(current, *it, budget);
    }
    if (fits) return from_expanded(std::move(current), EvalMethod::kExpand);
  }
  return evaluate_lazy(tree, order, budget);
}

}  // namespace stackres
