#include "oracle.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

namespace oracle {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double to_double(const stackres::ExtendedRational& v) {
  const std::string s = v.to_string();
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  const auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

Vec to_vec(const stackres::UtilityVector& u) {
  Vec out;
  for (const auto& v : u) out.push_back(to_double(v));
  return out;
}

namespace {

Node copy(const stackres::GameTree& tree, stackres::NodeId n) {
  Node out;
  out.id = static_cast<int>(n);
  if (tree.is_leaf(n)) {
    out.pay = to_vec(tree.payoffs(n));
    return out;
  }
  if (tree.kind(n) != stackres::NodeKind::kDecision) throw std::invalid_argument("contract node");
  out.owner = static_cast<int>(tree.owner(n).index);
  for (auto c : tree.children(n)) out.kids.push_back(copy(tree, c));
  return out;
}

double others(const Vec& v, int p) {
  bool neg = false;
  bool pos = false;
  double sum = 0;
  for (int q = 0; q < static_cast<int>(v.size()); ++q) {
    if (q == p) continue;
    if (v[q] == -kInf) {
      neg = true;
    } else if (v[q] == kInf) {
      pos = true;
    } else {
      sum += v[q];
    }
  }
  if (neg) return -kInf;
  if (pos) return kInf;
  return sum;
}

void owned(const Node& n, int player, std::vector<const Node*>& out) {
  if (n.owner == player) out.push_back(&n);
  for (const auto& k : n.kids) owned(k, player, out);
}

Node cut_rec(const Node& n, int player, const std::vector<int>& cut, std::size_t& k) {
  if (n.leaf()) return n;
  if (n.owner != player) {
    Node out;
    out.owner = n.owner;
    out.id = n.id;
    for (const auto& c : n.kids) out.kids.push_back(cut_rec(c, player, cut, k));
    return out;
  }
  const int choice = cut.at(k++);
  Node kept;
  for (int i = 0; i < static_cast<int>(n.kids.size()); ++i) {
    Node c = cut_rec(n.kids[i], player, cut, k);
    if (i == choice) kept = std::move(c);
  }
  return kept;
}

}  // namespace

Node from_library(const stackres::GameTree& tree) { return copy(tree, stackres::GameTree::root()); }

std::size_t count_nodes(const Node& n) {
  std::size_t total = 1;
  for (const auto& k : n.kids) total += count_nodes(k);
  return total;
}

Vec spe(const Node& n) {
  if (n.leaf()) return n.pay;
  Vec best = spe(n.kids[0]);
  for (std::size_t i = 1; i < n.kids.size(); ++i) {
    Vec v = spe(n.kids[i]);
    const int p = n.owner;
    if (v[p] > best[p] || (v[p] == best[p] && others(v, p) < others(best, p))) best = std::move(v);
  }
  return best;
}

std::vector<std::vector<int>> cuts(const Node& n, int player) {
  std::vector<const Node*> nodes;
  owned(n, player, nodes);
  std::vector<std::vector<int>> out{{}};
  for (const Node* node : nodes) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : out) {
      for (int c = 0; c < static_cast<int>(node->kids.size()); ++c) {
        auto v = prefix;
        v.push_back(c);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

Node apply_cut(const Node& n, int player, const std::vector<int>& cut) {
  std::size_t k = 0;
  return cut_rec(n, player, cut, k);
}

Node expand_one(const Node& n, int player) {
  Node root;
  root.owner = player;
  for (const auto& c : cuts(n, player)) root.kids.push_back(apply_cut(n, player, c));
  return root;
}

Node expand_order(const Node& n, const std::vector<int>& order) {
  Node g = n;
  for (auto it = order.rbegin(); it != order.rend(); ++it) g = expand_one(g, *it);
  return g;
}

namespace {

void decisions(const Node& n, std::vector<const Node*>& out) {
  if (!n.leaf()) out.push_back(&n);
  for (const auto& k : n.kids) decisions(k, out);
}

const Vec& follow(const Node& n, const std::map<const Node*, int>& choice) {
  if (n.leaf()) return n.pay;
  return follow(n.kids[choice.at(&n)], choice);
}

}  // namespace

std::set<Vec> outcome_set(const Node& n) {
  std::vector<const Node*> nodes;
  decisions(n, nodes);
  std::set<Vec> out;
  std::vector<int> pick(nodes.size(), 0);
  while (true) {
    std::map<const Node*, int> choice;
    for (std::size_t i = 0; i < nodes.size(); ++i) choice[nodes[i]] = pick[i];
    bool perfect = true;
    for (const Node* d : nodes) {
      const double mine = follow(d->kids[choice[d]], choice)[d->owner];
      for (const auto& k : d->kids) {
        if (follow(k, choice)[d->owner] > mine) perfect = false;
      }
    }
    if (perfect) out.insert(follow(n, choice));
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == static_cast<int>(nodes[i]->kids.size())) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return out;
}

namespace {

const Vec& play(const Node& n, const std::vector<int>& profile, int player,
                const std::vector<const Node*>& nodes, const std::vector<int>& strategy) {
  if (n.leaf()) return n.pay;
  int choice = profile.at(n.id);
  if (n.owner == player) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i] == &n) choice = strategy[i];
    }
  }
  return play(n.kids.at(choice), profile, player, nodes, strategy);
}

}  // namespace

double margin(const Node& n, const std::vector<int>& profile, int players) {
  const Vec base = play(n, profile, -1, {}, {});
  double out = kInf;
  for (int i = 0; i < players; ++i) {
    std::vector<const Node*> nodes;
    owned(n, i, nodes);
    for (const auto& strategy : cuts(n, i)) {
      const Vec& v = play(n, profile, i, nodes, strategy);
      if (v != base) out = std::min(out, base[i] - v[i]);
    }
  }
  return out;
}

}  // namespace oracle
