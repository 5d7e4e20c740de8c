#pragma once

// Slow reference implementations used to cross-check the library. They work
// on their own naive tree type and share no code with the solvers; payoffs
// are doubles, which is exact for the small integers used in tests.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "stackres/game.hpp"

namespace oracle {

using Vec = std::vector<double>;

struct Node {
  int owner = -1;  // -1 for leaves
  int id = -1;     // preorder id in the source tree; -1 for copies
  Vec pay;
  std::vector<Node> kids;

  bool leaf() const { return owner < 0; }
};

double to_double(const stackres::ExtendedRational& v);
Vec to_vec(const stackres::UtilityVector& u);

// Copies a contract-free library tree.
Node from_library(const stackres::GameTree& tree);

std::size_t count_nodes(const Node& n);

// Owner maximises its payoff, then minimises the sum of the others'
// payoffs (-inf first, +inf last), then takes the first child.
Vec spe(const Node& n);

// Every choice vector of `player`, nodes in preorder, earlier nodes varying
// slowest.
std::vector<std::vector<int>> cuts(const Node& n, int player);
Node apply_cut(const Node& n, int player, const std::vector<int>& cut);
Node expand_one(const Node& n, int player);
// Last player first.
Node expand_order(const Node& n, const std::vector<int>& order);

// Realised vectors of every subgame perfect pure profile, found by
// enumerating all profiles.
std::set<Vec> outcome_set(const Node& n);

// Profile given as a child index per source node id. Smallest loss from a
// unilateral deviation that changes the outcome vector; +inf if none.
double margin(const Node& n, const std::vector<int>& profile, int players);

}  // namespace oracle
