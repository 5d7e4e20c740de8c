#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stackres/game.hpp"

namespace stackres {

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct GameDocument {
  std::string name;
  GameTree tree;
  // Source position of every node, by node id. Empty for built games.
  std::vector<SourcePos> spans;

  const std::vector<std::string>& players() const { return tree.players(); }
};

// Reads the s-expression game language:
//
//   players a b
//   (node a (leaf :u1 1 0) (contract b (node b (leaf 0 1) (leaf 1/2 0.5))))
//
// ';' starts a comment running to the end of the line. Throws SyntaxError,
// ArityError, UnknownPlayer or DuplicatePlayer, all carrying the line and
// column of the offending token.
GameDocument parse_game(std::string_view text, std::string name = "game");

// Canonical text: one node per line, two-space indentation, exact rationals.
// Nodes created by contract expansion are annotated with comments.
std::string serialize(const GameTree& tree);
inline std::string serialize(const GameDocument& doc) { return serialize(doc.tree); }

struct DotOverlay {
  std::vector<NodeId> spe_path;     // drawn bold
  std::vector<NodeId> attack_path;  // drawn bold and red
  std::set<OutcomeId> highlighted;  // leaves filled in (e.g. a region)
};

// Graphviz DOT rendering. Decision nodes show their owner, leaves their
// label and payoff vector, contract nodes are double bordered.
std::string to_dot(const GameDocument& doc, const DotOverlay& overlay = {});

}  // namespace stackres
