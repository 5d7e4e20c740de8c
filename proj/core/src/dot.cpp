#include <set>
#include <utility>

#include "stackres/gametext.hpp"

namespace stackres {
namespace {

std::string dot_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::set<std::pair<NodeId, NodeId>> path_edges(const std::vector<NodeId>& path) {
  std::set<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 1; i < path.size(); ++i) edges.emplace(path[i - 1], path[i]);
  return edges;
}

}  // namespace

std::string to_dot(const GameDocument& doc, const DotOverlay& overlay) {
  const GameTree& tree = doc.tree;
  const auto& table = tree.outcomes();
  const auto spe_edges = path_edges(overlay.spe_path);
  const auto attack_edges = path_edges(overlay.attack_path);

  std::string out = "digraph " + dot_string(doc.name) + " {\n";
  out += "  node [fontname=\"Helvetica\"];\n";
  for (NodeId n = 0; n < tree.size(); ++n) {
    out += "  n" + std::to_string(n) + " [";
    if (tree.is_leaf(n)) {
      const OutcomeId o = tree.outcome(n);
      std::string label = to_string(table.payoffs(o));
      if (!table.label(o).empty()) label = table.label(o) + " " + label;
      out += "shape=plaintext, label=" + dot_string(label);
      if (overlay.highlighted.count(o)) out += ", style=filled, fillcolor=lightgrey";
    } else {
      out += "shape=circle, label=" + dot_string(table.player_name(tree.owner(n)));
      if (tree.kind(n) == NodeKind::kContract) out += ", peripheries=2";
    }
    out += "];\n";
  }
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (tree.is_leaf(n)) continue;
    const ContractLayer* layer = tree.layer(n);
    for (std::uint32_t k = 0; k < tree.fanout(n); ++k) {
      const NodeId c = tree.child(n, k);
      std::vector<std::string> attrs;
      if (layer && k < layer->cuts.size()) attrs.push_back("label=" + dot_string(layer->label(k)));
      const bool attacked = attack_edges.count({n, c}) > 0;
      if (attacked || spe_edges.count({n, c})) {
        attrs.push_back("style=bold");
        attrs.push_back("penwidth=3");
      }
      if (attacked) attrs.push_back("color=red");
      out += "  n" + std::to_string(n) + " -> n" + std::to_string(c);
      if (!attrs.empty()) {
        out += " [";
        for (std::size_t i = 0; i < attrs.size(); ++i) {
          if (i) out += ", ";
          out += attrs[i];
        }
        out += ']';
      }
      out += ";\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace stackres
