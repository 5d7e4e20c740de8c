#include "stackres/gametext.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

#include "stackres/errors.hpp"

namespace stackres {
namespace {

enum class Tok { kOpen, kClose, kColon, kSlash, kWord, kNewline, kEnd };

struct Token {
  Tok kind;
  std::string_view text;
  SourcePos pos;
};

bool is_delimiter(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';' ||
         c == ':' || c == '/';
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  const auto first = static_cast<unsigned char>(s.front());
  if (!std::isalpha(first) && first != '_') return false;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_' && c != '-' && c != '\'') return false;
  }
  return true;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  // Newlines are only reported when asked for (the header is line based,
  // the tree is not).
  Token next(bool newlines) {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (c == '\n' && newlines) {
        Token t{Tok::kNewline, text_.substr(pos_, 1), here()};
        advance();
        return t;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      break;
    }
    if (pos_ >= text_.size()) return {Tok::kEnd, {}, end_pos()};

    const SourcePos at = here();
    const char c = text_[pos_];
    auto single = [&](Tok kind) {
      Token t{kind, text_.substr(pos_, 1), at};
      advance();
      return t;
    };
    switch (c) {
      case '(':
        return single(Tok::kOpen);
      case ')':
        return single(Tok::kClose);
      case ':':
        return single(Tok::kColon);
      case '/':
        return single(Tok::kSlash);
      default:
        break;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) advance();
    return {Tok::kWord, text_.substr(start, pos_ - start), at};
  }

  Token peek(bool newlines) {
    const auto saved_pos = pos_;
    const auto saved_line = line_;
    const auto saved_col = col_;
    Token t = next(newlines);
    pos_ = saved_pos;
    line_ = saved_line;
    col_ = saved_col;
    return t;
  }

 private:
  SourcePos here() const { return {line_, col_}; }

  // Errors at end of input point at the last character so that positions
  // always fall inside the text.
  SourcePos end_pos() const { return text_.empty() ? SourcePos{1, 1} : last_; }

  void advance() {
    last_ = here();
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  SourcePos last_{1, 1};
};

[[noreturn]] void syntax(const Token& t, std::string expected) {
  throw SyntaxError(t.pos.line, t.pos.column, std::move(expected));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  GameDocument run(std::string name) {
    parse_header();
    Draft root = parse_sexpr();
    const Token tail = lex_.next(false);
    if (tail.kind != Tok::kEnd) syntax(tail, "end of input");

    GameDocument doc;
    doc.name = std::move(name);
    doc.tree = build_tree(players_, root);
    doc.spans = std::move(spans_);
    return doc;
  }

 private:
  void parse_header() {
    Token t = lex_.next(true);
    while (t.kind == Tok::kNewline) t = lex_.next(true);
    if (t.kind != Tok::kWord || t.text != "players") syntax(t, "'players'");
    std::set<std::string_view> seen;
    while (true) {
      t = lex_.next(true);
      if (t.kind == Tok::kNewline || t.kind == Tok::kEnd) break;
      if (t.kind != Tok::kWord || !is_identifier(t.text)) syntax(t, "player name");
      if (!seen.insert(t.text).second) {
        throw DuplicatePlayer(t.pos.line, t.pos.column,
                              "duplicate player '" + std::string(t.text) + "'");
      }
      players_.emplace_back(t.text);
    }
    if (players_.empty()) syntax(t, "player name");
    if (t.kind == Tok::kEnd) syntax(t, "game tree after the players line");
  }

  PlayerId parse_player() {
    const Token t = lex_.next(false);
    if (t.kind != Tok::kWord || !is_identifier(t.text)) syntax(t, "player name");
    for (std::size_t i = 0; i < players_.size(); ++i) {
      if (players_[i] == t.text) return PlayerId{static_cast<std::uint32_t>(i)};
    }
    throw UnknownPlayer(t.pos.line, t.pos.column, "unknown player '" + std::string(t.text) + "'");
  }

  Draft parse_sexpr() {
    const Token open = lex_.next(false);
    if (open.kind != Tok::kOpen) syntax(open, "'('");
    const Token head = lex_.next(false);
    if (head.kind != Tok::kWord) syntax(head, "'leaf', 'node' or 'contract'");

    spans_.push_back(open.pos);

    if (head.text == "leaf") return parse_leaf(open);
    if (head.text == "node") {
      const PlayerId owner = parse_player();
      std::vector<Draft> children;
      while (lex_.peek(false).kind == Tok::kOpen) children.push_back(parse_sexpr());
      const Token close = lex_.next(false);
      if (close.kind != Tok::kClose) syntax(close, children.size() < 2 ? "'('" : "'(' or ')'");
      if (children.size() < 2) syntax(close, "at least two subgames");
      return Draft::node(owner, std::move(children));
    }
    if (head.text == "contract") {
      const PlayerId owner = parse_player();
      Draft inner = parse_sexpr();
      const Token close = lex_.next(false);
      if (close.kind != Tok::kClose) syntax(close, "')' (a contract has one subgame)");
      return Draft::contract(owner, std::move(inner));
    }
    syntax(head, "'leaf', 'node' or 'contract'");
  }

  Draft parse_leaf(const Token& open) {
    std::string label;
    if (lex_.peek(false).kind == Tok::kColon) {
      lex_.next(false);
      const Token name = lex_.next(false);
      if (name.kind != Tok::kWord || !is_identifier(name.text)) syntax(name, "label name");
      label = std::string(name.text);
    }
    UtilityVector payoffs;
    while (true) {
      const Token t = lex_.next(false);
      if (t.kind == Tok::kClose) break;
      if (t.kind != Tok::kWord) syntax(t, payoffs.empty() ? "payoff value" : "payoff value or ')'");
      payoffs.push_back(parse_value(t));
    }
    if (payoffs.empty()) syntax(open, "at least one payoff value");
    if (payoffs.size() != players_.size()) {
      throw ArityError(open.pos.line, open.pos.column,
                       "leaf has " + std::to_string(payoffs.size()) + " payoffs but there are " +
                           std::to_string(players_.size()) + " players");
    }
    return Draft::leaf(std::move(payoffs), std::move(label));
  }

  ExtendedRational parse_value(const Token& t) {
    std::string text(t.text);
    if (lex_.peek(false).kind == Tok::kSlash) {
      if (text.find('.') != std::string::npos || !is_integer(text)) syntax(t, "integer numerator");
      lex_.next(false);
      const Token den = lex_.next(false);
      if (den.kind != Tok::kWord || !is_integer(den.text) || den.text.front() == '-' ||
          den.text.front() == '+') {
        syntax(den, "positive integer denominator");
      }
      text += "/";
      text += den.text;
      try {
        return ExtendedRational::parse(text);
      } catch (const std::invalid_argument&) {
        syntax(den, "non-zero denominator");
      }
    }
    try {
      return ExtendedRational::parse(text);
    } catch (const std::invalid_argument&) {
      syntax(t, "payoff value (integer, p/q, decimal, -inf or inf)");
    }
  }

  static bool is_integer(std::string_view s) {
    if (!s.empty() && s.front() == '-') s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  }

  Lexer lex_;
  std::vector<std::string> players_;
  std::vector<SourcePos> spans_;
};

void emit(const GameTree& tree, NodeId n, std::size_t depth, std::string& out) {
  const auto& table = tree.outcomes();
  const std::string indent(depth * 2, ' ');
  if (!out.empty()) out += '\n';
  out += indent;
  if (tree.is_leaf(n)) {
    const OutcomeId o = tree.outcome(n);
    out += "(leaf";
    if (!table.label(o).empty()) out += " :" + table.label(o);
    for (const auto& v : table.payoffs(o)) out += " " + v.to_string();
    out += ')';
    return;
  }
  const auto& owner = table.player_name(tree.owner(n));
  out += tree.kind(n) == NodeKind::kContract ? "(contract " : "(node ";
  out += owner;
  const ContractLayer* layer = tree.layer(n);
  if (layer) out += " ; contract " + owner;
  for (std::uint32_t k = 0; k < tree.fanout(n); ++k) {
    if (layer && k < layer->cuts.size()) {
      out += '\n' + indent + "  ; cut " + layer->label(k);
    }
    emit(tree, tree.child(n, k), depth + 1, out);
  }
  out += ')';
}

}  // namespace

GameDocument parse_game(std::string_view text, std::string name) {
  return Parser(text).run(std::move(name));
}

std::string serialize(const GameTree& tree) {
  std::string out = "players";
  for (const auto& p : tree.players()) out += " " + p;
  out += '\n';
  std::string body;
  emit(tree, GameTree::root(), 0, body);
  return out + body + '\n';
}

}  // namespace stackres
