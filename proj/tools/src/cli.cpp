#include "stackres_cli/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stackres/commerce.hpp"
#include "stackres/errors.hpp"
#include "stackres/expansion.hpp"
#include "stackres/gametext.hpp"
#include "stackres/harness.hpp"
#include "stackres/inducible.hpp"
#include "stackres/resilience.hpp"

namespace stackres::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

GameDocument load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  std::stringstream text;
  text << f.rdbuf();
  try {
    return parse_game(text.str(), std::filesystem::path(path).stem().string());
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
  if (!f) throw UsageError("cannot write " + path);
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

GameTree without_contracts(const GameTree& tree, const ExpansionBudget& budget) {
  return tree.has_contracts() ? expand_contracts(tree, budget) : tree;
}

EvalMethod parse_method(const std::string& name) {
  if (name == "expand") return EvalMethod::kExpand;
  if (name == "lazy") return EvalMethod::kLazy;
  return EvalMethod::kAuto;
}

std::string witness_text(const AttackWitness& w, const OutcomeTable& table) {
  std::string out;
  for (const auto& c : w.commitments) {
    if (!out.empty()) out += ' ';
    out += table.player_name(c.player) + "=" + (c.label.empty() ? "-" : c.label);
  }
  return out;
}

int verdict_status(Verdict v) {
  switch (v) {
    case Verdict::kResilient:
      return kOk;
    case Verdict::kNotResilient:
      return kNotResilient;
    case Verdict::kInconclusive:
      return kInconclusive;
  }
  return kInconclusive;
}

// Root-to-leaf path ending at the first leaf with outcome o.
std::vector<NodeId> path_to(const GameTree& tree, OutcomeId o) {
  const auto leaves = tree.leaves();
  const auto it = std::find_if(leaves.begin(), leaves.end(),
                               [&](NodeId n) { return tree.outcome(n) == o; });
  if (it == leaves.end()) return {};
  std::vector<NodeId> path{GameTree::root()};
  NodeId n = GameTree::root();
  while (n != *it) {
    for (NodeId c : tree.children(n)) {
      if (c <= *it && *it < tree.subtree_end(c)) {
        n = c;
        break;
      }
    }
    path.push_back(n);
  }
  return path;
}

struct Common {
  std::uint64_t max_nodes = ExpansionBudget::from_env().max_nodes;
  ExpansionBudget budget() const { return ExpansionBudget{max_nodes}; }
};

void add_max_nodes(CLI::App* cmd, Common& common) {
  cmd->add_option("--max-nodes", common.max_nodes,
                  "Node budget per expansion (default: STACKRES_MAX_NODES or 10000000)");
}

struct SolveArgs {
  std::string file;
  std::string mode = "strict";
  bool json = false;
};

int solve(const SolveArgs& a, const Common& common, std::ostream& out) {
  const GameDocument doc = load(a.file);
  const GameTree tree = without_contracts(doc.tree, common.budget());
  const auto& table = tree.outcomes();
  if (a.mode == "set") {
    const auto set = outcome_set(tree);
    if (a.json) {
      nlohmann::json outcomes = nlohmann::json::array();
      for (const auto& u : set) outcomes.push_back(to_json(u));
      out << dump({{"game", doc.name}, {"mode", "set"}, {"outcomes", outcomes}});
    } else {
      for (const auto& u : set) out << to_string(u) << '\n';
    }
    return kOk;
  }
  const SpeResult s = spe(tree);
  if (a.json) {
    out << dump({{"game", doc.name},
                 {"mode", "strict"},
                 {"outcome", table.name(s.outcome)},
                 {"payoffs", to_json(s.payoffs)}});
  } else {
    out << to_string(s.payoffs) << '\n';
  }
  return kOk;
}

struct ExpandArgs {
  std::string file;
  std::string order;
  std::string output;
};

int expand(const ExpandArgs& a, const Common& common, std::ostream& out) {
  const GameDocument doc = load(a.file);
  GameTree tree = without_contracts(doc.tree, common.budget());
  if (!a.order.empty()) {
    tree = expand_order(tree, ContractOrder::parse(tree.outcomes(), a.order), common.budget());
  }
  const std::string text = serialize(tree);
  if (a.output.empty()) {
    out << text;
  } else {
    write_file(a.output, text);
    out << "wrote " << a.output << " (" << tree.size() << " nodes)\n";
  }
  return kOk;
}

struct ResilienceArgs {
  std::string file;
  std::size_t k = 0;
  std::string order;
  std::string mode = "strict";
  std::string method = "auto";
  unsigned threads = 0;
  bool no_fast_path = false;
  bool json = false;
};

int resilience(const ResilienceArgs& a, const Common& common, std::ostream& out) {
  if ((a.k == 0) == a.order.empty()) throw UsageError("give exactly one of --k and --order");
  const GameDocument doc = load(a.file);
  const GameTree& tree = doc.tree;
  const auto& table = tree.outcomes();
  ResilienceOptions options;
  options.mode = a.mode == "set" ? EquivalenceMode::kSet : EquivalenceMode::kStrict;
  options.budget = common.budget();
  options.method = parse_method(a.method);
  options.threads = a.threads;
  options.fast_path = !a.no_fast_path;

  ResilienceReport report;
  if (!a.order.empty()) {
    const ContractOrder order = ContractOrder::parse(table, a.order);
    report.game = doc.name;
    report.k = order.size();
    report.mode = options.mode;
    report.orders.push_back(is_resilient(tree, order, options));
    report.verdict = combine(report.orders);
  } else if (a.k == tree.player_count()) {
    report = full_resilient(tree, options, doc.name);
  } else {
    report = k_resilient(tree, a.k, options, doc.name);
  }

  if (a.json) {
    out << dump(to_json(report, tree));
  } else {
    for (const auto& o : report.orders) {
      out << o.order.to_string(table) << "  " << to_string(o.verdict);
      if (o.spe_after) out << "  " << to_string(*o.spe_after) << ' ' << table.name(*o.outcome_after);
      if (o.witness && !o.witness->commitments.empty()) {
        out << "  [" << witness_text(*o.witness, table) << ']';
      }
      if (!o.note.empty()) out << "  (" << o.note << ')';
      out << '\n';
    }
    out << "verdict: " << to_string(report.verdict) << '\n';
  }
  return verdict_status(report.verdict);
}

struct InducibleArgs {
  std::string file;
  std::string leader;
  bool json = false;
};

int inducible(const InducibleArgs& a, std::ostream& out) {
  const GameDocument doc = load(a.file);
  const GameTree tree = doc.tree.is_bifurcating() ? doc.tree : binarize(doc.tree);
  const auto& table = tree.outcomes();
  const auto& names = tree.players();
  const auto it = std::find(names.begin(), names.end(), a.leader);
  if (it == names.end()) throw UsageError("unknown player " + a.leader);
  const PlayerId leader(static_cast<std::uint32_t>(it - names.begin()));
  const Region region = inducible_region(tree, leader);
  const LeadingEquilibrium lead = leading_equilibrium(tree, leader);

  if (a.json) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : region) {
      nlohmann::json j = {{"outcome", table.name(e.outcome)}, {"payoffs", to_json(e.payoffs)}};
      j["threat"] = e.threat ? nlohmann::json(table.name(*e.threat)) : nlohmann::json();
      entries.push_back(std::move(j));
    }
    out << dump({{"game", doc.name},
                 {"leader", a.leader},
                 {"region", entries},
                 {"leading", {{"outcome", table.name(lead.outcome)},
                              {"payoffs", to_json(lead.payoffs)}}}});
    return kOk;
  }
  out << "inducible region for " << a.leader << ":\n";
  for (const auto& e : region) {
    out << "  " << table.name(e.outcome) << ' ' << to_string(e.payoffs);
    if (e.threat) out << "  threat " << table.name(*e.threat);
    out << '\n';
  }
  out << "leading equilibrium: " << table.name(lead.outcome) << ' ' << to_string(lead.payoffs)
      << '\n';
  return kOk;
}

struct CommerceArgs {
  int contract = 0;
  std::string x, xprime, y, lambda, gamma;
  std::string game_out;
  bool json = false;
};

int commerce(const CommerceArgs& a, const Common& common, std::ostream& out) {
  if (a.contract == 2 && a.gamma.empty()) throw UsageError("contract 2 needs --gamma");
  CommerceParams p;
  p.x = parse_rational(a.x);
  p.x_prime = parse_rational(a.xprime);
  p.y = parse_rational(a.y);
  p.lambda = parse_rational(a.lambda);
  if (!a.gamma.empty()) p.gamma = parse_rational(a.gamma);
  const AuditReport r = audit(a.contract, p, common.budget());
  if (!a.game_out.empty()) write_file(a.game_out, serialize(r.game));
  if (a.json) {
    out << dump(to_json(r));
    return verdict_status(r.verdict);
  }

  const auto& table = r.game.tree.outcomes();
  auto q = [](const Rational& v) { return ExtendedRational(v).to_string(); };
  out << "contract " << r.contract << ": x=" << q(p.x) << " x'=" << q(p.x_prime) << " y=" << q(p.y)
      << " lambda=" << q(p.lambda);
  if (r.contract == 2) out << " gamma=" << q(p.gamma);
  out << '\n';
  for (const auto& c : r.constraints.entries) {
    out << "constraint " << c.name << ": " << c.lhs.to_string() << ' ' << c.relation << ' '
        << c.rhs.to_string() << (c.satisfied ? "  ok" : "  violated") << '\n';
  }
  out << "spe: " << table.name(r.spe.outcome) << ' ' << to_string(r.spe.payoffs) << '\n';
  out << "margin: " << r.margin.to_string();
  if (r.quoted_margin) out << " (x(1-2gamma) = " << q(*r.quoted_margin) << ')';
  out << '\n';
  for (const auto* rep : {&r.k1, &r.k2}) {
    for (const auto& o : rep->orders) {
      out << "k=" << rep->k << ' ' << o.order.to_string(table) << "  " << to_string(o.verdict);
      if (o.spe_after) out << "  " << table.name(*o.outcome_after) << ' ' << to_string(*o.spe_after);
      if (o.witness) out << "  [" << witness_text(*o.witness, table) << ']';
      out << '\n';
    }
  }
  for (const auto& f : r.fast_path) {
    out << "inducible region " << f.order.to_string(table) << "  " << to_string(f.verdict)
        << "  leading " << to_string(f.leading) << '\n';
  }
  out << "paths agree: " << (r.paths_agree ? "yes" : "no") << '\n';
  out << "verdict: " << verdict_text(r.verdict) << '\n';
  return verdict_status(r.verdict);
}

struct FuzzArgs {
  std::string check;
  std::size_t players = 2;
  std::size_t depth = 3;
  std::size_t games = 100;
  std::uint64_t seed = 1;
  std::size_t max_leaves = 64;
  std::size_t max_branching = 2;
  std::size_t k_max = 0;
  unsigned threads = 0;
  std::string method = "auto";
  std::string csv;
  std::string out_dir;
  bool json = false;
};

int fuzz(const FuzzArgs& a, const Common& common, std::ostream& out) {
  GeneratorConfig config;
  config.players = a.players;
  config.max_depth = a.depth;
  config.max_leaves = a.max_leaves;
  config.max_branching = a.max_branching;
  config.seed = a.seed;
  CampaignOptions options;
  options.games = a.games;
  options.k_max = a.k_max;
  options.budget = common.budget();
  options.method = parse_method(a.method);
  options.threads = a.threads;
  const CampaignResult r = run_campaign(parse_property(a.check), config, options);

  if (!a.csv.empty()) write_file(a.csv, to_csv(r));
  if (!a.out_dir.empty()) write_counterexamples(r, a.out_dir);
  if (a.json) {
    out << dump(to_json(r));
  } else {
    char rate[32];
    std::snprintf(rate, sizeof rate, "%.2f%%", 100 * r.inconclusive_rate());
    out << to_string(r.property) << ": " << r.games << " games, " << r.checks << " checks, "
        << r.inconclusive << " inconclusive (" << rate << "), " << r.counterexamples.size()
        << " counterexamples\n";
    for (const auto& x : r.counterexamples) {
      out << "game " << x.index << " (seed " << x.seed << "): " << x.detail << '\n';
    }
  }
  return r.passed() ? kOk : kNotResilient;
}

struct DotArgs {
  std::string file;
  std::string output;
  std::string annotate;
  std::string order;
};

int dot(const DotArgs& a, const Common& common, std::ostream& out) {
  const GameDocument doc = load(a.file);
  DotOverlay overlay;
  if (!a.annotate.empty()) {
    const GameTree plain = without_contracts(doc.tree, common.budget());
    overlay.spe_path = path_to(doc.tree, spe(plain).outcome);
    if (a.annotate == "attack") {
      if (a.order.empty()) throw UsageError("--annotate attack needs --order");
      const ContractOrder order = ContractOrder::parse(plain.outcomes(), a.order);
      const OrderEvaluation ev = evaluate_order(plain, order, EvalMethod::kAuto, common.budget());
      overlay.attack_path = path_to(doc.tree, ev.outcome);
      overlay.highlighted.insert(ev.outcome);
    }
  }
  const std::string text = to_dot(doc, overlay);
  if (a.output.empty()) {
    out << text;
  } else {
    write_file(a.output, text);
    out << "wrote " << a.output << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stackelberg resilience of extensive-form games", "stackres"};
  app.require_subcommand(1);
  Common common;
  std::function<int()> action;

  const std::vector<std::string> modes{"strict", "set"};
  const std::vector<std::string> methods{"auto", "expand", "lazy"};

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Subgame perfect equilibrium of a game");
  solve_cmd->add_option("file", solve_args.file)->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--mode", solve_args.mode)->check(CLI::IsMember(modes));
  solve_cmd->add_flag("--json", solve_args.json);
  add_max_nodes(solve_cmd, common);
  solve_cmd->callback([&] { action = [&] { return solve(solve_args, common, out); }; });

  ExpandArgs expand_args;
  auto* expand_cmd = app.add_subcommand("expand", "Write the contract game for an order");
  expand_cmd->add_option("file", expand_args.file)->required()->check(CLI::ExistingFile);
  expand_cmd->add_option("--order", expand_args.order, "Players, leader first, e.g. i,j");
  expand_cmd->add_option("-o,--output", expand_args.output);
  add_max_nodes(expand_cmd, common);
  expand_cmd->callback([&] { action = [&] { return expand(expand_args, common, out); }; });

  ResilienceArgs res_args;
  auto* res_cmd = app.add_subcommand("resilience", "Check Stackelberg resilience");
  res_cmd->add_option("file", res_args.file)->required()->check(CLI::ExistingFile);
  auto* k_opt = res_cmd->add_option("--k", res_args.k)->check(CLI::PositiveNumber);
  res_cmd->add_option("--order", res_args.order)->excludes(k_opt);
  res_cmd->add_option("--mode", res_args.mode)->check(CLI::IsMember(modes));
  res_cmd->add_option("--method", res_args.method)->check(CLI::IsMember(methods));
  res_cmd->add_option("--threads", res_args.threads);
  res_cmd->add_flag("--no-fast-path", res_args.no_fast_path);
  res_cmd->add_flag("--json", res_args.json);
  add_max_nodes(res_cmd, common);
  res_cmd->callback([&] { action = [&] { return resilience(res_args, common, out); }; });

  InducibleArgs ind_args;
  auto* ind_cmd = app.add_subcommand("inducible", "Inducible region of a two-player game");
  ind_cmd->add_option("file", ind_args.file)->required()->check(CLI::ExistingFile);
  ind_cmd->add_option("--leader", ind_args.leader)->required();
  ind_cmd->add_flag("--json", ind_args.json);
  ind_cmd->callback([&] { action = [&] { return inducible(ind_args, out); }; });

  CommerceArgs com_args;
  auto* com_cmd = app.add_subcommand("commerce", "Audit an escrow contract");
  com_cmd->add_option("--contract", com_args.contract)->required()->check(CLI::IsMember({1, 2}));
  com_cmd->add_option("--x", com_args.x, "Price")->required();
  com_cmd->add_option("--xprime", com_args.xprime, "Seller's value of the item")->required();
  com_cmd->add_option("--y", com_args.y, "Buyer's value of the item")->required();
  com_cmd->add_option("--lambda", com_args.lambda, "Deposit")->required();
  com_cmd->add_option("--gamma", com_args.gamma, "Oracle error rate (contract 2)");
  com_cmd->add_option("--write-game", com_args.game_out, "Also write the contract game to a file");
  com_cmd->add_flag("--json", com_args.json);
  add_max_nodes(com_cmd, common);
  com_cmd->callback([&] { action = [&] { return commerce(com_args, common, out); }; });

  FuzzArgs fuzz_args;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "Property campaign over random games");
  fuzz_cmd->add_option("--check", fuzz_args.check)
      ->required()
      ->check(CLI::IsMember({"transitivity", "algorithm1", "idempotence"}));
  fuzz_cmd->add_option("--players", fuzz_args.players);
  fuzz_cmd->add_option("--depth", fuzz_args.depth);
  fuzz_cmd->add_option("--games", fuzz_args.games);
  fuzz_cmd->add_option("--seed", fuzz_args.seed);
  fuzz_cmd->add_option("--max-leaves", fuzz_args.max_leaves);
  fuzz_cmd->add_option("--max-branching", fuzz_args.max_branching);
  fuzz_cmd->add_option("--k-max", fuzz_args.k_max, "Transitivity: largest k (default n)");
  fuzz_cmd->add_option("--threads", fuzz_args.threads);
  fuzz_cmd->add_option("--method", fuzz_args.method)->check(CLI::IsMember(methods));
  fuzz_cmd->add_option("--csv", fuzz_args.csv, "Write a summary row");
  fuzz_cmd->add_option("--out", fuzz_args.out_dir, "Directory for counterexample games");
  fuzz_cmd->add_flag("--json", fuzz_args.json);
  add_max_nodes(fuzz_cmd, common);
  fuzz_cmd->callback([&] { action = [&] { return fuzz(fuzz_args, common, out); }; });

  DotArgs dot_args;
  auto* dot_cmd = app.add_subcommand("dot", "Graphviz rendering of a game");
  dot_cmd->add_option("file", dot_args.file)->required()->check(CLI::ExistingFile);
  dot_cmd->add_option("-o,--output", dot_args.output);
  dot_cmd->add_option("--annotate", dot_args.annotate)->check(CLI::IsMember({"spe", "attack"}));
  dot_cmd->add_option("--order", dot_args.order, "Contract order for --annotate attack");
  add_max_nodes(dot_cmd, common);
  dot_cmd->callback([&] { action = [&] { return dot(dot_args, common, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << " (raise --max-nodes)\n";
    return kInconclusive;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

}  // namespace stackres::cli
