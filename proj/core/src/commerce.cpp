#include "stackres/commerce.hpp"

#include <algorithm>
#include <stdexcept>

#include "stackres/errors.hpp"
#include "stackres/inducible.hpp"

namespace stackres {

Rational parse_rational(std::string_view text) {
  const ExtendedRational v = ExtendedRational::parse(text);
  if (!v.is_finite()) throw std::invalid_argument("expected a finite rational, got " + std::string(text));
  return v.value();
}

void check_params(int contract, const CommerceParams& p) {
  if (contract != 1 && contract != 2) throw InvalidParams("contract must be 1 or 2");
  if (!(p.y > p.x && p.x > p.x_prime && p.x_prime > 0)) {
    throw InvalidParams("parameters must satisfy y > x > x' > 0");
  }
  if (!(p.lambda > 0)) throw InvalidParams("the deposit lambda must be positive");
  if (contract == 2 && !(p.gamma >= 0 && p.gamma < Rational(1, 2))) {
    throw InvalidParams("gamma must satisfy 0 <= gamma < 1/2");
  }
}

namespace {

const std::vector<std::string> kPlayers = {"B", "S"};
constexpr PlayerId kBuyer{0};
constexpr PlayerId kSeller{1};

Draft leaf(const std::string& label, const Rational& buyer, const Rational& seller) {
  return Draft::leaf({ExtendedRational(buyer), ExtendedRational(seller)}, label);
}

GameDocument document(std::string name, const Draft& root) {
  GameDocument doc;
  doc.name = std::move(name);
  doc.tree = build_tree(kPlayers, root);
  return doc;
}

}  // namespace

GameDocument build_contract1(const CommerceParams& p) {
  check_params(1, p);
  const Rational& x = p.x;
  const Rational& y = p.y;
  const Rational& l = p.lambda;
  // send: B disputes or accepts; not send: B accepts or disputes.
  Draft root = Draft::node(
      kSeller, {Draft::node(kBuyer, {leaf("u1", y - x - l, x), leaf("u2", y - x, x)}),
                Draft::node(kBuyer, {leaf("u3", -x - l, x), leaf("u4", 0, -l)})});
  return document("contract1", root);
}

GameDocument build_contract2(const CommerceParams& p) {
  check_params(2, p);
  const Rational& x = p.x;
  const Rational& xp = p.x_prime;
  const Rational& y = p.y;
  const Rational& l = p.lambda;
  const Rational& g = p.gamma;
  const Rational one(1);
  // send: B disputes (S forfeits or counters) or accepts;
  // not send: B accepts or disputes (S counters or forfeits).
  Draft left = Draft::node(
      kBuyer,
      {Draft::node(kSeller, {leaf("u1", y, -xp),
                             leaf("u2", y * g - (x + l) * (one - g), x * (one - g) - l * g - xp)}),
       leaf("u3", y - x, x - xp)});
  Draft right = Draft::node(
      kBuyer, {leaf("u4", -x, x),
               Draft::node(kSeller, {leaf("u5", -(x + l) * g, x * g - l * (one - g)),
                                     leaf("u6", 0, 0)})});
  return document("contract2", Draft::node(kSeller, {std::move(left), std::move(right)}));
}

GameDocument build_contract(int contract, const CommerceParams& params) {
  if (contract == 1) return build_contract1(params);
  if (contract == 2) return build_contract2(params);
  throw InvalidParams("contract must be 1 or 2");
}

StrategyProfile honest_profile(int contract, const GameTree& tree) {
  // Node ids follow the builders' preorder.
  StrategyProfile s(tree.size());
  if (contract == 1) {
    s.set(0, 0);  // send
    s.set(1, 1);  // accept
    s.set(4, 1);  // dispute
    return s;
  }
  if (contract == 2) {
    s.set(0, 0);  // send
    s.set(1, 1);  // accept
    s.set(2, 1);  // counter
    s.set(6, 1);  // dispute
    s.set(8, 1);  // forfeit
    return s;
  }
  throw InvalidParams("contract must be 1 or 2");
}

bool ConstraintLedger::all_satisfied() const {
  return std::all_of(entries.begin(), entries.end(), [](const Constraint& c) { return c.satisfied; });
}

const Constraint* ConstraintLedger::find(std::string_view name) const {
  for (const auto& c : entries) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ConstraintLedger check_constraints(int contract, const CommerceParams& p) {
  ConstraintLedger ledger;
  auto add = [&](std::string name, ExtendedRational lhs, std::string rel, ExtendedRational rhs) {
    const bool ok = rel == "<" ? lhs < rhs : lhs > rhs;
    ledger.entries.push_back({std::move(name), std::move(lhs), std::move(rel), std::move(rhs), ok});
  };
  if (contract == 1) {
    add("C1_attack_feasible", ExtendedRational(Rational(p.y - p.x - p.lambda)), ">", ExtendedRational(0));
  } else {
    const Rational one(1);
    add("C2_lambda_lower", p.gamma < one ? ExtendedRational(p.gamma / (one - p.gamma) * p.x)
                                         : ExtendedRational::pos_inf(),
        "<", p.lambda);
    add("C2_lambda_upper",
        p.gamma == 0 ? ExtendedRational::pos_inf() : ExtendedRational((one - p.gamma) / p.gamma * p.x),
        ">", p.lambda);
  }
  return ledger;
}

AuditReport audit(int contract, const CommerceParams& params, const ExpansionBudget& budget) {
  AuditReport r;
  r.contract = contract;
  r.params = params;
  r.game = build_contract(contract, params);
  const GameTree& tree = r.game.tree;
  r.constraints = check_constraints(contract, params);
  r.spe = spe(tree);
  r.margin = security_margin(tree, honest_profile(contract, tree));
  if (contract == 2) r.quoted_margin = params.x * (Rational(1) - 2 * params.gamma);

  ResilienceOptions options;
  options.budget = budget;
  options.fast_path = false;
  options.threads = 1;
  r.k1 = k_resilient(tree, 1, options, r.game.name);
  r.k2 = k_resilient(tree, 2, options, r.game.name);

  for (const auto& order : injective_orders(2, 2)) {
    FastPathResult f;
    f.order = order;
    f.leading = leading_equilibrium(tree, order.leader()).payoffs;
    f.verdict = f.leading == r.spe.payoffs ? Verdict::kResilient : Verdict::kNotResilient;
    for (const auto& o : r.k2.orders) {
      if (o.order == order && o.verdict != Verdict::kInconclusive && o.verdict != f.verdict) {
        r.paths_agree = false;
      }
    }
    r.fast_path.push_back(std::move(f));
  }
  r.verdict = r.k2.verdict;
  return r;
}

namespace {

nlohmann::json order_names(const ContractOrder& order, const GameTree& tree) {
  nlohmann::json names = nlohmann::json::array();
  for (PlayerId p : order.players()) names.push_back(tree.outcomes().player_name(p));
  return names;
}

}  // namespace

std::string_view verdict_text(Verdict v) {
  switch (v) {
    case Verdict::kResilient:
      return "full resilient";
    case Verdict::kNotResilient:
      return "not resilient";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

nlohmann::json to_json(const AuditReport& r) {
  const GameTree& tree = r.game.tree;
  const auto& table = tree.outcomes();
  nlohmann::json params = {{"x", ExtendedRational(r.params.x).to_string()},
                           {"xprime", ExtendedRational(r.params.x_prime).to_string()},
                           {"y", ExtendedRational(r.params.y).to_string()},
                           {"lambda", ExtendedRational(r.params.lambda).to_string()}};
  if (r.contract == 2) params["gamma"] = ExtendedRational(r.params.gamma).to_string();

  nlohmann::json constraints = nlohmann::json::object();
  for (const auto& c : r.constraints.entries) {
    constraints[c.name] = {{"lhs", c.lhs.to_string()},
                           {"relation", c.relation},
                           {"rhs", c.rhs.to_string()},
                           {"satisfied", c.satisfied}};
  }

  auto verdicts = [&](const ResilienceReport& rep) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& o : rep.orders) {
      nlohmann::json e = {{"order", order_names(o.order, tree)}, {"verdict", to_string(o.verdict)}};
      e["spe_after"] = o.spe_after ? to_json(*o.spe_after) : nlohmann::json();
      if (o.outcome_after) e["outcome_after"] = table.name(*o.outcome_after);
      out.push_back(std::move(e));
    }
    return out;
  };

  nlohmann::json witnesses = nlohmann::json::array();
  for (const auto* rep : {&r.k1, &r.k2}) {
    for (const auto& o : rep->orders) {
      if (!o.witness) continue;
      nlohmann::json w = to_json(*o.witness, tree);
      w["order"] = order_names(o.order, tree);
      witnesses.push_back(std::move(w));
    }
  }

  nlohmann::json fast = nlohmann::json::array();
  for (const auto& f : r.fast_path) {
    fast.push_back({{"order", order_names(f.order, tree)},
                    {"leading", to_json(f.leading)},
                    {"verdict", to_string(f.verdict)}});
  }

  nlohmann::json out = {
      {"contract", r.contract},
      {"params", params},
      {"constraints", constraints},
      {"spe", {{"outcome", table.name(r.spe.outcome)}, {"payoffs", to_json(r.spe.payoffs)}}},
      {"margin", r.margin.to_string()},
      {"resilience", {{"k1", verdicts(r.k1)}, {"k2", verdicts(r.k2)}}},
      {"fast_path", fast},
      {"paths_agree", r.paths_agree},
      {"witnesses", witnesses},
      {"verdict", verdict_text(r.verdict)},
  };
  if (r.quoted_margin) out["quoted_margin"] = ExtendedRational(*r.quoted_margin).to_string();
  return out;
}

}  // namespace stackres
