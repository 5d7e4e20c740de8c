#include "stackres/resilience.hpp"

#include <chrono>

#include "internal.hpp"
#include "stackres/errors.hpp"
#include "stackres/inducible.hpp"

namespace stackres {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kResilient:
      return "resilient";
    case Verdict::kNotResilient:
      return "not-resilient";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(EquivalenceMode m) {
  return m == EquivalenceMode::kStrict ? "strict" : "set";
}

const OrderResult* ResilienceReport::first_counterexample() const {
  for (const auto& o : orders) {
    if (o.verdict == Verdict::kNotResilient) return &o;
  }
  return nullptr;
}

Verdict combine(const std::vector<OrderResult>& orders) {
  bool inconclusive = false;
  for (const auto& o : orders) {
    if (o.verdict == Verdict::kNotResilient) return Verdict::kNotResilient;
    if (o.verdict == Verdict::kInconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::kInconclusive : Verdict::kResilient;
}

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

OrderResult is_resilient(const GameTree& tree, const ContractOrder& order,
                         const ResilienceOptions& options) {
  OrderResult r;
  r.order = order;
  r.spe_before = spe(tree).payoffs;
  const auto start = Clock::now();
  try {
    if (options.mode == EquivalenceMode::kStrict) {
      OrderEvaluation ev = evaluate_order(tree, order, options.method, options.budget);
      r.spe_after = ev.payoffs;
      r.outcome_after = ev.outcome;
      r.nodes = ev.nodes;
      r.method = ev.method;
      if (ev.payoffs == r.spe_before) {
        r.verdict = Verdict::kResilient;
      } else {
        r.verdict = Verdict::kNotResilient;
        r.witness = std::move(ev.witness);
      }
    } else {
      // Outcome sets need the whole contract game.
      const GameTree expanded = expand_order(tree, order, options.budget);
      const SpeResult s = spe(expanded);
      r.spe_after = s.payoffs;
      r.outcome_after = s.outcome;
      r.nodes = expanded.size();
      r.method = EvalMethod::kExpand;
      if (equivalent(tree, expanded, EquivalenceMode::kSet)) {
        r.verdict = Verdict::kResilient;
      } else {
        r.verdict = Verdict::kNotResilient;
        r.witness = extract_witness(expanded, s.profile);
      }
    }
  } catch (const BudgetExceeded& e) {
    r.verdict = Verdict::kInconclusive;
    r.note = e.what();
  }
  r.millis = millis_since(start);
  return r;
}

namespace {

ResilienceReport run_orders(const GameTree& tree, std::size_t k, const ResilienceOptions& options,
                            std::string game) {
  if (k < 1 || k > tree.player_count()) {
    throw std::invalid_argument("k must be between 1 and the number of players");
  }
  ResilienceReport report;
  report.game = std::move(game);
  report.k = k;
  report.mode = options.mode;
  const auto orders = injective_orders(tree.player_count(), k);
  if (options.stop_at_first) {
    for (const auto& order : orders) {
      report.orders.push_back(is_resilient(tree, order, options));
      if (report.orders.back().verdict == Verdict::kNotResilient) break;
    }
  } else {
    report.orders.resize(orders.size());
    detail::parallel_for(orders.size(), options.threads, [&](std::size_t i) {
      report.orders[i] = is_resilient(tree, orders[i], options);
    });
  }
  report.verdict = combine(report.orders);
  return report;
}

}  // namespace

ResilienceReport k_resilient(const GameTree& tree, std::size_t k, const ResilienceOptions& options,
                             std::string game) {
  return run_orders(tree, k, options, std::move(game));
}

ResilienceReport full_resilient(const GameTree& tree, const ResilienceOptions& options,
                                std::string game) {
  const bool fast = options.fast_path && options.mode == EquivalenceMode::kStrict &&
                    tree.player_count() == 2 && !tree.has_contracts() && tree.is_bifurcating() &&
                    validate(tree).strictly_generic;
  if (!fast) return run_orders(tree, tree.player_count(), options, std::move(game));

  ResilienceReport report;
  report.game = std::move(game);
  report.k = 2;
  report.mode = options.mode;
  report.path = "inducible-region";
  const UtilityVector before = spe(tree).payoffs;
  for (const auto& order : injective_orders(2, 2)) {
    const auto start = Clock::now();
    OrderResult r;
    r.order = order;
    r.spe_before = before;
    const LeadingEquilibrium lead = leading_equilibrium(tree, order.leader());
    r.spe_after = lead.payoffs;
    r.outcome_after = lead.outcome;
    r.nodes = tree.size();
    r.method = EvalMethod::kLazy;
    if (lead.payoffs == before) {
      r.verdict = Verdict::kResilient;
    } else {
      r.verdict = Verdict::kNotResilient;
      try {
        r.witness = evaluate_order(tree, order, EvalMethod::kLazy, options.budget).witness;
      } catch (const BudgetExceeded&) {
        r.witness = AttackWitness{{}, lead.outcome, lead.payoffs};
      }
    }
    r.millis = millis_since(start);
    report.orders.push_back(std::move(r));
    if (options.stop_at_first && report.orders.back().verdict == Verdict::kNotResilient) break;
  }
  report.verdict = combine(report.orders);
  return report;
}

nlohmann::json to_json(const UtilityVector& payoffs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : payoffs) out.push_back(v.to_string());
  return out;
}

nlohmann::json to_json(const AttackWitness& witness, const GameTree& tree) {
  const auto& table = tree.outcomes();
  nlohmann::json commitments = nlohmann::json::array();
  for (const auto& c : witness.commitments) {
    commitments.push_back({{"player", table.player_name(c.player)}, {"cut", c.label}});
  }
  return {{"commitments", commitments},
          {"outcome", table.name(witness.outcome)},
          {"payoffs", to_json(witness.payoffs)}};
}

namespace {

nlohmann::json order_names(const ContractOrder& order, const OutcomeTable& table) {
  nlohmann::json names = nlohmann::json::array();
  for (PlayerId p : order.players()) names.push_back(table.player_name(p));
  return names;
}

}  // namespace

nlohmann::json to_json(const ResilienceReport& report, const GameTree& tree, bool timing) {
  const auto& table = tree.outcomes();
  nlohmann::json orders = nlohmann::json::array();
  for (const auto& o : report.orders) {
    nlohmann::json entry = {{"order", order_names(o.order, table)},
                            {"verdict", to_string(o.verdict)},
                            {"spe_before", to_json(o.spe_before)},
                            {"nodes", o.nodes}};
    entry["spe_after"] = o.spe_after ? to_json(*o.spe_after) : nlohmann::json();
    if (o.outcome_after) entry["outcome_after"] = table.name(*o.outcome_after);
    if (o.witness) entry["witness"] = to_json(*o.witness, tree);
    if (!o.note.empty()) entry["note"] = o.note;
    if (timing) entry["millis"] = o.millis;
    orders.push_back(std::move(entry));
  }
  nlohmann::json counterexample;
  if (const OrderResult* c = report.first_counterexample()) {
    counterexample = {{"order", order_names(c->order, table)},
                      {"outcome", table.name(*c->outcome_after)},
                      {"payoffs", to_json(*c->spe_after)}};
  }
  return {{"game", report.game},
          {"k", report.k},
          {"mode", to_string(report.mode)},
          {"orders", orders},
          {"counterexample", counterexample},
          {"path", report.path},
          {"verdict", to_string(report.verdict)}};
}

}  // namespace stackres
