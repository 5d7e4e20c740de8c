#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stackres/equilibrium.hpp"
#include "stackres/gametext.hpp"
#include "stackres/rational.hpp"
#include "stackres/resilience.hpp"

namespace stackres {

// Escrow games between a buyer B and a seller S. Payoff vectors are (B, S).
struct CommerceParams {
  Rational x;        // price
  Rational x_prime;  // seller's value of the item
  Rational y;        // buyer's value of the item
  Rational lambda;   // deposit
  Rational gamma;    // oracle error rate, second contract only
};

// Throws InvalidParams unless y > x > x' > 0 and lambda > 0 (and, for the
// second contract, 0 <= gamma < 1/2).
void check_params(int contract, const CommerceParams& params);

// S sends or not, then B accepts or disputes. Leaves left to right:
// (y-x-l, x), (y-x, x), (-x-l, x), (0, -l).
GameDocument build_contract1(const CommerceParams& params);

// As above, but a dispute goes to S, who forfeits or counters through an
// oracle that errs with probability gamma.
GameDocument build_contract2(const CommerceParams& params);

GameDocument build_contract(int contract, const CommerceParams& params);

// The intended behaviour: send and accept; off the path B disputes a
// missing item, S counters a false dispute and forfeits a justified one.
StrategyProfile honest_profile(int contract, const GameTree& tree);

struct Constraint {
  std::string name;
  ExtendedRational lhs;
  std::string relation;  // "<" or ">"
  ExtendedRational rhs;
  bool satisfied = false;
};

struct ConstraintLedger {
  std::vector<Constraint> entries;

  bool all_satisfied() const;
  const Constraint* find(std::string_view name) const;
};

// C1_attack_feasible: y - x - lambda > 0.
// C2_lambda_lower: gamma / (1 - gamma) * x < lambda.
// C2_lambda_upper: (1 - gamma) / gamma * x > lambda (lhs is +inf at gamma 0).
ConstraintLedger check_constraints(int contract, const CommerceParams& params);

struct FastPathResult {
  ContractOrder order;
  UtilityVector leading;  // leading equilibrium of the order's leader
  Verdict verdict = Verdict::kInconclusive;
};

struct AuditReport {
  int contract = 1;
  CommerceParams params;
  GameDocument game;
  ConstraintLedger constraints;
  SpeResult spe;
  ExtendedRational margin;
  // x(1 - 2 gamma), the security level quoted for the second contract.
  std::optional<Rational> quoted_margin;
  ResilienceReport k1;
  ResilienceReport k2;
  std::vector<FastPathResult> fast_path;
  bool paths_agree = true;
  Verdict verdict = Verdict::kInconclusive;
};

AuditReport audit(int contract, const CommerceParams& params,
                  const ExpansionBudget& budget = ExpansionBudget::from_env());

// "full resilient", "not resilient" or "inconclusive".
std::string_view verdict_text(Verdict v);

nlohmann::json to_json(const AuditReport& report);

// "1/10", "0.1" or "3" as an exact rational. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

}  // namespace stackres
