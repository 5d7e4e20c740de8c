// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "golden_cases.hpp"
#include "stackres/commerce.hpp"
#include "stackres/expansion.hpp"
#include "stackres/gametext.hpp"
#include "stackres/harness.hpp"
#include "stackres/inducible.hpp"
#include "stackres/resilience.hpp"
#include "stackres_cli/cli.hpp"

using namespace stackres;

namespace {

using Clock = std::chrono::steady_clock;

// Collects mismatches for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  template <typename A, typename B>
  void equal(const A& actual, const B& expected, const std::string& what) {
    if (!(actual == expected)) {
      std::ostringstream s;
      s << what << ": got " << actual << ", want " << expected;
      failures_.push_back(s.str());
    }
  }
  void note(const std::string& n) { notes_.push_back(n); }

  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

struct Criterion {
  int number;
  std::string title;
  double limit_seconds;  // 0 means no limit
  std::function<void(Check&)> body;
};

ResilienceOptions serial() {
  ResilienceOptions o;
  o.threads = 1;
  return o;
}

std::string vec(const UtilityVector& v) { return to_string(v); }

std::string name(const GameTree& tree, OutcomeId o) { return tree.outcomes().name(o); }

std::vector<std::string> region_names(const GameTree& tree, const Region& r) {
  std::vector<std::string> out;
  for (const auto& e : r) out.push_back(name(tree, e.outcome));
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out + "}";
}

struct CliResult {
  int status;
  std::string out;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(args, out, err);
  return {status, out.str()};
}

void doomsday(Check& c) {
  const auto solve = cli({"solve", fixtures::corpus_path("doomsday.game")});
  c.equal(solve.status, 0, "solve exit status");
  c.equal(solve.out, std::string("(0, 1)\n"), "solve output");
  const auto doc = fixtures::corpus("doomsday.game");
  const auto r = is_resilient(doc.tree, ContractOrder::parse(doc.tree.outcomes(), "i"), serial());
  c.equal(to_string(r.verdict), std::string_view("not-resilient"), "order (i)");
  c.expect(r.spe_after && vec(*r.spe_after) == "(1, 0)", "expanded outcome (1, 0)");
  const auto res = cli({"resilience", fixtures::corpus_path("doomsday.game"), "--order", "i"});
  c.equal(res.status, 1, "resilience exit status");
  c.expect(res.out.find("not-resilient  (1, 0)") != std::string::npos, "resilience output");
}

void fig2(Check& c) {
  const auto doc = fixtures::corpus("fig2.game");
  const auto& t = doc.tree;
  c.equal(vec(spe(t).payoffs), std::string("(0, 10, 10)"), "spe");
  auto options = serial();
  options.method = EvalMethod::kExpand;
  const auto k1 = k_resilient(t, 1, options);
  c.equal(k1.orders.size(), std::size_t{3}, "k=1 orders");
  c.equal(to_string(k1.verdict), std::string_view("resilient"), "k=1");
  const auto k2 = k_resilient(t, 2, options);
  c.equal(to_string(k2.verdict), std::string_view("not-resilient"), "k=2");
  const auto k3 = k_resilient(t, 3, options);
  c.equal(to_string(k3.verdict), std::string_view("not-resilient"), "k=3");
  auto at = [&](const ResilienceReport& report, const std::string& order) {
    const auto o = ContractOrder::parse(t.outcomes(), order);
    for (const auto& r : report.orders) {
      if (r.order == o && r.spe_after) return vec(*r.spe_after);
    }
    return std::string("missing");
  };
  c.equal(at(k2, "i,j"), std::string("(10, -1, -10)"), "(i,j)");
  c.equal(at(k3, "i,j,k"), std::string("(10, -1, -10)"), "(i,j,k)");
  c.equal(at(k3, "k,i,j"), std::string("(0, 10, 10)"), "(k,i,j)");
  std::uint64_t nodes = 0;
  for (const auto& r : k3.orders) nodes += r.nodes;
  c.note(std::to_string(nodes) + " nodes expanded for k=3");
}

CommerceParams contract1_params() { return {10, 5, 30, 15, 0}; }
CommerceParams contract2_params() { return {10, 5, 20, 10, Rational(1, 10)}; }

void contract1(Check& c) {
  const auto a = audit(1, contract1_params());
  const auto& t = a.game.tree;
  c.equal(name(t, a.spe.outcome) + " " + vec(a.spe.payoffs), std::string("u2 (20, 10)"), "spe");
  const PlayerId seller{1};
  const PlayerId buyer{0};
  c.equal(join(region_names(t, inducible_region(t, seller))), std::string("{u1,u2,u4}"),
          "S-leading region");
  const auto s_lead = leading_equilibrium(t, seller);
  c.equal(name(t, s_lead.outcome) + " " + vec(s_lead.payoffs), std::string("u1 (5, 10)"),
          "S-leading equilibrium");
  c.equal(name(t, leading_equilibrium(t, buyer).outcome), std::string("u2"),
          "B-leading equilibrium");
  c.equal(a.k1.orders.size(), std::size_t{2}, "single orders");
  c.equal(to_string(a.k1.verdict), std::string_view("resilient"), "k=1");
  c.equal(verdict_text(a.verdict), std::string_view("not resilient"), "overall");
}

void contract2(Check& c) {
  const auto a = audit(2, contract2_params());
  const auto& t = a.game.tree;
  c.equal(name(t, a.spe.outcome) + " " + vec(a.spe.payoffs), std::string("u3 (10, 5)"), "spe");
  c.equal(to_string(a.k1.verdict), std::string_view("resilient"), "k=1 (expansion)");
  c.equal(to_string(a.k2.verdict), std::string_view("resilient"), "k=2 (expansion)");
  c.equal(a.k1.orders.size() + a.k2.orders.size(), std::size_t{4}, "orders");
  c.equal(a.fast_path.size(), std::size_t{2}, "fast-path orders");
  for (const auto& f : a.fast_path) {
    c.equal(to_string(f.verdict), std::string_view("resilient"), "fast path");
  }
  c.expect(a.paths_agree, "fast path and expansion agree");
  const auto full = full_resilient(t, serial());
  c.equal(full.path, std::string("inducible-region"), "full_resilient dispatch");
  c.equal(to_string(full.verdict), std::string_view("resilient"), "full_resilient");
  c.equal(verdict_text(a.verdict), std::string_view("full resilient"), "overall");
}

void grid(Check& c) {
  std::size_t c2_points = 0;
  std::size_t c2_bad = 0;
  for (int x : {2, 5, 10, 40}) {
    for (const Rational& xp : {Rational(1, 2), Rational(x, 2), Rational(x) - Rational(1, 3)}) {
      for (const Rational& y : {Rational(x) + 1, Rational(2 * x), Rational(10 * x)}) {
        for (const Rational& l : {Rational(x, 5), Rational(x), Rational(3 * x), Rational(9 * x)}) {
          for (const Rational& g : {Rational(0), Rational(1, 20), Rational(1, 10), Rational(1, 5),
                                    Rational(1, 3)}) {
            const CommerceParams p{x, xp, y, l, g};
            if (!check_constraints(2, p).all_satisfied()) continue;
            ++c2_points;
            const auto a = audit(2, p);
            if (a.verdict != Verdict::kResilient || !a.paths_agree ||
                name(a.game.tree, a.spe.outcome) != "u3") {
              ++c2_bad;
            }
          }
        }
      }
    }
  }
  c.expect(c2_points >= 200, "at least 200 Contract 2 points");
  c.equal(c2_bad, std::size_t{0}, "Contract 2 points not fully resilient");
  c.note(std::to_string(c2_points) + " Contract 2 points");

  std::size_t c1_points = 0;
  std::size_t c1_bad = 0;
  for (int x : {2, 5, 10, 40}) {
    for (const Rational& y : {Rational(x) + 1, Rational(2 * x), Rational(3 * x), Rational(10 * x)}) {
      for (int step = 1; step <= 6; ++step) {
        const Rational l = (y - x) * step / 7;
        const CommerceParams p{x, Rational(x, 2), y, l, 0};
        if (!check_constraints(1, p).all_satisfied()) continue;
        ++c1_points;
        const auto a = audit(1, p);
        bool attacked = false;
        for (const auto& o : a.k2.orders) {
          if (o.order.leader() == PlayerId{1} && o.verdict == Verdict::kNotResilient &&
              o.outcome_after && name(a.game.tree, *o.outcome_after) == "u1") {
            attacked = true;
          }
        }
        if (!attacked) ++c1_bad;
      }
    }
  }
  c.expect(c1_points >= 50, "at least 50 Contract 1 points");
  c.equal(c1_bad, std::size_t{0}, "Contract 1 points without the (S,B) attack");
  c.note(std::to_string(c1_points) + " Contract 1 points");
}

void campaign_note(Check& c, const CampaignResult& r) {
  std::ostringstream s;
  s << r.games << " games, " << r.checks << " checks, " << r.inconclusive << " inconclusive ("
    << r.inconclusive_rate() * 100 << "%), " << r.counterexamples.size() << " counterexamples";
  c.note(s.str());
  for (std::size_t i = 0; i < r.counterexamples.size() && i < 5; ++i) {
    const auto& x = r.counterexamples[i];
    c.note("game " + std::to_string(x.index) + " (seed " + std::to_string(x.seed) + "): " + x.detail);
  }
}

void transitivity(Check& c) {
  GeneratorConfig config;
  config.players = 3;
  config.max_depth = 3;
  config.max_branching = 2;
  config.seed = 42;
  CampaignOptions options;
  options.games = 1000;
  const auto r = check_downward_transitivity(config, 3, options);
  campaign_note(c, r);
  c.equal(r.counterexamples.size(), std::size_t{0}, "k-resilient but not (k-1)-resilient");
  c.expect(r.inconclusive_rate() < 0.05, "inconclusive rate below 5%");
}

void algorithm1(Check& c) {
  GeneratorConfig config;
  config.players = 2;
  config.max_depth = 5;
  config.max_leaves = 15;
  config.seed = 7;
  CampaignOptions options;
  options.games = 1000;
  // Materialised contract games only; orders over the node budget are skipped.
  options.method = EvalMethod::kExpand;
  const auto expanded = check_algorithm1_agreement(config, options);
  c.note("materialised:");
  campaign_note(c, expanded);
  c.equal(expanded.counterexamples.size(), std::size_t{0}, "mismatches against expansion");
  c.expect(expanded.checks > 0, "conclusive checks");
  // The same games again, with the lazy evaluator covering the large orders.
  options.method = EvalMethod::kAuto;
  const auto all = check_algorithm1_agreement(config, options);
  c.note("materialised or lazy:");
  campaign_note(c, all);
  c.equal(all.counterexamples.size(), std::size_t{0}, "mismatches against the lazy evaluator");
}

void round_trip(Check& c) {
  std::size_t failures = 0;
  for (const char* file : {"doomsday.game", "doomsday_contract.game", "fig2.game", "contract1.game",
                           "contract2.game", "transitivity.game"}) {
    const auto doc = fixtures::corpus(file);
    if (serialize(parse_game(serialize(doc))) != serialize(doc)) ++failures;
  }
  GeneratorConfig config;
  config.players = 3;
  config.max_depth = 4;
  config.max_branching = 3;
  config.max_leaves = 20;
  config.strict_generic = false;
  config.seed = 2024;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto doc = generate(config, i);
    if (serialize(parse_game(serialize(doc))) != serialize(doc)) ++failures;
  }
  c.equal(failures, std::size_t{0}, "round-trip failures");
  std::size_t goldens = 0;
  for (const auto& g : fixtures::golden_cases()) {
    const auto path = std::filesystem::path(STACKRES_GOLDEN_DIR) / g.file;
    const auto r = cli(g.args);
    c.expect(std::filesystem::exists(path) && r.out == fixtures::slurp(path.string()),
             "golden " + g.file);
    c.equal(r.status, g.status, "exit status for " + g.file);
    ++goldens;
  }
  c.note(std::to_string(goldens) + " golden outputs");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "doomsday solve and order (i)", 1, doomsday},
      {2, "three-player game, k = 1, 2, 3", 30, fig2},
      {3, "Contract 1 audit", 5, contract1},
      {4, "Contract 2 audit, fast path and expansion", 5, contract2},
      {5, "commerce parameter grids", 300, grid},
      {6, "downward-transitivity campaign", 0, transitivity},
      {7, "Algorithm 1 agreement campaign", 0, algorithm1},
      {8, "round trip and CLI goldens", 0, round_trip},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    const auto start = Clock::now();
    try {
      criterion.body(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (criterion.limit_seconds > 0 && seconds > criterion.limit_seconds) {
      check.expect(false, "took longer than " + std::to_string(criterion.limit_seconds) + " s");
    }
    const bool ok = check.failures().empty();
    if (!ok) ++failed;
    std::printf("%s %d %s (%.3f s)\n", ok ? "PASS" : "FAIL", criterion.number,
                criterion.title.c_str(), seconds);
    for (const auto& f : check.failures()) std::printf("    failed: %s\n", f.c_str());
    for (const auto& n : check.notes()) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
