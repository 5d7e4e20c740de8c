#include "stackres/expansion.hpp"

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "stackres/errors.hpp"
#include "stackres/harness.hpp"

namespace stackres {
namespace {

const PlayerId kI{0};
const PlayerId kJ{1};
const PlayerId kK{2};

std::vector<int> indices(const ContractOrder& order) {
  std::vector<int> out;
  for (PlayerId p : order.players()) out.push_back(static_cast<int>(p.index));
  return out;
}

std::vector<GameDocument> small_games(std::size_t players, std::size_t count, std::uint64_t seed,
                                      bool strict = true) {
  GeneratorConfig config;
  config.players = players;
  config.max_depth = 3;
  config.max_leaves = 6;
  config.strict_generic = strict;
  config.seed = seed;
  std::vector<GameDocument> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(generate(config, i));
  return out;
}

TEST(ContractOrder, ParseAndPrint) {
  const auto doc = fixtures::corpus("fig2.game");
  const auto order = ContractOrder::parse(doc.tree.outcomes(), "k,i");
  EXPECT_EQ(order.players(), (std::vector<PlayerId>{kK, kI}));
  EXPECT_EQ(order.leader(), kK);
  EXPECT_EQ(order.to_string(doc.tree.outcomes()), "(k, i)");
  EXPECT_EQ(ContractOrder::parse(doc.tree.outcomes(), " i , j "), ContractOrder({kI, kJ}));
}

TEST(ContractOrder, Errors) {
  const auto doc = fixtures::corpus("fig2.game");
  EXPECT_THROW(ContractOrder({kI, kI}), DuplicatePlayerInOrder);
  EXPECT_THROW(ContractOrder::parse(doc.tree.outcomes(), "i,i"), DuplicatePlayerInOrder);
  EXPECT_THROW(ContractOrder::parse(doc.tree.outcomes(), "i,z"), std::invalid_argument);
}

TEST(InjectiveOrders, CountsAndOrder) {
  EXPECT_EQ(injective_orders(3, 1).size(), 3U);
  EXPECT_EQ(injective_orders(3, 2).size(), 6U);
  EXPECT_EQ(injective_orders(3, 3).size(), 6U);
  EXPECT_EQ(injective_orders(4, 2).size(), 12U);
  EXPECT_EQ(injective_orders(5, 3).size(), 60U);
  const auto two = injective_orders(3, 2);
  EXPECT_EQ(two.front(), ContractOrder({kI, kJ}));
  EXPECT_EQ(two[1], ContractOrder({kI, kK}));
  EXPECT_EQ(two.back(), ContractOrder({kK, kJ}));
}

TEST(EnumerateCuts, Doomsday) {
  const auto doc = fixtures::corpus("doomsday.game");
  const auto cuts = enumerate_cuts(doc.tree, kI);
  ASSERT_EQ(cuts.size(), 2U);
  EXPECT_EQ(cuts[0].choices, (std::vector<std::pair<NodeId, std::uint32_t>>{{2, 0}}));
  EXPECT_EQ(cuts[1].choices, (std::vector<std::pair<NodeId, std::uint32_t>>{{2, 1}}));
  EXPECT_EQ(cut_count(doc.tree, kI), 2U);
}

TEST(EnumerateCuts, JInTheKExpandedFig2Game) {
  const auto doc = fixtures::corpus("fig2.game");
  const GameTree inner = expand_one(doc.tree, kK);
  const auto cuts = enumerate_cuts(inner, kJ);
  ASSERT_EQ(cuts.size(), 4U);
  std::vector<std::string> labels;
  for (const auto& c : cuts) labels.push_back(cut_label(inner, c));
  EXPECT_EQ(labels, (std::vector<std::string>{"LL", "LR", "RL", "RR"}));
}

TEST(EnumerateCuts, PlayerWithoutNodes) {
  const auto doc = parse_game("players a b\n(node a (leaf 1 0) (leaf 0 1))");
  const auto cuts = enumerate_cuts(doc.tree, kJ);
  ASSERT_EQ(cuts.size(), 1U);
  EXPECT_TRUE(cuts[0].choices.empty());
}

TEST(EnumerateCuts, Budget) {
  const auto doc = fixtures::corpus("fig2.game");
  EXPECT_THROW(enumerate_cuts(doc.tree, kI, ExpansionBudget{1}), BudgetExceeded);
}

TEST(ExpandOne, Doomsday) {
  const auto doc = fixtures::corpus("doomsday.game");
  const GameTree e = expand_one(doc.tree, kI);
  EXPECT_EQ(e.owner(0), kI);
  EXPECT_EQ(e.fanout(0), 2U);
  ASSERT_NE(e.layer(0), nullptr);
  EXPECT_EQ(e.layer(0)->player, kI);
  EXPECT_EQ(to_string(spe(e).payoffs), "(1, 0)");
  EXPECT_FALSE(equivalent(doc.tree, e, EquivalenceMode::kStrict));
}

TEST(ExpandOne, PlayerOwningOnlyTheRoot) {
  const auto doc = parse_game(
      "players a b\n(node a (node b (leaf 1 2) (leaf 3 1)) (node b (leaf 2 0) (leaf 0 5)))");
  const GameTree e = expand_one(doc.tree, kI);
  EXPECT_EQ(e.fanout(0), 2U);
  EXPECT_EQ(spe(e).payoffs, spe(doc.tree).payoffs);
}

TEST(ExpandOne, PlayerWithoutNodes) {
  const auto doc = parse_game("players a b\n(node a (leaf 1 0) (leaf 0 1))");
  const GameTree e = expand_one(doc.tree, kJ);
  EXPECT_EQ(e.fanout(0), 1U);
  EXPECT_EQ(e.size(), doc.tree.size() + 1);
  EXPECT_EQ(spe(e).payoffs, spe(doc.tree).payoffs);
}

TEST(ExpandOne, NodeCountFormulaAndPrediction) {
  for (std::size_t players : {2, 3}) {
    for (const auto& doc : small_games(players, 60, 11 + players)) {
      for (std::uint32_t p = 0; p < players; ++p) {
        const PlayerId player{p};
        std::size_t expected = 1;
        for (const auto& cut : enumerate_cuts(doc.tree, player)) {
          expected += prune(doc.tree, player, cut).size();
        }
        const GameTree e = expand_one(doc.tree, player);
        EXPECT_EQ(e.size(), expected);
        EXPECT_EQ(predicted_expansion_size(doc.tree, player), expected);
      }
    }
  }
}

TEST(ExpandOne, LeavesPointAtOriginalOutcomes) {
  const auto doc = fixtures::corpus("fig2.game");
  const GameTree e = expand_order(doc.tree, ContractOrder({kJ, kK}));
  for (NodeId leaf : e.leaves()) {
    ASSERT_LT(e.outcome(leaf), doc.tree.leaf_count());
    const NodeId original = doc.tree.leaves()[e.outcome(leaf)];
    EXPECT_EQ(e.payoffs(leaf), doc.tree.payoffs(original));
  }
}

TEST(ExpandOne, SoleLeaderNeverLoses) {
  for (const auto& doc : small_games(3, 80, 21)) {
    const auto before = spe(doc.tree).payoffs;
    for (std::uint32_t p = 0; p < 3; ++p) {
      const auto after = spe(expand_one(doc.tree, PlayerId{p})).payoffs;
      EXPECT_GE(after[p], before[p]) << serialize(doc);
    }
  }
}

TEST(ExpandOne, Idempotent) {
  for (const auto& doc : small_games(2, 60, 31)) {
    for (std::uint32_t p = 0; p < 2; ++p) {
      const PlayerId player{p};
      const GameTree once = expand_one(doc.tree, player);
      if (predicted_expansion_size(once, player) > 200'000) continue;
      const GameTree twice = expand_one(once, player);
      EXPECT_EQ(spe(twice).payoffs, spe(once).payoffs) << serialize(doc);
    }
  }
}

TEST(ExpandOrder, EmptyOrderIsIdentity) {
  const auto doc = fixtures::corpus("fig2.game");
  EXPECT_EQ(serialize(expand_order(doc.tree, ContractOrder())), serialize(doc));
}

TEST(ExpandOrder, Fig2Orders) {
  const auto doc = fixtures::corpus("fig2.game");
  const auto& table = doc.tree.outcomes();
  auto solve = [&](std::vector<PlayerId> order) {
    const SpeResult s = spe(expand_order(doc.tree, ContractOrder(std::move(order))));
    return table.name(s.outcome) + " " + to_string(s.payoffs);
  };
  EXPECT_EQ(solve({kI, kJ}), "u4 (10, -1, -10)");
  EXPECT_EQ(solve({kI, kJ, kK}), "u4 (10, -1, -10)");
  EXPECT_EQ(solve({kK, kI, kJ}), "u3 (0, 10, 10)");
}

TEST(ExpandOrder, Fig2KIJMatchesBruteForceOracle) {
  const auto doc = fixtures::corpus("fig2.game");
  const auto node = oracle::expand_order(oracle::from_library(doc.tree), {2, 0, 1});
  EXPECT_EQ(oracle::spe(node), (oracle::Vec{0, 10, 10}));
}

TEST(ExpandOrder, Fig2Sizes) {
  const auto doc = fixtures::corpus("fig2.game");
  EXPECT_EQ(expand_one(doc.tree, kK).size(), 11U);
  EXPECT_EQ(expand_order(doc.tree, ContractOrder({kJ, kK})).size(), 29U);
  const GameTree full = expand_order(doc.tree, ContractOrder({kI, kJ, kK}));
  EXPECT_EQ(full.size(), 3329U);
  EXPECT_EQ(oracle::count_nodes(oracle::expand_order(oracle::from_library(doc.tree), {0, 1, 2})),
            3329U);
}

TEST(ExpandOrder, MatchesOracleOnRandomGames) {
  for (std::size_t players : {2, 3}) {
    for (bool strict : {true, false}) {
      for (const auto& doc : small_games(players, 40, 41 + players, strict)) {
        const auto node = oracle::from_library(doc.tree);
        for (std::size_t k = 1; k <= players; ++k) {
          for (const auto& order : injective_orders(players, k)) {
            GameTree e;
            try {
              e = expand_order(doc.tree, order, ExpansionBudget{20'000});
            } catch (const BudgetExceeded&) {
              continue;
            }
            const auto expected = oracle::spe(oracle::expand_order(node, indices(order)));
            EXPECT_EQ(oracle::to_vec(spe(e).payoffs), expected)
                << serialize(doc) << order.to_string(doc.tree.outcomes());
          }
        }
      }
    }
  }
}

TEST(ExpandOrder, Budget) {
  const auto doc = fixtures::corpus("fig2.game");
  EXPECT_THROW(expand_order(doc.tree, ContractOrder({kI, kJ, kK}), ExpansionBudget{1000}),
               BudgetExceeded);
}

TEST(ExpandContracts, MatchesExplicitExpansion) {
  const auto sugar = fixtures::corpus("doomsday_contract.game");
  const auto plain = fixtures::corpus("doomsday.game");
  EXPECT_EQ(serialize(expand_contracts(sugar.tree)), serialize(expand_one(plain.tree, kI)));
}

TEST(ExpandContracts, NoContractsIsIdentity) {
  const auto doc = fixtures::corpus("fig2.game");
  EXPECT_EQ(serialize(expand_contracts(doc.tree)), serialize(doc));
}

TEST(Witness, DoomsdayDetonationThreat) {
  const auto doc = fixtures::corpus("doomsday.game");
  const GameTree e = expand_one(doc.tree, kI);
  const AttackWitness w = extract_witness(e, spe(e).profile);
  ASSERT_EQ(w.commitments.size(), 1U);
  EXPECT_EQ(w.commitments[0].player, kI);
  EXPECT_EQ(w.commitments[0].label, "L");
  EXPECT_EQ(w.commitments[0].cut.choice_at(2), 0U);
  EXPECT_EQ(to_string(w.payoffs), "(1, 0)");
}

TEST(Witness, Fig2LeaderThreatensToPlayLeft) {
  const auto doc = fixtures::corpus("fig2.game");
  const GameTree e = expand_order(doc.tree, ContractOrder({kI, kJ}));
  const AttackWitness w = extract_witness(e, spe(e).profile);
  ASSERT_EQ(w.commitments.size(), 2U);
  EXPECT_EQ(w.commitments[0].player, kI);
  // Left unless j commits to right.
  EXPECT_EQ(w.commitments[0].label, "LR");
  EXPECT_EQ(w.commitments[1].player, kJ);
  EXPECT_EQ(w.commitments[1].label, "R");
  EXPECT_EQ(doc.tree.outcomes().name(w.outcome), "u4");
}

TEST(Witness, ResilientOrderEndsAtTheSpeLeaf) {
  const auto doc = fixtures::corpus("fig2.game");
  const GameTree e = expand_order(doc.tree, ContractOrder({kK, kI, kJ}));
  const AttackWitness w = extract_witness(e, spe(e).profile);
  EXPECT_EQ(w.outcome, spe(doc.tree).outcome);
  EXPECT_EQ(w.commitments.size(), 3U);
}

}  // namespace
}  // namespace stackres
